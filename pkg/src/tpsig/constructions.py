"""
Gauss-sum constructions of unit time-phase signal sets.

``construct_gauss(p, m)``
    one signal of length n = q - 1, phi(i) = zeta_p^T(gamma^i) / sqrt(n);
    lambda = sqrt(n + 1) / n exactly.
``construct_cyclotomic(p, m, e)``
    e signals of length n = (q - 1)/e, phi_i(l) = zeta_p^T(gamma^(i + l e)) / sqrt(n),
    one per coset of the index-e subgroup of GF(q)^x; lambda <= sqrt(e n + 1) / n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .finite_field import FieldSpec, make_field, trace
from .signals import Signal, SignalSet, ambiguity_magnitudes, _measures_from_array, papr

VERIFY_TOL = 1e-9


class BadDivisor(ValueError):
    pass


class VerificationFailed(AssertionError):
    def __init__(self, message: str, witness: tuple | None = None):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True)
class ConstructionParams:
    p: int
    m: int
    e: int = 1

    def __post_init__(self):
        q1 = self.p**self.m - 1
        if self.e < 1:
            raise BadDivisor("e must be >= 1")
        if q1 % self.e:
            raise BadDivisor(f"e must divide q-1 (e={self.e}, q-1={q1})")
        if q1 // self.e < 2:
            raise BadDivisor(f"n = (q-1)/e = {q1 // self.e} must be >= 2")

    @property
    def q(self) -> int:
        return self.p**self.m

    @property
    def n(self) -> int:
        return (self.q - 1) // self.e

    @property
    def M(self) -> int:
        return self.e


def trace_exponents(f: FieldSpec) -> list[int]:
    """T(gamma^k) for k = 0..q-2."""
    return [trace(x, f) for x in f.exp_table]


def _zeta_p_signal(exponents, p: int) -> Signal:
    n = len(exponents)
    k = np.asarray(exponents, dtype=float)
    return Signal(np.exp(2j * np.pi * k / p) / math.sqrt(n))


def construct_gauss(p: int, m: int, f: FieldSpec | None = None) -> SignalSet:
    """(n, 1) set with n = p^m - 1.  ``f`` overrides the default field realization."""
    f = make_field(p, m) if f is None else f
    n = f.q - 1
    if n < 2:
        raise BadDivisor(f"q = {f.q} gives n = {n}; need q >= 3")
    meta = {"construction": "gauss", "field": f.to_dict(), "e": 1}
    if n == 2:
        meta["degenerate"] = True
    return SignalSet((_zeta_p_signal(trace_exponents(f), p),), meta)


def construct_cyclotomic(p: int, m: int, e: int, f: FieldSpec | None = None) -> SignalSet:
    """(n, e) set with n = (p^m - 1)/e, one signal per cyclotomic class."""
    if e < 2:
        raise BadDivisor("cyclotomic construction needs e >= 2 (use construct_gauss for e = 1)")
    params = ConstructionParams(p, m, e)
    f = make_field(p, m) if f is None else f
    tr = trace_exponents(f)
    n = params.n
    sigs = tuple(_zeta_p_signal([tr[i + l * e] for l in range(n)], p) for i in range(e))
    S = SignalSet(sigs, {"construction": "cyclotomic", "field": f.to_dict(), "e": e}, allow_duplicates=True)
    if S.duplicate_pair() is not None:
        # repeated cosets make lambda = 1; only happens when sqrt(en+1)/n >= 1
        S.meta["degenerate"] = True
    return S


def construct(params: ConstructionParams) -> SignalSet:
    if params.e == 1:
        return construct_gauss(params.p, params.m)
    return construct_cyclotomic(params.p, params.m, params.e)


def lambda_formula(n: int, e: int = 1) -> float:
    """Exact lambda for e = 1; the upper bound sqrt(e n + 1)/n for e >= 2."""
    return math.sqrt(e * n + 1) / n


@dataclass
class VerificationRecord:
    construction: str
    n: int
    M: int
    lambda_measured: float
    lambda_formula: float
    gap: float
    witness_lambda: tuple
    papr_max: float
    # Gauss sets only: magnitude class for each (w != 0, tau != 0) pattern
    magnitude_cases: dict = field(default_factory=dict)
    magnitude_values: list = field(default_factory=list)


def _classify(value: float, levels: dict[str, float]) -> str | None:
    for name, lv in levels.items():
        if abs(value - lv) <= VERIFY_TOL:
            return name
    return None


def verify_construction(S: SignalSet, A: np.ndarray | None = None) -> VerificationRecord:
    """Numerically confirm the lambda value (e = 1) or lambda bound (e >= 2).

    For single-signal sets the magnitudes |<phi, M_w L_tau phi>| are also
    tabulated by case -- (tau = 0, w != 0), (tau != 0, w = 0) and
    (tau != 0, w != 0) -- recording which of {0, 1/n, sqrt(n+1)/n} each case
    actually attains.
    """
    kind = S.meta.get("construction")
    if kind not in ("gauss", "cyclotomic"):
        raise ValueError(f"not a Gauss-sum construction: {kind!r}")
    A = ambiguity_magnitudes(S) if A is None else A
    nu, _, theta, _, lam, w_lam = _measures_from_array(A)
    n, M = S.n, S.M
    e = 1 if kind == "gauss" else int(S.meta["e"])
    target = lambda_formula(n, e)
    rec = VerificationRecord(
        construction=kind,
        n=n,
        M=M,
        lambda_measured=lam,
        lambda_formula=target,
        gap=target - lam,
        witness_lambda=w_lam,
        papr_max=max(papr(s) for s in S),
    )
    if kind == "gauss":
        if abs(lam - target) > VERIFY_TOL:
            raise VerificationFailed(
                f"lambda {lam:.15g} differs from sqrt(n+1)/n = {target:.15g}", w_lam
            )
        levels = {"0": 0.0, "1/n": 1.0 / n, "sqrt(n+1)/n": target}
        cases = {"tau=0,w!=0": set(), "tau!=0,w=0": set(), "tau!=0,w!=0": set()}
        for w in range(n):
            for tau in range(n):
                if w == 0 and tau == 0:
                    continue
                v = float(A[0, 0, w, tau])
                name = _classify(v, levels)
                if name is None:
                    raise VerificationFailed(
                        f"|<phi, M_{w} L_{tau} phi>| = {v:.15g} not in {{0, 1/n, sqrt(n+1)/n}}",
                        (0, 0, w, tau),
                    )
                key = "tau=0,w!=0" if tau == 0 else ("tau!=0,w=0" if w == 0 else "tau!=0,w!=0")
                cases[key].add(name)
        rec.magnitude_cases = {k: sorted(v) for k, v in cases.items()}
        rec.magnitude_values = sorted({n2 for v in cases.values() for n2 in v})
    else:
        if lam > target + VERIFY_TOL:
            raise VerificationFailed(
                f"lambda {lam:.15g} exceeds sqrt(en+1)/n = {target:.15g}", w_lam
            )
    return rec


def prime_powers(lo: int, hi: int) -> list[tuple[int, int, int]]:
    """(q, p, m) for prime powers lo <= q <= hi, ascending in q."""
    from .finite_field import is_prime

    out = []
    for q in range(max(lo, 2), hi + 1):
        for p in range(2, q + 1):
            if q % p == 0:
                if is_prime(p):
                    m, r = 0, q
                    while r % p == 0:
                        r //= p
                        m += 1
                    if r == 1:
                        out.append((q, p, m))
                break
    return out


def cyclotomic_parameters(q_max: int, e_max: int | None = None, q_min: int = 2):
    """(p, m, e) with q <= q_max, e | q-1, 2 <= e, n = (q-1)/e >= 2; ascending q then e."""
    out = []
    for q, p, m in prime_powers(q_min, q_max):
        for e in range(2, (q - 1) // 2 + 1):
            if e_max is not None and e > e_max:
                break
            if (q - 1) % e == 0:
                out.append((p, m, e))
    return out
