"""
Signals on Z_n, time shifts and modulations, correlation measures and the
two bridge expansions.

Correlation measures of a unit signal set S = {phi_0, ..., phi_{M-1}}:

* ``lambda`` -- max |<phi_j, M_w L_tau phi_j'>| over all (j, j', w, tau) with
  j != j' or (w, tau) != (0, 0);
* ``theta``  -- the same with w = 0, over j != j' or tau != 0;
* ``nu``     -- max |<phi_j, phi_j'>| over j != j'.

Witnesses are the lexicographically smallest index tuples whose magnitude is
within ``TIE_TOL`` of the maximum, so results do not depend on evaluation
order or thread scheduling.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ._json import dumps17, format_float

UNIT_TOL = 1e-9
DISTINCT_TOL = 1e-6
TIE_TOL = 1e-12
LAMBDA_GUARD = 1e-9


class PeriodMismatch(ValueError):
    pass


class NonUnitSignal(ValueError):
    def __init__(self, index: int, norm: float):
        super().__init__(f"signal {index} has norm {norm:.12g}, expected 1")
        self.index = index
        self.norm = norm


class DuplicateSignals(ValueError):
    def __init__(self, i: int, j: int):
        super().__init__(f"signals {i} and {j} coincide (max coordinate difference <= {DISTINCT_TOL})")
        self.pair = (i, j)


class DegenerateLambda(ValueError):
    """Bridge expansions need lambda < 1; otherwise the expanded set has repeats."""


class MalformedSetFile(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Signal:
    """A complex-valued function on Z_n, stored as its length-n value vector."""

    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=complex).reshape(-1)
        if v.size < 2:
            raise ValueError("signal period n must be >= 2")
        if not np.all(np.isfinite(v)):
            raise ValueError("signal values must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def n(self) -> int:
        return self.values.size

    @property
    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.values) ** 2)))

    def __len__(self):
        return self.n

    def __eq__(self, other):
        return isinstance(other, Signal) and self.n == other.n and np.array_equal(self.values, other.values)

    def __hash__(self):
        return hash(self.values.tobytes())


@dataclass(frozen=True, eq=False)
class SignalSet:
    """An (n, M) set of distinct unit signals with a provenance record.

    ``allow_duplicates`` relaxes the distinctness check for sets that are
    measured but never expanded (such sets have lambda = 1, which the bridges
    reject).
    """

    signals: tuple
    meta: dict = field(default_factory=lambda: {"construction": "external", "field": None, "e": None})
    allow_duplicates: bool = False

    def __post_init__(self):
        sigs = tuple(s if isinstance(s, Signal) else Signal(s) for s in self.signals)
        if not sigs:
            raise ValueError("a signal set needs at least one signal")
        n = sigs[0].n
        for i, s in enumerate(sigs):
            if s.n != n:
                raise PeriodMismatch(f"signal {i} has period {s.n}, expected {n}")
        for i, s in enumerate(sigs):
            if abs(s.norm**2 - 1.0) > UNIT_TOL:
                raise NonUnitSignal(i, s.norm)
        object.__setattr__(self, "signals", sigs)
        if not self.allow_duplicates:
            dup = self.duplicate_pair()
            if dup is not None:
                raise DuplicateSignals(*dup)

    @property
    def n(self) -> int:
        return self.signals[0].n

    @property
    def M(self) -> int:
        return len(self.signals)

    def duplicate_pair(self) -> tuple[int, int] | None:
        return _first_duplicate(self.matrix())

    def matrix(self) -> np.ndarray:
        """M x n array of signal values."""
        return np.stack([s.values for s in self.signals])

    def __len__(self):
        return self.M

    def __iter__(self):
        return iter(self.signals)


def _first_duplicate(V: np.ndarray, block: int = 512):
    """Lexicographically first pair (i, j), i < j, with max |V_i - V_j| <= DISTINCT_TOL."""
    M, n = V.shape
    # ||a - b||^2 <= n * DISTINCT_TOL^2 for every near-duplicate, so screen with
    # the Gram matrix and confirm candidates coordinatewise.
    screen = n * DISTINCT_TOL**2 + 1e-9
    sq = np.sum(np.abs(V) ** 2, axis=1)
    for start in range(0, M, block):
        rows = V[start:start + block]
        d2 = sq[start:start + block, None] + sq[None, :] - 2 * np.real(rows @ V.conj().T)
        for bi, j in zip(*np.nonzero(d2 <= screen)):
            i = start + bi
            if j > i and np.max(np.abs(V[i] - V[j])) <= DISTINCT_TOL:
                return int(i), int(j)
    return None


def _as_signal(s) -> Signal:
    return s if isinstance(s, Signal) else Signal(s)


def inner(a: Signal, b: Signal) -> complex:
    """<a, b> = sum_t a(t) * conj(b(t))."""
    a, b = _as_signal(a), _as_signal(b)
    if a.n != b.n:
        raise PeriodMismatch(f"periods differ: {a.n} vs {b.n}")
    return complex(np.sum(a.values * np.conj(b.values)))


def time_shift(s: Signal, tau: int) -> Signal:
    """(L_tau s)(t) = s(t + tau)."""
    s = _as_signal(s)
    return Signal(np.roll(s.values, -(tau % s.n)))


def modulate(s: Signal, w: int) -> Signal:
    """(M_w s)(t) = exp(2 pi i w t / n) * s(t)."""
    s = _as_signal(s)
    n = s.n
    t = np.arange(n)
    return Signal(np.exp(2j * np.pi * ((w % n) * t % n) / n) * s.values)


def papr(s: Signal) -> float:
    """Largest coordinate modulus (at least 1/sqrt(n) for unit signals)."""
    return float(np.max(np.abs(_as_signal(s).values)))


@dataclass(frozen=True)
class CorrelationProfile:
    nu: float
    theta: float
    lam: float
    witness_nu: tuple | None
    witness_theta: tuple | None
    witness_lambda: tuple | None
    papr_max: float
    n: int
    M: int

    # ``lambda`` is a keyword, so the field is ``lam``; ``lambda_`` is an alias
    @property
    def lambda_(self) -> float:
        return self.lam

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "M": self.M,
            "nu": self.nu,
            "theta": self.theta,
            "lambda": self.lam,
            "witness_nu": list(self.witness_nu) if self.witness_nu else None,
            "witness_theta": list(self.witness_theta) if self.witness_theta else None,
            "witness_lambda": list(self.witness_lambda) if self.witness_lambda else None,
            "papr_max": self.papr_max,
        }


def _threads() -> int:
    env = os.environ.get("TPSIG_THREADS")
    if env:
        try:
            k = int(env)
        except ValueError:
            k = 0
        if k >= 1:
            return k
    return os.cpu_count() or 1


def _dft_matrix(n: int) -> np.ndarray:
    # F[t, w] = exp(-2 pi i w t / n); exponent reduced mod n before scaling
    t = np.arange(n)
    return np.exp(-2j * np.pi * (np.outer(t, t) % n) / n)


def _shift_index(n: int) -> np.ndarray:
    t = np.arange(n)
    return (t[None, :] + t[:, None]) % n  # [tau, t] -> t + tau


def ambiguity_row(V: np.ndarray, j: int, F=None, idx=None) -> np.ndarray:
    """|<phi_j, M_w L_tau phi_j'>| as an array indexed [j', w, tau].

    The sum over t is evaluated as a dense matrix product, i.e. the same
    arithmetic as the direct quadruple loop, without FFT.
    """
    M, n = V.shape
    F = _dft_matrix(n) if F is None else F
    idx = _shift_index(n) if idx is None else idx
    X = V[j][None, None, :] * np.conj(V[:, idx])  # [j', tau, t]
    R = X @ F  # [j', tau, w]
    return np.abs(R).transpose(0, 2, 1)


def _first_at_least(A: np.ndarray, threshold: float):
    flat = np.flatnonzero(A.reshape(-1) >= threshold)
    return tuple(int(x) for x in np.unravel_index(flat[0], A.shape))


def ambiguity_magnitudes(S: SignalSet) -> np.ndarray:
    """Full |<phi_j, M_w L_tau phi_j'>| array indexed [j, j', w, tau]."""
    V = S.matrix()
    M, n = V.shape
    F, idx = _dft_matrix(n), _shift_index(n)
    workers = min(_threads(), M)
    if workers > 1:
        with ThreadPoolExecutor(workers) as ex:
            rows = list(ex.map(lambda j: ambiguity_row(V, j, F, idx), range(M)))
    else:
        rows = [ambiguity_row(V, j, F, idx) for j in range(M)]
    return np.stack(rows)


def _measures_from_array(A: np.ndarray):
    M = A.shape[0]
    lam_mask = np.ones(A.shape, dtype=bool)
    for j in range(M):
        lam_mask[j, j, 0, 0] = False
    L = np.where(lam_mask, A, -1.0)
    lam = float(L.max())
    w_lam = _first_at_least(L, lam - TIE_TOL)

    T = np.where(lam_mask[:, :, 0, :], A[:, :, 0, :], -1.0)  # [j, j', tau]
    theta = float(T.max())
    w_theta = _first_at_least(T, theta - TIE_TOL)

    if M > 1:
        N = A[:, :, 0, 0].copy()
        np.fill_diagonal(N, -1.0)
        nu = float(N.max())
        w_nu = _first_at_least(N, nu - TIE_TOL)
    else:
        nu, w_nu = 0.0, None
    return nu, w_nu, theta, w_theta, lam, w_lam


def profile(S: SignalSet) -> CorrelationProfile:
    """Exhaustive nu, theta, lambda with lexicographic witnesses.

    Cost is O(M^2 n^3) arithmetic and O(M^2 n^2) memory.
    """
    A = ambiguity_magnitudes(S)
    nu, w_nu, theta, w_theta, lam, w_lam = _measures_from_array(A)
    return CorrelationProfile(
        nu=nu,
        theta=theta,
        lam=lam,
        witness_nu=w_nu,
        witness_theta=w_theta,
        witness_lambda=w_lam,
        papr_max=max(papr(s) for s in S),
        n=S.n,
        M=S.M,
    )


def lambda_of(S: SignalSet) -> float:
    return profile(S).lam


def nu_of(S: SignalSet, block: int = 512) -> tuple[float, tuple | None]:
    """nu and its witness (j, j') using only Gram-matrix rows; suits large M."""
    V = S.matrix()
    M = V.shape[0]
    if M == 1:
        return 0.0, None
    row_max = np.empty(M)
    for start in range(0, M, block):
        G = np.abs(V[start:start + block] @ V.conj().T)
        for bi in range(G.shape[0]):
            G[bi, start + bi] = -1.0
        row_max[start:start + block] = G.max(axis=1)
    nu = float(row_max.max())
    j = int(np.flatnonzero(row_max >= nu - TIE_TOL)[0])
    g = np.abs(V @ np.conj(V[j]))
    g[j] = -1.0
    # the row maximum of j is within TIE_TOL of nu; take the first j' reaching the global threshold
    return nu, (j, int(np.flatnonzero(g >= nu - TIE_TOL)[0]))


def theta_of(S: SignalSet) -> tuple[float, tuple]:
    """theta and its witness (j, j', tau) without evaluating modulations."""
    V = S.matrix()
    M, n = V.shape
    T = np.empty((M, M, n))
    for tau in range(n):
        T[:, :, tau] = np.abs(V @ np.conj(np.roll(V, -tau, axis=1)).T)
    for j in range(M):
        T[j, j, 0] = -1.0
    theta = float(T.max())
    return theta, _first_at_least(T, theta - TIE_TOL)


def _bridge_meta(S: SignalSet, kind: str) -> dict:
    meta = dict(S.meta)
    meta["construction"] = f"{kind}:{S.meta.get('construction', 'external')}"
    return meta


def _check_lambda(S: SignalSet, lam: float | None):
    lam = profile(S).lam if lam is None else lam
    if lam >= 1 - LAMBDA_GUARD:
        raise DegenerateLambda(f"lambda = {lam:.12g} >= 1 - {LAMBDA_GUARD}; bridge would repeat signals")


def bridge_full(S: SignalSet, lam: float | None = None) -> SignalSet:
    """The (n, n^2 M) set of all M_w L_tau phi_j, ordered by (j, w, tau).

    Its nu equals lambda of ``S``.  ``lam`` may be passed to skip recomputing
    the source profile.
    """
    _check_lambda(S, lam)
    n = S.n
    out = []
    for phi in S:
        for w in range(n):
            for tau in range(n):
                out.append(modulate(time_shift(phi, tau), w))
    return SignalSet(tuple(out), _bridge_meta(S, "bridge_full"))


def bridge_phase(S: SignalSet, lam: float | None = None) -> SignalSet:
    """The (n, n M) set of all M_w phi_j, ordered by (j, w).  Its theta equals lambda of ``S``."""
    _check_lambda(S, lam)
    out = [modulate(phi, w) for phi in S for w in range(S.n)]
    return SignalSet(tuple(out), _bridge_meta(S, "bridge_phase"))


# --- JSON interchange ---

def set_to_json(S: SignalSet) -> str:
    """Serialize to the signal-set JSON schema with 17 significant digits."""
    sigs = ",".join(
        "[" + ",".join(f"[{format_float(z.real)},{format_float(z.imag)}]" for z in s.values) + "]" for s in S
    )
    meta = dumps17(S.meta, indent=None)
    return f'{{"n":{S.n},"M":{S.M},"signals":[{sigs}],"meta":{meta}}}\n'


def set_from_json(text: str) -> SignalSet:
    """Parse the signal-set JSON schema.

    Structural problems raise ``MalformedSetFile``; data violations (non-unit or
    duplicate signals) raise ``NonUnitSignal`` / ``DuplicateSignals``.
    """
    try:
        doc = json.loads(text)
        n, M, raw = int(doc["n"]), int(doc["M"]), doc["signals"]
        meta = doc.get("meta") or {"construction": "external", "field": None, "e": None}
        arr = np.array(raw, dtype=float)
    except (ValueError, KeyError, TypeError) as exc:
        raise MalformedSetFile(f"malformed signal-set JSON: {exc}") from exc
    if arr.ndim != 3 or arr.shape[2] != 2:
        raise MalformedSetFile("signals must be an M x n x 2 array of [re, im] pairs")
    if arr.shape[0] != M or arr.shape[1] != n:
        raise MalformedSetFile(f"declared (n, M) = ({n}, {M}) but found ({arr.shape[1]}, {arr.shape[0]})")
    if not np.all(np.isfinite(arr)):
        raise MalformedSetFile("non-finite signal value")
    if n < 2:
        raise MalformedSetFile("n must be >= 2")
    values = arr[:, :, 0] + 1j * arr[:, :, 1]
    return SignalSet(tuple(Signal(v) for v in values), meta, allow_duplicates=True)


def standard_basis(n: int) -> SignalSet:
    return SignalSet(tuple(Signal(np.eye(n)[i]) for i in range(n)))


def random_unit_set(n: int, M: int, rng: np.random.Generator) -> SignalSet:
    """M random unit vectors of length n (complex Gaussian, normalized)."""
    V = rng.standard_normal((M, n)) + 1j * rng.standard_normal((M, n))
    V /= np.linalg.norm(V, axis=1, keepdims=True)
    return SignalSet(tuple(Signal(v) for v in V))


def flat_unit(n: int) -> Signal:
    return Signal(np.full(n, 1 / math.sqrt(n), dtype=complex))
