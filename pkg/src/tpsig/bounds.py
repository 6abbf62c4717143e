"""
Lower bounds on lambda and upper bounds on M for unit time-phase signal sets,
plus the time-signal (codebook) bounds they are derived from.

Conventions
-----------
* Binomials and factorials are exact integers; conversion to float happens
  at the final division.
* LP bounds (``lp_bound_*``) return an upper bound on M, i.e. the printed
  right-hand side for nM divided by n, unfloored.
* Radicands that go negative mean the bound carries no information; the
  value is clamped to 0 and reported as not applicable.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial

from ._json import dumps17

LAMBDA_TOL = 1e-9
PIECE_TOL = 1e-12

ALPHABETS = ("complex", "real", "binary", "qary")


class IntervalGap(ValueError):
    """lambda^2 lies in none of the intervals of a piecewise bound."""


class KOutOfRange(ValueError):
    pass


def _root(x: Fraction | float, k: int) -> float:
    x = float(x)
    return x ** (1.0 / (2 * k)) if x > 0 else 0.0


# --- bounds on lambda obtained through the full bridge (n^2 M signals) ---

def welch_timephase(n: int, M: int, k: int = 1) -> float:
    """w_k = [(n^2 M - C) / ((n^2 M - 1) C)]^(1/2k), C = binom(n+k-1, k).

    Returns 0 when n^2 M <= C (bound vacuous).
    """
    if k < 1:
        raise KOutOfRange("k must be >= 1")
    c = comb(n + k - 1, k)
    N = n * n * M
    if N <= c:
        return 0.0
    return _root(Fraction(N - c, (N - 1) * c), k)


def levenstein_timephase(n: int, M: int) -> float:
    """sqrt((2nM - n - 1) / ((n+1)(nM - 1))); stated for M > 1, equals w_1 at M = 1."""
    return _root(Fraction(2 * n * M - n - 1, (n + 1) * (n * M - 1)), 1)


# --- codebook (time signal set) bounds on nu ---

def welch_time(n: int, M: int, k: int = 1) -> float:
    """Welch bound on nu for M unit vectors in C^n; 0 when M = 1 or the numerator is negative."""
    if k < 1:
        raise KOutOfRange("k must be >= 1")
    if M <= 1:
        return 0.0
    c = comb(n + k - 1, k)
    if M <= c:
        return 0.0
    return _root(Fraction(M - c, (M - 1) * c), k)


def levenstein_time(n: int, M: int, alphabet: str = "complex") -> float:
    """Levenshtein bound on nu (real: M > n(n+1)/2, complex: M > n^2)."""
    if M <= n:
        return 0.0
    if alphabet == "real":
        return _root(Fraction(3 * M - n * n - 2 * n, (n + 2) * (M - n)), 1)
    if alphabet == "complex":
        return _root(Fraction(2 * M - n * n - n, (n + 1) * (M - n)), 1)
    raise ValueError(f"alphabet must be 'real' or 'complex', got {alphabet!r}")


def levenstein_time_applicable(n: int, M: int, alphabet: str = "complex") -> bool:
    if alphabet == "real":
        return 2 * M > n * (n + 1)
    return M > n * n


# --- LP bounds on M through the phase bridge ---
# Each piece is (lo, hi, lo_inclusive, formula(x)) with x = lambda^2.
# Formulas are the printed right-hand sides for nM.

def _complex_pieces(n):
    c3 = (2 * (n + 2) + math.sqrt(2 * (n + 1) * (n + 2))) / ((n + 2) * (n + 3))
    c4 = (3 * (n + 3) + math.sqrt(3 * (n + 3) * (n + 1))) / ((n + 3) * (n + 4))
    return [
        (0.0, 1 / (n + 1), True, lambda x: (1 - x) / (1 - n * x)),
        (1 / (n + 1), 2 / (n + 2), False, lambda x: (n + 1) * (1 - x) / (2 - (n + 1) * x)),
        (2 / (n + 2), c3, False,
         lambda x: n * (n + 1) * (n + 2) * (1 - x) ** 2 / ((n + 1) * (n + 2) * x * x - 4 * (n + 1) * x + 2)),
        (c3, c4, True,
         lambda x: n * (n + 1) * (n + 2) * ((n + 3) * x - 2) * (1 - x)
         / (12 * (n + 2) * x - 2 * (n + 2) * (n + 3) * x * x - 12)),
    ]


def _binary_pieces(n):
    n2 = n * n
    b3 = (3 * n - 10 + math.sqrt(6 * n2 - 42 * n + 76)) / n2
    b4 = (5 * (n - 4) + math.sqrt(10 * n2 - 90 * n + 216)) / n2
    return [
        (0.0, (n - 2) / n2, True, lambda x: (1 - x) / (1 - n * x)),
        ((n - 2) / n2, (3 * n - 8) / n2, True, lambda x: n2 * (1 - x) / (3 * n - 2 - n2 * x)),
        ((3 * n - 8) / n2, b3, True,
         lambda x: n * (1 - x) * ((n - 2) * (n2 - 3 * n + 8) - (n2 - n + 2) * n2 * x)
         / (6 * n * (n - 2) - 4 * (3 * n - 4) * n2 * x + 2 * n2 * n2 * x * x)),
        (b3, b4, True,
         lambda x: n2 * (1 - x) / 6 * (3 * n**3 - 23 * n2 + 90 * n - 136 - (n2 - 3 * n + 8) * n2 * x)
         / (15 * n2 - 50 * n + 24 - 10 * (n - 2) * n2 * x + n2 * n2 * x * x)),
    ]


def _qary_pieces(n):
    n2 = n * n
    q2 = (2 * n2 - 5 * n + 4) / (n2 * (n - 1))
    q3 = (2 * n - 2 + math.sqrt(2 * n2 - 5 * n + 4)) / n2
    return [
        (0.0, (n - 1) / n2, True, lambda x: (1 - x) / (1 - n * x)),
        ((n - 1) / n2, q2, True, lambda x: n2 * (1 - x) / (2 * n - 1 - n2 * x)),
        (q2, q3, True,
         lambda x: n2 * (1 - x) * ((n2 - n + 1) * n2 * x - n**3 + 3 * n2 - 5 * n + 4)
         / (n * (4 * (n - 1) * n2 * x - n2 * n2 * x * x - 2 * n2 + 3 * n))),
    ]


_PIECES = {"complex": _complex_pieces, "binary": _binary_pieces, "qary": _qary_pieces}

# pieces whose printed formula carries theta inside a lambda statement
TRANSCRIPTION_CORRECTED = {("binary", 3), ("binary", 4), ("qary", 3)}


def lp_intervals(family: str, n: int) -> list[tuple[float, float]]:
    """[lo, hi] interval on lambda^2 for each piece (1-based order)."""
    return [(lo, hi) for lo, hi, _, _ in _PIECES[family](n)]


def lp_piece(family: str, n: int, lam: float) -> int:
    """1-based index of the first piece whose lambda^2 interval holds ``lam``."""
    x = lam * lam
    # first match wins, so a shared endpoint belongs to the lower piece
    for i, (lo, hi, lo_incl, _) in enumerate(_PIECES[family](n), start=1):
        if lo > hi:
            continue
        above = x >= lo - PIECE_TOL if lo_incl else x > lo
        if above and x <= hi + PIECE_TOL:
            return i
    raise IntervalGap(f"lambda^2 = {x:.12g} lies in no {family} piece for n = {n}")


def _lp(family: str, n: int, lam: float, piece: int | None) -> float:
    pieces = _PIECES[family](n)
    if piece is None:
        piece = lp_piece(family, n, lam)
    if not 1 <= piece <= len(pieces):
        raise ValueError(f"{family} bound has pieces 1..{len(pieces)}")
    x = lam * lam
    try:
        rhs = pieces[piece - 1][3](x)
    except ZeroDivisionError:
        return math.nan
    return rhs / n


def lp_bound_complex(n: int, lam: float, piece: int | None = None) -> float:
    """Upper bound on M for any unit time-phase set with parameter ``lam``.

    ``piece`` forces a particular formula regardless of its interval.
    """
    return _lp("complex", n, lam, piece)


def lp_bound_binary(n: int, lam: float, piece: int | None = None) -> float:
    """Upper bound on M for sets whose entries are +-1/sqrt(n)."""
    return _lp("binary", n, lam, piece)


def lp_bound_qary(n: int, lam: float, piece: int | None = None) -> float:
    """Upper bound on M for sets whose entries are q-th roots of unity over sqrt(n), q >= 3."""
    return _lp("qary", n, lam, piece)


# --- Sidelnikov ---

def sidelnikov_k_max(n: int, q_class: str) -> int:
    if q_class == "q=2":
        return (2 * n) // 5
    if q_class == "q>2":
        return n
    raise ValueError(f"q_class must be 'q=2' or 'q>2', got {q_class!r}")


def sidelnikov_timephase(n: int, M: int, q_class: str, k: int) -> float:
    """Lower bound on lambda^2 (clamped at 0).

    q=2 requires 0 <= k <= floor(2n/5); q>2 requires 0 <= k <= n.
    """
    if not 0 <= k <= sidelnikov_k_max(n, q_class):
        raise KOutOfRange(f"k = {k} outside 0..{sidelnikov_k_max(n, q_class)} for {q_class}, n = {n}")
    num = 2**k * n ** (2 * k)
    if q_class == "q=2":
        v = Fraction((2 * k + 1) * (n - k), n * n) + Fraction(k * (k + 1), 2 * n * n) \
            - Fraction(num, n * M * factorial(2 * k) * comb(n, k))
    else:
        v = Fraction((k + 1) * (2 * n - k), 2 * n * n) - Fraction(num, n * M * factorial(k) ** 2 * comb(n, k))
    return max(float(v), 0.0)


def best_sidelnikov(n: int, M: int, q_class: str) -> tuple[int, float]:
    """(k, lambda^2 bound) maximizing over feasible k; smallest k wins ties."""
    best = (0, sidelnikov_timephase(n, M, q_class, 0))
    for k in range(1, sidelnikov_k_max(n, q_class) + 1):
        v = sidelnikov_timephase(n, M, q_class, k)
        if v > best[1]:
            best = (k, v)
    return best


# --- reports ---

# Bounds whose derivation applies a binary-alphabet result to the phase-bridged
# set.  Modulation by n-th roots of unity takes that set out of the binary
# alphabet, and binary Gauss-sum sets (e.g. q = 8, n = 7, M = 1) exceed the
# binary LP bound, so these are reported for reference only.
BINARY_BRIDGE_NOTE = "phase bridge leaves the binary alphabet; derivation does not apply"


@dataclass(frozen=True)
class BoundQuery:
    n: int
    M: int
    alphabet: str = "complex"
    k: int | None = None

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("n must be >= 2")
        if self.M < 1:
            raise ValueError("M must be >= 1")
        if self.alphabet not in ALPHABETS:
            raise ValueError(f"alphabet must be one of {ALPHABETS}")
        if self.k is not None and self.k < 1:
            raise ValueError("k must be >= 1")


@dataclass
class BoundEntry:
    name: str
    kind: str  # "lower-on-lambda" | "upper-on-M"
    value: float | None
    applicable: bool
    note: str = ""

    def to_dict(self) -> dict:
        return {
            "bound_name": self.name,
            "kind": self.kind,
            "value": self.value,
            "applicable": self.applicable,
            "note": self.note,
        }


@dataclass
class BoundReport:
    n: int
    M: int
    alphabet: str
    lam: float | None
    entries: list[BoundEntry] = field(default_factory=list)
    verdict: str = "undetermined"
    delta: float | None = None
    optimal_via: str | None = None
    best_lower: BoundEntry | None = None
    violations: list[str] = field(default_factory=list)

    def applicable(self, kind: str | None = None) -> list[BoundEntry]:
        return [e for e in self.entries if e.applicable and (kind is None or e.kind == kind)]

    def entry(self, name: str) -> BoundEntry:
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "M": self.M,
            "alphabet": self.alphabet,
            "lambda": self.lam,
            "verdict": self.verdict,
            "delta": self.delta,
            "optimal_via": self.optimal_via,
            "best_lower": self.best_lower.name if self.best_lower else None,
            "violations": list(self.violations),
            "entries": [e.to_dict() for e in self.entries],
        }

    def to_json(self) -> str:
        return dumps17(self.to_dict()) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["bound_name", "kind", "value", "applicable", "note"])
        for e in self.entries:
            w.writerow([e.name, e.kind, "" if e.value is None else format(e.value, ".17g"),
                        "true" if e.applicable else "false", e.note])
        return buf.getvalue()

    def to_table(self) -> str:
        rows = [("bound", "kind", "value", "applicable", "note")]
        for e in self.entries:
            rows.append((e.name, e.kind, "-" if e.value is None else f"{e.value:.9f}",
                         "yes" if e.applicable else "no", e.note))
        widths = [max(len(r[i]) for r in rows) for i in range(4)]
        lines = ["  ".join(c.ljust(w) for c, w in zip(r[:4], widths)) + "  " + r[4] for r in rows]
        lines = [ln.rstrip() for ln in lines]
        if self.lam is not None:
            lines.append(f"lambda = {self.lam:.9f}   verdict = {self.verdict}")
        return "\n".join(lines) + "\n"


def _finite(v) -> bool:
    return v is not None and math.isfinite(v)


def lower_bound_entries(q: BoundQuery) -> list[BoundEntry]:
    """Every lower bound on lambda for the query's (n, M, alphabet)."""
    n, M = q.n, q.M
    out = []
    for k in range(1, (q.k or 3) + 1):
        v = welch_timephase(n, M, k)
        out.append(BoundEntry(f"welch_timephase_k{k}", "lower-on-lambda", v, v > 0,
                              "" if v > 0 else "n^2 M <= binom(n+k-1,k); vacuous"))
    v = levenstein_timephase(n, M)
    out.append(BoundEntry("levenstein_timephase", "lower-on-lambda", v, M > 1,
                          "" if M > 1 else "stated for M > 1; equals welch_timephase_k1 at M = 1"))

    v = welch_time(n, M, 1)
    note = "codebook bound on nu, applies to lambda through nu <= lambda"
    if M < n:
        note += "; needs M >= n"
    elif v == 0:
        note += "; vacuous"
    out.append(BoundEntry("welch_time_k1", "lower-on-lambda", v, M >= n and v > 0, note))
    v = levenstein_time(n, M, "complex")
    ok = levenstein_time_applicable(n, M, "complex") and v > 0
    out.append(BoundEntry("levenstein_time_complex", "lower-on-lambda", v, ok,
                          "codebook bound on nu" + ("" if ok else "; needs M > n^2")))
    if q.alphabet in ("real", "binary"):
        v = levenstein_time(n, M, "real")
        ok = levenstein_time_applicable(n, M, "real") and v > 0
        out.append(BoundEntry("levenstein_time_real", "lower-on-lambda", v, ok,
                              "codebook bound on nu" + ("" if ok else "; needs M > n(n+1)/2")))

    if q.alphabet in ("binary", "qary"):
        k, v2 = best_sidelnikov(n, M, "q>2")
        v = math.sqrt(v2)
        out.append(BoundEntry("sidelnikov_timephase_q>2", "lower-on-lambda", v, v > 0,
                              f"best k = {k}" + ("" if v > 0 else "; vacuous")))
    if q.alphabet == "binary":
        k, v2 = best_sidelnikov(n, M, "q=2")
        out.append(BoundEntry("sidelnikov_timephase_q=2", "lower-on-lambda", math.sqrt(v2), False,
                              f"best k = {k}; {BINARY_BRIDGE_NOTE}"))
    return out


def upper_bound_entries(q: BoundQuery, lam: float) -> list[BoundEntry]:
    """LP upper bounds on M evaluated at ``lam``."""
    families = []
    if q.alphabet in ("binary", "qary"):
        families.append("qary")
    families.append("complex")
    if q.alphabet == "binary":
        families.append("binary")
    out = []
    for fam in families:
        name = f"lp_bound_{fam}"
        try:
            piece = lp_piece(fam, q.n, lam)
        except IntervalGap as exc:
            out.append(BoundEntry(name, "upper-on-M", None, False, str(exc)))
            continue
        v = _lp(fam, q.n, lam, piece)
        notes = [f"piece {piece}"]
        ok = _finite(v) and v > 0
        if (fam, piece) in TRANSCRIPTION_CORRECTED:
            notes.append("transcription-corrected (theta read as lambda)")
        if not ok:
            notes.append("formula non-positive here; vacuous")
        if fam == "binary":
            ok = False
            notes.append(BINARY_BRIDGE_NOTE)
        out.append(BoundEntry(name, "upper-on-M", v if _finite(v) else None, ok, "; ".join(notes)))
    return out


def evaluate_bounds(q: BoundQuery, lam: float | None = None) -> BoundReport:
    """All bound entries for the query; LP entries only when ``lam`` is given."""
    rep = BoundReport(q.n, q.M, q.alphabet, lam, lower_bound_entries(q))
    if lam is not None:
        rep.entries += upper_bound_entries(q, lam)
    lows = rep.applicable("lower-on-lambda")
    if lows:
        rep.best_lower = max(lows, key=lambda e: e.value)
    return rep


def judge(profile, query: BoundQuery, epsilon: float | None = None) -> BoundReport:
    """Compare a measured profile with every applicable bound.

    Verdict is ``optimal`` when some floored M-bound equals M or the measured
    lambda meets a lower bound within 1e-9; otherwise ``within_epsilon(delta)``
    with delta the relative gap to the best lower bound, or ``not_optimal``
    when ``epsilon`` is given and delta exceeds it.  ``undetermined`` when no
    lower bound is informative.
    """
    lam = profile.lam
    rep = evaluate_bounds(query, lam)
    M = query.M
    for e in rep.applicable():
        if e.kind == "lower-on-lambda" and lam < e.value - LAMBDA_TOL:
            rep.violations.append(e.name)
        if e.kind == "upper-on-M" and M > e.value + LAMBDA_TOL:
            rep.violations.append(e.name)

    for e in rep.applicable():
        if e.kind == "upper-on-M" and math.floor(e.value + LAMBDA_TOL) == M:
            rep.optimal_via = e.name
            break
        if e.kind == "lower-on-lambda" and abs(lam - e.value) <= LAMBDA_TOL:
            rep.optimal_via = e.name
            break

    if rep.best_lower is not None and rep.best_lower.value > 0:
        rep.delta = (lam - rep.best_lower.value) / rep.best_lower.value
    if rep.optimal_via is not None:
        rep.verdict = "optimal"
    elif rep.delta is None:
        rep.verdict = "undetermined"
    elif epsilon is not None and rep.delta > epsilon:
        rep.verdict = "not_optimal"
    else:
        rep.verdict = f"within_epsilon({rep.delta:.6g})"
    return rep
