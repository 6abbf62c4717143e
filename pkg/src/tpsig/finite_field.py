"""
Exact arithmetic in GF(p^m).

Elements are dense coefficient vectors (constant term first) reduced modulo
a monic irreducible polynomial.  Each field carries a designated primitive
element ``gamma`` together with power and discrete-log tables, so that
multiplicative characters can be evaluated by table lookup.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from types import SimpleNamespace

FIELD_ORDER_LIMIT = 2**31


class NonPrimeP(ValueError):
    """Raised when the characteristic is not a prime."""


class FieldTooLarge(ValueError):
    """Raised when p**m exceeds the supported field order."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of ``n`` in ascending order (trial division)."""
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out.append(n)
    return out


# --- polynomials over GF(p): tuples of coefficients, constant term first ---

def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a, mod, p):
    a = [c % p for c in a]
    dm = len(mod) - 1
    inv_lead = pow(mod[-1], -1, p)
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i]
        if c:
            c = c * inv_lead % p
            shift = i - dm
            for j, mc in enumerate(mod):
                a[shift + j] = (a[shift + j] - c * mc) % p
    return _trim(a[:dm]) if len(a) > dm else _trim(a)


def _poly_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return out


def _poly_mulmod(a, b, mod, p):
    return _poly_mod(_poly_mul(a, b, p), mod, p)


def _poly_powmod(base, e, mod, p):
    result = [1]
    base = _poly_mod(base, mod, p)
    while e:
        if e & 1:
            result = _poly_mulmod(result, base, mod, p)
        base = _poly_mulmod(base, base, mod, p)
        e >>= 1
    return result


def _poly_sub(a, b, p):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return _trim([(x - y) % p for x, y in zip(a, b)])


def _poly_gcd(a, b, p):
    a, b = _trim(a), _trim(b)
    while b:
        a, b = b, _poly_mod(a, b, p)
    return a


def _has_root(f, p):
    for x in range(p):
        acc = 0
        for c in reversed(f):
            acc = (acc * x + c) % p
        if acc == 0:
            return True
    return False


def is_irreducible(f, p: int) -> bool:
    """Irreducibility of the monic polynomial ``f`` over GF(p).

    Degrees up to 3 are decided by root search; higher degrees use Rabin's
    test (``x^(p^m) = x`` mod f and ``gcd(x^(p^(m/r)) - x, f) = 1`` for each
    prime ``r | m``).
    """
    f = _trim(f)
    m = len(f) - 1
    if m < 1:
        return False
    if m == 1:
        return True
    if m <= 3:
        return not _has_root(f, p)
    x = [0, 1]
    if _poly_sub(_poly_powmod(x, p**m, f, p), x, p):
        return False
    for r in prime_factors(m):
        h = _poly_sub(_poly_powmod(x, p ** (m // r), f, p), x, p)
        if len(_poly_gcd(f, h, p)) != 1:
            return False
    return True


# --- field types ---

@dataclass(frozen=True)
class FieldElement:
    coeffs: tuple[int, ...]

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __repr__(self):
        return f"FieldElement({list(self.coeffs)})"


@dataclass(frozen=True)
class FieldSpec:
    """GF(p^m) with a fixed modulus and primitive element.

    ``modulus`` has ``m + 1`` coefficients (constant term first, monic).
    ``gamma`` is a length-``m`` coefficient vector of multiplicative order
    ``q - 1``.  Power and log tables are built on first use and cached.
    """

    p: int
    m: int
    modulus: tuple[int, ...]
    gamma: tuple[int, ...]

    def __post_init__(self):
        if not is_prime(self.p):
            raise NonPrimeP(f"p={self.p} is not prime")
        if self.m < 1:
            raise ValueError("extension degree m must be >= 1")
        if self.p**self.m > FIELD_ORDER_LIMIT:
            raise FieldTooLarge(f"q={self.p}^{self.m} exceeds {FIELD_ORDER_LIMIT}")
        if len(self.modulus) != self.m + 1 or self.modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree m")
        if not is_irreducible(self.modulus, self.p):
            raise ValueError(f"modulus {list(self.modulus)} is reducible over GF({self.p})")
        if len(self.gamma) != self.m or _multiplicative_order(self.gamma, self) != self.q - 1:
            raise ValueError(f"gamma {list(self.gamma)} is not primitive")

    @property
    def q(self) -> int:
        return self.p**self.m

    @cached_property
    def exp_table(self) -> list[FieldElement]:
        """``exp_table[i] == gamma**i`` for ``i = 0..q-2``."""
        out = []
        cur = _one_coeffs(self.m)
        for _ in range(self.q - 1):
            out.append(FieldElement(cur))
            cur = _mul_coeffs(cur, self.gamma, self)
        return out

    @cached_property
    def log_table(self) -> dict[tuple[int, ...], int]:
        return {a.coeffs: i for i, a in enumerate(self.exp_table)}

    def to_dict(self) -> dict:
        return {"p": self.p, "m": self.m, "modulus": list(self.modulus), "gamma": list(self.gamma)}

    @classmethod
    def from_dict(cls, d: dict) -> "FieldSpec":
        return cls(int(d["p"]), int(d["m"]), tuple(d["modulus"]), tuple(d["gamma"]))


def _one_coeffs(m):
    return (1,) + (0,) * (m - 1)


def _pad(a, m):
    a = list(a)[:m]
    return tuple(a + [0] * (m - len(a)))


def _mul_coeffs(a, b, f: FieldSpec):
    if f.m == 1:
        return ((a[0] * b[0]) % f.p,)
    return _pad(_poly_mulmod(a, b, f.modulus, f.p), f.m)


def _pow_coeffs(a, e, f: FieldSpec):
    result = _one_coeffs(f.m)
    base = a
    while e:
        if e & 1:
            result = _mul_coeffs(result, base, f)
        base = _mul_coeffs(base, base, f)
        e >>= 1
    return result


def _multiplicative_order(a, f: FieldSpec) -> int:
    n = f.q - 1
    if not any(a) or _pow_coeffs(a, n, f) != _one_coeffs(f.m):
        return 0
    order = n
    for r in prime_factors(n):
        while order % r == 0 and _pow_coeffs(a, order // r, f) == _one_coeffs(f.m):
            order //= r
    return order


def _primitive_root(p: int) -> int:
    if p == 2:
        return 1
    factors = prime_factors(p - 1)
    for g in range(2, p):
        if all(pow(g, (p - 1) // r, p) != 1 for r in factors):
            return g
    raise AssertionError("unreachable: every prime has a primitive root")


def make_field(p: int, m: int) -> FieldSpec:
    """Deterministically build GF(p^m).

    For ``m == 1`` the field is GF(p) itself: the modulus is ``x - g`` with
    ``g`` the least primitive root mod p, so that ``gamma = g``.

    For ``m >= 2`` monic degree-``m`` polynomials are scanned in
    lexicographic order of their coefficient lists (constant term first);
    the first irreducible one in which ``x`` is primitive is used with
    ``gamma = x``.  If none qualifies, the first irreducible modulus is used
    with the lexicographically smallest primitive element.
    """
    if not is_prime(p):
        raise NonPrimeP(f"p={p} is not prime")
    if m < 1:
        raise ValueError("extension degree m must be >= 1")
    if p**m > FIELD_ORDER_LIMIT:
        raise FieldTooLarge(f"q={p}^{m} exceeds {FIELD_ORDER_LIMIT}")
    if m == 1:
        g = _primitive_root(p)
        return FieldSpec(p, 1, ((-g) % p, 1), (g,))

    q = p**m
    factors = prime_factors(q - 1)
    x = (0, 1) + (0,) * (m - 2)
    one = _one_coeffs(m)
    first_irreducible = None
    for low in itertools.product(range(p), repeat=m):
        mod = low + (1,)
        if low[0] == 0 or not is_irreducible(mod, p):
            continue
        if first_irreducible is None:
            first_irreducible = mod
        if all(_pad(_poly_powmod(list(x), (q - 1) // r, mod, p), m) != one for r in factors):
            return FieldSpec(p, m, mod, x)

    # not reachable for prime-power fields (primitive polynomials exist), kept
    # for the documented fallback rule
    probe = SimpleNamespace(p=p, m=m, q=q, modulus=first_irreducible)
    for cand in itertools.product(range(p), repeat=m):
        if _multiplicative_order(cand, probe) == q - 1:
            return FieldSpec(p, m, first_irreducible, cand)
    raise AssertionError("no primitive element found")


# --- element operations ---

def element(f: FieldSpec, coeffs) -> FieldElement:
    """Build an element from a coefficient sequence or an integer in GF(p)."""
    if isinstance(coeffs, int):
        coeffs = [coeffs]
    coeffs = list(coeffs)
    if len(coeffs) > f.m:
        raise ValueError(f"too many coefficients for GF({f.p}^{f.m})")
    return FieldElement(tuple(c % f.p for c in _pad(coeffs, f.m)))


def zero(f: FieldSpec) -> FieldElement:
    return FieldElement((0,) * f.m)


def one(f: FieldSpec) -> FieldElement:
    return FieldElement(_one_coeffs(f.m))


def elements(f: FieldSpec) -> list[FieldElement]:
    """All q elements, zero first, then coefficient vectors in lexicographic order."""
    return [FieldElement(tuple(reversed(c))) for c in itertools.product(range(f.p), repeat=f.m)]


def _check(a: FieldElement, f: FieldSpec):
    if len(a.coeffs) != f.m:
        raise ValueError(f"element {a} does not belong to GF({f.p}^{f.m})")


def add(a: FieldElement, b: FieldElement, f: FieldSpec) -> FieldElement:
    _check(a, f)
    _check(b, f)
    return FieldElement(tuple((x + y) % f.p for x, y in zip(a.coeffs, b.coeffs)))


def sub(a: FieldElement, b: FieldElement, f: FieldSpec) -> FieldElement:
    _check(a, f)
    _check(b, f)
    return FieldElement(tuple((x - y) % f.p for x, y in zip(a.coeffs, b.coeffs)))


def mul(a: FieldElement, b: FieldElement, f: FieldSpec) -> FieldElement:
    _check(a, f)
    _check(b, f)
    return FieldElement(_mul_coeffs(a.coeffs, b.coeffs, f))


def power(a: FieldElement, e: int, f: FieldSpec) -> FieldElement:
    _check(a, f)
    if e < 0:
        raise ValueError("negative exponent")
    return FieldElement(_pow_coeffs(a.coeffs, e, f))


def pow_gamma(f: FieldSpec, i: int) -> FieldElement:
    """gamma**(i mod (q-1)) by square-and-multiply."""
    if i < 0:
        raise ValueError("exponent must be non-negative")
    return FieldElement(_pow_coeffs(f.gamma, i % (f.q - 1), f))


def dlog(a: FieldElement, f: FieldSpec) -> int:
    """Exponent ``i`` in ``[0, q-1)`` with ``gamma**i == a``."""
    _check(a, f)
    if a.is_zero():
        raise ValueError("discrete log of zero")
    return f.log_table[a.coeffs]


def trace(a: FieldElement, f: FieldSpec) -> int:
    """Absolute trace GF(p^m) -> GF(p), returned as an integer in [0, p)."""
    _check(a, f)
    acc = [0] * f.m
    cur = a.coeffs
    for _ in range(f.m):
        acc = [(x + y) % f.p for x, y in zip(acc, cur)]
        cur = _pow_coeffs(cur, f.p, f)
    if any(acc[1:]):
        raise ArithmeticError(f"trace of {a} left the prime subfield")
    return acc[0]
