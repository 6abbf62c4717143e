"""Additive and multiplicative characters of GF(q) and their Gauss sums."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .finite_field import FieldElement, FieldSpec, dlog, elements, mul, trace


class ZeroArgument(ValueError):
    """Multiplicative characters are undefined at 0."""


def root_of_unity(k: int, n: int) -> complex:
    """exp(2*pi*i*k/n)."""
    return cmath.exp(2j * math.pi * (k % n) / n)


@dataclass(frozen=True)
class AdditiveCharacter:
    """psi_b(x) = zeta_p ** T(b*x)."""

    b: FieldElement
    field: FieldSpec

    @property
    def trivial(self) -> bool:
        return self.b.is_zero()


@dataclass(frozen=True)
class MultiplicativeCharacter:
    """omega**index, where omega(gamma**j) = zeta_{q-1} ** j."""

    index: int
    field: FieldSpec

    def __post_init__(self):
        object.__setattr__(self, "index", self.index % (self.field.q - 1))

    @property
    def trivial(self) -> bool:
        return self.index == 0


def eval_additive(chi: AdditiveCharacter, x: FieldElement) -> complex:
    f = chi.field
    return root_of_unity(trace(mul(chi.b, x, f), f), f.p)


def eval_multiplicative(w: MultiplicativeCharacter, x: FieldElement) -> complex:
    if x.is_zero():
        raise ZeroArgument("multiplicative character evaluated at 0")
    f = w.field
    return root_of_unity(w.index * dlog(x, f), f.q - 1)


def gauss_sum(psi: AdditiveCharacter, chi: MultiplicativeCharacter) -> complex:
    """G(psi, chi) = sum over x != 0 of psi(x) * chi(x), summed directly."""
    f = psi.field
    if chi.field != f:
        raise ValueError("characters live over different fields")
    q1 = f.q - 1
    total = 0j
    for j, x in enumerate(f.exp_table):
        total += eval_additive(psi, x) * root_of_unity(chi.index * j, q1)
    return total


def additive_characters(f: FieldSpec) -> list[AdditiveCharacter]:
    return [AdditiveCharacter(b, f) for b in elements(f)]


def multiplicative_characters(f: FieldSpec) -> list[MultiplicativeCharacter]:
    return [MultiplicativeCharacter(i, f) for i in range(f.q - 1)]


def check_gauss_magnitude(f: FieldSpec, rtol: float = 1e-9) -> bool:
    """Exhaustive check of |G(psi_b, chi)| = sqrt(q) and the twist identity.

    For every nontrivial additive psi_b and nontrivial multiplicative chi the
    Gauss sum must have modulus sqrt(q) and satisfy
    G(psi_b, chi) = conj(chi(b)) * G(psi_1, chi), both within ``rtol*sqrt(q)``.
    Trivially true when q = 2 (no nontrivial multiplicative character).
    """
    q1 = f.q - 1
    tol = rtol * math.sqrt(f.q)
    # psi_b(gamma^j) = zeta_p^T(gamma^(j + log b)), so tabulate T(gamma^k) once
    tr = [trace(x, f) for x in f.exp_table]
    zp = [root_of_unity(c, f.p) for c in tr]
    for i in range(1, q1):
        zq = [root_of_unity(i * j, q1) for j in range(q1)]
        base = sum(zp[j] * zq[j] for j in range(q1))
        for lb in range(q1):
            g = sum(zp[(j + lb) % q1] * zq[j] for j in range(q1))
            if abs(abs(g) - math.sqrt(f.q)) > tol:
                return False
            if abs(g - zq[lb].conjugate() * base) > tol:
                return False
    return True


def degenerate_gauss_value(f: FieldSpec, psi_trivial: bool, chi_trivial: bool) -> complex | None:
    """Closed form of G(psi, chi) when at least one character is trivial."""
    if psi_trivial and chi_trivial:
        return complex(f.q - 1)
    if chi_trivial:
        return complex(-1)
    if psi_trivial:
        return 0j
    return None


def character_sum_additive(psi: AdditiveCharacter) -> complex:
    """Sum of psi over all of GF(q) (zero unless psi is trivial)."""
    return sum((eval_additive(psi, x) for x in elements(psi.field)), 0j)


def character_sum_multiplicative(chi: MultiplicativeCharacter) -> complex:
    """Sum of chi over GF(q)^x (zero unless chi is trivial)."""
    return sum((eval_multiplicative(chi, x) for x in chi.field.exp_table), 0j)


__all__ = [
    "AdditiveCharacter",
    "MultiplicativeCharacter",
    "ZeroArgument",
    "additive_characters",
    "character_sum_additive",
    "character_sum_multiplicative",
    "check_gauss_magnitude",
    "degenerate_gauss_value",
    "eval_additive",
    "eval_multiplicative",
    "gauss_sum",
    "multiplicative_characters",
    "root_of_unity",
]
