import itertools

import pytest
from hypothesis import given, settings, strategies as st

from tpsig.finite_field import (
    FieldSpec,
    FieldTooLarge,
    NonPrimeP,
    add,
    dlog,
    element,
    elements,
    is_irreducible,
    make_field,
    mul,
    one,
    pow_gamma,
    power,
    sub,
    trace,
    zero,
)

FIELDS = [(2, 1), (2, 2), (3, 1), (2, 3), (5, 1), (3, 2), (2, 4), (7, 1), (5, 2), (3, 3)]


def naive_trace(a, f):
    """x + x^p + ... + x^(p^(m-1)) by repeated Frobenius, read off as an integer."""
    acc = zero(f)
    x = a
    for _ in range(f.m):
        acc = add(acc, x, f)
        x = power(x, f.p, f)
    assert all(c == 0 for c in acc.coeffs[1:])
    return acc.coeffs[0]


def test_make_field_examples():
    f = make_field(2, 1)
    assert f.q == 2 and f.gamma == (1,)
    f = make_field(2, 2)
    assert f.modulus == (1, 1, 1) and f.gamma == (0, 1)
    f = make_field(3, 1)
    assert f.gamma == (2,)


def test_bad_parameters():
    with pytest.raises(NonPrimeP):
        make_field(4, 1)
    with pytest.raises(NonPrimeP):
        make_field(1, 3)
    with pytest.raises(FieldTooLarge):
        make_field(2, 40)
    with pytest.raises(ValueError):
        FieldSpec(2, 2, (1, 0, 1), (0, 1))  # x^2 + 1 = (x + 1)^2 over GF(2)


def test_gf4_arithmetic():
    f = make_field(2, 2)
    x = element(f, (0, 1))
    assert mul(x, x, f) == element(f, (1, 1))
    assert pow_gamma(f, 0) == one(f)
    assert pow_gamma(f, 2) == element(f, (1, 1))
    assert pow_gamma(f, 3) == one(f)
    assert trace(one(f), f) == 0
    assert trace(x, f) == 1
    assert trace(zero(f), f) == 0


def test_gf3_square():
    f = make_field(3, 1)
    assert mul(element(f, 2), element(f, 2), f) == one(f)


@pytest.mark.parametrize("p,m", FIELDS)
def test_enumeration_and_gamma_order(p, m):
    f = make_field(p, m)
    els = elements(f)
    assert len(els) == f.q == len(set(els))
    powers = {pow_gamma(f, i) for i in range(f.q - 1)}
    assert powers == set(els) - {zero(f)}


@pytest.mark.parametrize("p,m", FIELDS)
def test_ring_axioms_exhaustive(p, m):
    f = make_field(p, m)
    els = elements(f)
    o = one(f)
    for a, b in itertools.product(els, repeat=2):
        assert mul(a, b, f) == mul(b, a, f)
        assert add(a, b, f) == add(b, a, f)
        assert add(sub(a, b, f), b, f) == a
    for a in els:
        assert mul(a, o, f) == a
        if not a.is_zero():
            assert pow_gamma(f, dlog(a, f)) == a


@pytest.mark.parametrize("p,m", [(2, 2), (3, 2), (2, 3), (5, 1)])
def test_associativity_distributivity(p, m):
    f = make_field(p, m)
    els = elements(f)
    for a, b, c in itertools.product(els, repeat=3):
        assert mul(mul(a, b, f), c, f) == mul(a, mul(b, c, f), f)
        assert mul(a, add(b, c, f), f) == add(mul(a, b, f), mul(a, c, f), f)


@pytest.mark.parametrize("p,m", FIELDS)
def test_trace_linear_and_onto(p, m):
    f = make_field(p, m)
    els = elements(f)
    counts = [0] * p
    for a in els:
        t = trace(a, f)
        assert t == naive_trace(a, f)
        counts[t] += 1
        for b in els[:8]:
            assert trace(add(a, b, f), f) == (t + trace(b, f)) % p
    # balanced: each value of GF(p) has exactly q/p preimages
    assert counts == [f.q // p] * p


def test_irreducibility_matches_root_count():
    # degree 2 and 3 polynomials over GF(3) are irreducible iff they have no root
    for c in itertools.product(range(3), repeat=3):
        poly = list(c) + [1]
        has_root = any(sum(ci * x**i for i, ci in enumerate(poly)) % 3 == 0 for x in range(3))
        assert is_irreducible(poly, 3) == (not has_root)


def test_field_round_trip_dict():
    f = make_field(3, 3)
    assert FieldSpec.from_dict(f.to_dict()) == f


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([(2, 5), (3, 3), (7, 2), (13, 1)]), st.integers(0, 10**6), st.integers(0, 10**6))
def test_power_law(pm, i, j):
    f = make_field(*pm)
    a = pow_gamma(f, i)
    assert mul(a, pow_gamma(f, j), f) == pow_gamma(f, i + j)
    assert power(a, f.q - 1, f) == one(f)
