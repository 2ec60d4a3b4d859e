import itertools

import pytest
from hypothesis import given, strategies as st

from prodrep.errors import ConstantPolynomial, ZeroPolynomial
from prodrep.ff import Field
from prodrep.poly import (
    Poly,
    factor,
    format_poly,
    is_dth_power_multiple,
    is_irreducible,
    parse_poly,
    poly_gcd,
    power_part,
    radical_root_count,
    squarefree_decomposition,
    value_set,
)

F5, F7 = Field(5), Field(7)


def P(F, *coeffs):
    return Poly(F, list(coeffs))


def test_factor_examples():
    fac = factor(P(F7, 0, 0, 1))
    assert fac.unit == 1 and fac.factors == ((P(F7, 0, 1), 2),)
    fac = factor(P(F5, 1, 0, 1))
    assert fac.unit == 1 and fac.factors == ((P(F5, 2, 1), 1), (P(F5, 3, 1), 1))
    fac = factor(P(F7, 0, 0, 2))
    assert fac.unit == 2 and fac.factors == ((P(F7, 0, 1), 2),)
    with pytest.raises(ZeroPolynomial):
        factor(Poly(F7, []))


def test_power_part_examples():
    pp = power_part(P(F7, 0, 0, 1))
    assert (pp.C, pp.f, pp.ell) == (1, P(F7, 0, 1), 2)
    pp = power_part(P(F7, 2, 0, 4, 0, 2))
    assert (pp.C, pp.f, pp.ell) == (2, P(F7, 1, 0, 1), 2)
    with pytest.raises(ConstantPolynomial):
        power_part(P(F7, 3))


def test_power_part_nonsquare_quadratic():
    # alpha x^2 - 1 with alpha a nonsquare has two distinct roots, so ell = 1
    F = Field(5, 2)
    alpha = next(a for a in range(1, F.q) if F.dlog(a) % 2)
    h = Poly(F, [F.neg(1), 0, alpha])
    assert power_part(h).ell == 1


def test_value_set_examples():
    assert value_set(P(F7, 0, 1)) == frozenset(range(7))
    assert value_set(P(F7, 0, 0, 1)) == frozenset({0, 1, 2, 4})
    assert value_set(P(F7, 5)) == frozenset({5})


def test_dth_power_examples():
    assert is_dth_power_multiple(P(F7, 0, 0, 1), 2)
    assert not is_dth_power_multiple(P(F7, 1, 0, 1), 2)
    assert is_dth_power_multiple(P(F7, 0, 0, 0, 0, 3), 2)


def test_radical_root_count_examples():
    assert radical_root_count(P(F7, 0, 0, 1)) == 1
    assert radical_root_count(P(F7, 0, 1) * P(F7, 1, 1) * P(F7, 2, 1) // P(F7, 0, 1)) == 2
    assert radical_root_count(P(F5, 0, 4, 0, 1)) == 3


def test_parse_format_roundtrip():
    F9 = Field(3, 2)
    f = parse_poly(F9, "1:2,0:0,2:1")
    assert f.coeffs[0] == F9.from_coords([1, 2])
    assert parse_poly(F9, format_poly(f)) == f
    assert format_poly(parse_poly(F7, "2,0,4,0,2")) == "2,0,4,0,2"


def test_irreducible_counts():
    # number of monic irreducibles of degree 2 over F_p is (p^2 - p) / 2
    for p in (2, 3, 5):
        F = Field(p)
        n = sum(is_irreducible(Poly(F, [a, b, 1])) for a, b in itertools.product(range(p), repeat=2))
        assert n == (p * p - p) // 2


def test_evaluate_all_matches_horner():
    F = Field(2, 3)
    f = Poly(F, [3, 0, 5, 1])
    assert f.evaluate_all().tolist() == [f(x) for x in range(F.q)]


@st.composite
def polys(draw, qs=(2, 3, 4, 5, 7, 8, 9, 25)):
    from prodrep.acceptance import field_of

    F = field_of(draw(st.sampled_from(qs)))
    coeffs = draw(st.lists(st.integers(0, F.q - 1), min_size=2, max_size=8))
    lead = draw(st.integers(1, F.q - 1))
    return Poly(F, coeffs + [lead])


@given(polys(), st.integers(0, 5))
def test_factor_reconstructs(h, seed):
    fac = factor(h, seed=seed)
    assert fac.expand(h.field) == h
    assert all(is_irreducible(P) and P.is_monic() for P, _ in fac.factors)
    assert factor(h, seed=seed + 1).factors == fac.factors


@given(polys())
def test_squarefree_parts_are_coprime_and_squarefree(h):
    parts = squarefree_decomposition(h)
    acc = Poly.const(h.field, h.lead)
    for P, i in parts:
        acc = acc * P ** i
        assert poly_gcd(P, P.derivative()).degree == 0
        assert radical_root_count(P) == P.degree
    assert acc == h
    for (P, _), (Q, _) in itertools.combinations(parts, 2):
        assert poly_gcd(P, Q).degree == 0


@given(polys(), st.integers(2, 4))
def test_power_part_is_maximal(h, e):
    # h^e has power part exponent divisible by e and the same C, f up to that power
    pp = power_part(h ** e)
    assert pp.ell % e == 0
    assert (pp.f ** pp.ell) * pp.C == h ** e
    assert pp.f.is_monic()
    base = power_part(h)
    assert pp.ell == e * base.ell


@given(polys(), polys())
def test_divmod(a, b):
    if a.field != b.field:
        return
    qt, r = divmod(a, b)
    assert qt * b + r == a
    assert r.is_zero() or r.degree < b.degree
