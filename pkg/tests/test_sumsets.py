from math import gcd

import pytest
from hypothesis import given, strategies as st

from prodrep import oracles
from prodrep.errors import Degenerate, NotAUnit, NotCoprime, SizeCapExceeded
from prodrep.sumsets import (
    ZnSubset,
    best_interval_construction,
    canonical_target,
    divisors,
    interval_construction,
    k_fold_sumset,
    m_bounds,
    m_exact,
    m_formula_coprime,
    m_record,
    translate_reduce,
    unit_scale,
    zero_rule,
)

# m(k, n; s) by exhaustive enumeration of all subsets, for the grid below
ORACLE_GRID = [(k, n, s) for k in (2, 3, 4) for n in range(1, 10) for s in range(n)]


def test_sumset_examples():
    assert len(k_fold_sumset(ZnSubset(5, 0), 3)) == 0
    assert k_fold_sumset(ZnSubset.full(7), 2) == ZnSubset.full(7)
    assert k_fold_sumset(ZnSubset.of([1], 3), 2).elements == (2,)


@given(st.integers(1, 16), st.integers(1, 6), st.data())
def test_sumset_matches_enumeration(n, k, data):
    B = data.draw(st.sets(st.integers(0, n - 1)))
    assert set(k_fold_sumset(ZnSubset.of(B, n), k)) == oracles.sumset(B, k, n)


def test_m_exact_examples():
    for k in (2, 3, 5):
        assert m_exact(k, 1, 0).value == 0
    assert m_exact(2, 3, 0).value == 1
    assert m_exact(4, 2, 0).value == 0
    assert m_exact(6, 3, 0).value == 0
    with pytest.raises(SizeCapExceeded):
        m_exact(2, 40, 0)


@pytest.mark.parametrize("k,n,s", ORACLE_GRID)
def test_m_exact_matches_oracle(k, n, s):
    rec = m_exact(k, n, s)
    assert rec.value == oracles.m_value(k, n, s)
    assert len(rec.witness) == rec.value
    assert s not in oracles.sumset(rec.witness.elements, k, n)


def test_formula_examples():
    assert m_formula_coprime(2, 3) == 1
    assert m_formula_coprime(3, 2) == 1
    with pytest.raises(NotCoprime):
        m_formula_coprime(2, 4)


def test_bounds_examples():
    assert m_bounds(2, 4) == (1, 2)
    assert m_bounds(2, 3) == (1, 1)
    assert m_bounds(2, 1) == (0, 0)


def test_bounds_floor_toward_minus_infinity():
    # d = 1 contributes floor(-2/k) + 1 = 0 to the upper bound and
    # floor((-1 - 1)/k) + 1 = 0 to the lower bound
    lo, hi = m_bounds(5, 1)
    assert (lo, hi) == (0, 0)


def test_zero_rule_examples():
    assert zero_rule(4, 2, 0)
    assert not zero_rule(3, 2, 0)
    assert not zero_rule(2, 2, 1)


def test_interval_examples():
    B = interval_construction(2, 4, 0, 4)
    assert len(B) == 1 and 0 not in k_fold_sumset(B, 2)
    B = interval_construction(2, 6, 0, 3)
    assert len(B) == 2 and 0 not in k_fold_sumset(B, 2)
    with pytest.raises(Degenerate):
        interval_construction(2, 2, 0, 1)


def test_translate_examples():
    assert translate_reduce(2, 3, 1) == (0, 1)
    assert translate_reduce(3, 5, 0) == (0, 0)
    with pytest.raises(NotCoprime):
        translate_reduce(2, 4, 1)


def test_unit_scale_examples():
    assert unit_scale(2, 5, 2, 3) == 1
    assert unit_scale(2, 9, 4, 1) == 4
    with pytest.raises(NotAUnit):
        unit_scale(2, 4, 1, 2)


@given(st.integers(2, 6), st.integers(1, 18), st.data())
def test_unit_scaling_invariance(k, n, data):
    s = data.draw(st.integers(0, n - 1))
    lam = data.draw(st.sampled_from([u for u in range(1, n + 1) if gcd(u, n) == 1]))
    assert m_exact(k, n, s).value == m_exact(k, n, unit_scale(k, n, s, lam)).value


@given(st.integers(2, 6), st.integers(1, 18), st.data())
def test_translation_invariance(k, n, data):
    s = data.draw(st.integers(0, n - 1))
    t = data.draw(st.integers(0, n - 1))
    assert m_exact(k, n, s).value == m_exact(k, n, (s + k * t) % n).value


@given(st.integers(2, 6), st.integers(1, 24), st.data())
def test_interval_construction_valid(k, n, data):
    s = data.draw(st.integers(0, n - 1))
    d = data.draw(st.sampled_from(divisors(n)))
    try:
        B = interval_construction(k, n, s, d)
    except Degenerate:
        return
    assert s not in k_fold_sumset(B, k)
    assert len(B) == ((d - 1 - gcd(d, k)) // k + 1) * (n // d)


@given(st.integers(2, 6), st.integers(1, 18), st.data())
def test_best_interval_attains_lower_bound(k, n, data):
    s = data.draw(st.integers(0, n - 1))
    lo, _ = m_bounds(k, n)
    assert len(best_interval_construction(k, n, s)) == lo


def test_canonical_target_is_in_orbit():
    for k, n, s in [(2, 6, 5), (3, 9, 4), (4, 10, 7)]:
        rep, lam, t = canonical_target(k, n, s)
        assert rep == (lam * s + k * t) % n and gcd(lam, n) == 1


def test_m_record_beyond_cap():
    rec = m_record(2, 31, 5)
    assert rec.method == "formula" and rec.value == m_formula_coprime(2, 31)
    assert 5 not in k_fold_sumset(rec.witness, 2)
    rec = m_record(2, 30, 0)
    assert rec.method == "bounds-only" and rec.lower <= rec.value <= rec.upper
    rec = m_record(3, 30, 0)
    assert rec.method == "bounds-only"
    assert m_record(30, 30, 0).method == "zero-rule"


def test_witness_is_lexicographically_reproducible():
    a = m_exact(3, 12, 5)
    b = m_exact(3, 12, 5)
    assert a == b
    assert a.to_row()["witness"] == " ".join(map(str, a.witness.elements))
