import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from prodrep import oracles
from prodrep.acceptance import field_of
from prodrep.characters import (
    Character,
    c_m,
    char_sum,
    distinct_product_min_size,
    distinct_product_threshold_met,
    count_representations,
    find_distinct_product_witness,
    representation_threshold,
    gyarmati_threshold_check,
    weil_verify,
)
from prodrep.errors import HypothesisViolated
from prodrep.ff import Field
from prodrep.poly import Poly

F7 = Field(7)
X = Poly.x(F7)


def test_char_sum_examples():
    assert char_sum(Character(F7, 0), X, 1).value == pytest.approx(6)
    assert abs(char_sum(Character(F7, 3), X, 1).value) < 1e-9
    r = char_sum(Character(F7, 3), Poly(F7, [1, 0, 1]), 1)
    # direct evaluation: quadratic character of x^2 + 1 over x = 0..6
    assert r.value == pytest.approx(oracles.char_sum(F7, 3, Poly(F7, [1, 0, 1]), 1))
    assert r.magnitude <= math.sqrt(7)
    assert r.magnitude == pytest.approx(1.0)


def test_character_basics():
    chi = Character(F7, 2)
    assert chi.order == 3 and chi(0) == 0
    assert Character(F7, 0).is_trivial
    for a in range(1, 7):
        for b in range(1, 7):
            assert chi(F7.mul(a, b)) == pytest.approx(chi(a) * chi(b))


def test_weil_examples():
    rep = weil_verify(F7, X)
    assert rep.passed and rep.records
    assert all(r["magnitude"] < 1e-9 and r["bound"] == 0 for r in rep.records)
    rep = weil_verify(F7, Poly.monomial(F7, 1, 2))
    assert (3, 2) in rep.skipped
    for q in (5, 7, 9, 11, 13):
        F = field_of(q)
        rep = weil_verify(F, Poly(F, [1, 0, 1]))
        assert rep.passed and rep.checked > 0


@pytest.mark.parametrize("q", [5, 7, 9])
def test_weil_sums_match_oracle(q):
    F = field_of(q)
    f = Poly(F, [1, 2 % F.q, 0, 1])
    for j in range(1, q - 1):
        for a in range(1, q):
            got = char_sum(Character(F, j), f, a).value
            assert got == pytest.approx(oracles.char_sum(F, j, f, a), abs=1e-9)


def test_count_representations_examples():
    units = list(range(1, 7))
    assert count_representations(F7, units, units, X) == 36
    assert count_representations(F7, [1], [1], X) == 1
    squares = [1, 2, 4]
    x2 = Poly.monomial(F7, 1, 2)
    # each nonzero square is hit by two x and has three factorizations
    assert count_representations(F7, squares, squares, x2) == 18


@given(st.sampled_from([5, 7, 8, 9, 11, 13]), st.data())
def test_count_representations_matches_oracle(q, data):
    F = field_of(q)
    A = data.draw(st.sets(st.integers(1, q - 1), max_size=q - 1))
    B = data.draw(st.sets(st.integers(1, q - 1), max_size=q - 1))
    coeffs = data.draw(st.lists(st.integers(0, q - 1), min_size=1, max_size=3))
    f = Poly(F, coeffs + [1])
    assert count_representations(F, A, B, f) == oracles.count_representations(F, A, B, f)


def test_thresholds_exact():
    assert c_m(7, 2) == pytest.approx(6 / 5)
    assert representation_threshold(7, 2) == Fraction(252, 25)
    q, m, k = 101, 2, 2
    n = distinct_product_min_size(q, m, k)
    assert distinct_product_threshold_met(n, q, m, k) and not distinct_product_threshold_met(n - 1, q, m, k)
    assert n - 1 < 8 * float(c_m(q, m)) * math.sqrt(q) + 2 * k + 2 <= n


def test_representation_check_cases():
    f = Poly(F7, [1, 0, 1])
    rep = gyarmati_threshold_check(F7, f, [1], [1])
    assert not rep.above_threshold and rep.implication_holds
    with pytest.raises(HypothesisViolated):
        gyarmati_threshold_check(F7, Poly.monomial(F7, 1, 2), [1], [1])


@pytest.mark.parametrize("q", [29, 31, 37, 41, 43, 47, 49, 53, 59, 61, 64, 67, 71, 73, 79, 81, 83, 89, 97, 101, 103, 107, 109, 113, 121])
def test_representation_full_sets_above_threshold(q):
    F = field_of(q)
    units = range(1, q)
    checked = 0
    for f in (Poly(F, [1, 0, 1]), Poly(F, [1, 1, 0, 1]), Poly(F, [2 % F.p, 0, 1, 1])):
        try:
            rep = gyarmati_threshold_check(F, f, units, units)
        except HypothesisViolated:
            continue
        checked += 1
        if rep.above_threshold:
            assert rep.N > 0
    assert checked


@given(st.sampled_from([5, 7, 11, 13, 17]), st.data())
def test_representation_implication_random(q, data):
    F = field_of(q)
    A = data.draw(st.sets(st.integers(1, q - 1), min_size=1))
    B = data.draw(st.sets(st.integers(1, q - 1), min_size=1))
    f = Poly(F, [data.draw(st.integers(1, q - 1)), data.draw(st.integers(0, q - 1)), 1])
    try:
        rep = gyarmati_threshold_check(F, f, A, B)
    except HypothesisViolated:
        return
    assert rep.implication_holds


def test_witness_examples():
    res = find_distinct_product_witness(F7, X, [range(1, 7)] * 3)
    assert res.found
    assert len(set(res.elements)) == 3
    prod = 1
    for a in res.elements:
        prod = F7.mul(prod, a)
    assert X(res.x0) == prod
    # at desk scale the guarantee threshold exceeds q - 1, so it is vacuous
    assert not res.guaranteed
    # products of two distinct nonsquares are squares; x^2 hits no nonsquare
    nonsq = [3, 5, 6]
    res = find_distinct_product_witness(F7, Poly(F7, [3, 0, 1]), [[3], nonsq])
    prods = {F7.mul(3, b) for b in nonsq if b != 3}
    vals = {Poly(F7, [3, 0, 1])(x) for x in range(7)}
    assert res.found == bool(prods & vals)
    res = find_distinct_product_witness(F7, Poly.monomial(F7, 3, 2), [[1], [2]])
    assert res.status == "none"


def test_witness_guaranteed_at_large_q():
    F = Field(1009)
    n = distinct_product_min_size(F.q, 2, 2)
    f = Poly(F, [1, 0, 1])
    sets = [range(1, n + 1), range(n + 1, 2 * n + 1)]
    res = find_distinct_product_witness(F, f, sets)
    assert res.guaranteed and res.found


@given(st.sampled_from([5, 7, 8, 11]), st.integers(1, 3), st.data())
def test_k_representations_match_enumeration(q, k, data):
    import itertools

    from prodrep.characters import count_k_representations, kset_probe

    F = field_of(q)
    sets = [data.draw(st.sets(st.integers(1, q - 1), max_size=4)) for _ in range(k)]
    f = Poly(F, data.draw(st.lists(st.integers(0, q - 1), min_size=1, max_size=3)) + [1])
    hist = {}
    for x in range(q):
        hist[f(x)] = hist.get(f(x), 0) + 1
    brute = 0
    for combo in itertools.product(*[sorted(A) for A in sets]):
        prod = 1
        for a in combo:
            prod = F.mul(prod, a)
        brute += hist.get(prod, 0)
    assert count_k_representations(F, sets, f) == brute
    assert kset_probe(F, f, sets).N == brute
