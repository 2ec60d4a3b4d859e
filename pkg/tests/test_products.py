import itertools

import networkx as nx
import pytest
from hypothesis import given, strategies as st

from prodrep import oracles
from prodrep.acceptance import field_of
from prodrep.errors import EmptyConstruction, NoValidB0, PrecondViolated
from prodrep.ff import Field
from prodrep.poly import Poly
from prodrep.products import (
    CandidateSet,
    build_instance,
    counting_upper_bound,
    coset_construction,
    exact_Fk,
    generator_invariance_check,
    greedy_star_set,
    large_coset_indices,
    remark3_construction,
    remark4_construction,
    star_check,
    structure_distance,
)

F7 = Field(7)


def mono(F, c, d):
    return Poly.monomial(F, c, d)


def inst7(h, k=2):
    return build_instance(F7, h, k)


def test_build_instance_examples():
    I = inst7(mono(F7, 1, 3))
    assert (I.ell, I.n, I.C, I.s) == (3, 3, 1, 0)
    I = inst7(mono(F7, 3, 2))
    assert (I.ell, I.n, I.s) == (2, 2, 1)
    F = Field(5, 2)
    alpha = next(a for a in F.units() if F.dlog(a) % 2)
    I = build_instance(F, Poly(F, [F.neg(1), 0, alpha]), 3)
    assert (I.ell, I.n, I.s) == (1, 1, 0)


def test_star_check_examples():
    I = inst7(mono(F7, 1, 2))
    assert star_check(I, CandidateSet.from_elements(F7, [5]))
    assert not star_check(I, CandidateSet.from_elements(F7, [2, 4]))
    assert star_check(I, CandidateSet.from_elements(F7, [1, 3]))


def test_F2_squares_over_F7():
    I = inst7(mono(F7, 1, 2))
    assert exact_Fk(I).value == 2 == oracles.Fk(F7, I.h, 2)
    assert I.main_term == 0


def test_F3_squares_nonsquare_class():
    for q in (7, 11, 13, 9):
        F = field_of(q)
        I = build_instance(F, mono(F, 1, 2), 3)
        A = CandidateSet.from_dlogs(q - 1, range(1, q - 1, 2))
        assert star_check(I, A) and len(A) == (q - 1) // 2
        A0 = coset_construction(I)
        assert A0 == A


def test_coset_construction_examples():
    I = inst7(mono(F7, 1, 3))
    A = coset_construction(I)
    assert len(A) == 2 and star_check(I, A)
    with pytest.raises(EmptyConstruction):
        coset_construction(inst7(mono(F7, 1, 2)))


def test_large_coset_indices_examples():
    F = Field(13)
    I = build_instance(F, mono(F, 1, 3), 2)
    A = coset_construction(I)
    rep = large_coset_indices(I, A, (F.q - 1) // I.n)
    assert rep.indices == I.m_record.witness
    assert large_coset_indices(I, CandidateSet(12), 1).indices.mask == 0
    # certified threshold M sqrt(q) exceeds the coset size at this q
    rep = large_coset_indices(I, A, 50)
    assert rep.status == "vacuous" and len(rep.indices) == 0


def test_structure_distance_examples():
    F = Field(13)
    I = build_instance(F, mono(F, 1, 3), 2)
    A = coset_construction(I)
    assert structure_distance(I, A)[1] == 0
    assert structure_distance(I, A.without(A.dlogs[0]))[1] == 1
    F11 = Field(11)
    I = build_instance(F11, mono(F11, 1, 2), 3)
    r = exact_Fk(I)
    assert r.value == oracles.Fk(F11, I.h, 3) == 5
    B0, d = structure_distance(I, r.witness)
    assert d == 0 and B0.elements == (1,)
    with pytest.raises(NoValidB0):
        structure_distance(inst7(mono(F7, 1, 2)), r.witness)


def test_sqrt_q_progression_examples():
    assert remark3_construction(13, 2).t == 4
    c = remark3_construction(13, 2)
    assert len(c.A) == 4 and c.instance.q == 169 and all(c.checks.values())
    assert remark3_construction(5, 2).t == 2
    c = remark3_construction(3, 2)
    assert c.t == 1 and len(c.A) < 2 and c.checks["star"]


def test_mth_root_progression_examples():
    c = remark4_construction(7, 3, 2)
    assert c.instance.q == 343 and len(c.A) == 2 and all(c.checks.values())
    assert all(x < 7 for x in c.A.elements(c.instance.field))
    c = remark4_construction(13, 3, 2)
    assert c.instance.q == 2197 and len(c.A) == 4
    with pytest.raises(PrecondViolated):
        remark4_construction(5, 3, 2)


def test_invariance_examples():
    rep = generator_invariance_check(inst7(mono(F7, 1, 3)))
    assert rep.passed and rep.generators == 2
    F = Field(13)
    rep = generator_invariance_check(build_instance(F, mono(F, 2, 4), 2))
    assert rep.passed and len(rep.s_values) > 1
    F = Field(11)
    rep = generator_invariance_check(build_instance(F, Poly(F, [1, 0, 1]), 3))
    assert rep.passed and rep.main_terms == {0}


# exact_Fk against the all-subsets oracle
ORACLE_CASES = [
    (q, coeffs, k)
    for q in (4, 5, 7, 8, 9, 11)
    for coeffs in ([0, 0, 1], [0, 0, 0, 1], [3, 0, 1], [0, 1, 1], [0, 0, 0, 0, 1], [1, 0, 0, 1])
    for k in (2, 3)
]


@pytest.mark.parametrize("q,coeffs,k", ORACLE_CASES)
def test_exact_Fk_matches_oracle(q, coeffs, k):
    F = field_of(q)
    h = Poly(F, [c % F.p for c in coeffs])
    if h.degree < 1:
        return
    I = build_instance(F, h, k)
    r = exact_Fk(I)
    assert r.mode == "exact"
    assert r.value == oracles.Fk(F, h, k)
    assert oracles.has_star(F, h, k, r.witness.elements(F))


@pytest.mark.parametrize("q", [13, 17, 19, 23, 25, 29, 31])
@pytest.mark.parametrize("d", [2, 3, 4])
def test_exact_F2_matches_independent_set(q, d):
    # k = 2: the largest star set is a maximum independent set of the conflict graph
    F = field_of(q)
    h = Poly(F, [1 % F.p] + [0] * (d - 1) + [1])
    vals = {h(x) for x in range(q)}
    G = nx.Graph()
    G.add_nodes_from(range(1, q))
    for a, b in itertools.combinations(range(1, q), 2):
        if F.mul(a, b) in vals:
            G.add_edge(a, b)
    best = max(len(c) for c in nx.find_cliques(nx.complement(G)))
    assert exact_Fk(build_instance(F, h, 2)).value == best


def test_bracket_mode_beyond_cap():
    F = Field(101)
    I = build_instance(F, mono(F, 1, 5), 2)
    r = exact_Fk(I)
    assert r.mode == "bracket" and r.value is None
    assert r.lower <= r.upper == counting_upper_bound(I)
    assert star_check(I, r.witness) and len(r.witness) == r.lower


@given(st.sampled_from([7, 9, 11, 13, 16, 17]), st.integers(2, 4), st.data())
def test_star_is_hereditary(q, k, data):
    F = field_of(q)
    h = Poly(F, data.draw(st.lists(st.integers(0, q - 1), min_size=1, max_size=3)) + [1])
    I = build_instance(F, h, k)
    A = CandidateSet.from_dlogs(q - 1, data.draw(st.sets(st.integers(0, q - 2))))
    ok = star_check(I, A)
    assert ok == oracles.has_star(F, h, k, A.elements(F))
    if ok and len(A):
        assert star_check(I, A.without(data.draw(st.sampled_from(A.dlogs))))


@given(st.sampled_from([7, 11, 13, 16, 19, 25]), st.integers(2, 3), st.data())
def test_greedy_and_construction_are_star(q, k, data):
    F = field_of(q)
    ell = data.draw(st.integers(1, 6))
    c = data.draw(st.integers(1, q - 1))
    I = build_instance(F, mono(F, c, ell), k)
    assert star_check(I, greedy_star_set(I))
    if I.m_value:
        A = coset_construction(I)
        assert len(A) * I.n == I.m_value * (q - 1)
