"""
Sets whose k-fold products avoid a polynomial's values
======================================================

F_k(q; h) is the largest A in F_q* with no k distinct elements multiplying
into h(F_q).  The main term m(k, n; s) q / n comes from unions of cosets.
"""
from prodrep.ff import Field
from prodrep.poly import Poly
from prodrep.products import build_instance, coset_construction, exact_Fk, structure_distance

for q in (7, 13, 19, 31, 37):
    F = Field(q)
    inst = build_instance(F, Poly.monomial(F, 1, 3), 2)
    res = exact_Fk(inst)
    print(q, inst.n, inst.s, inst.m_value, res.value, res.main_term, float(res.defect))

F = Field(31)
inst = build_instance(F, Poly.monomial(F, 1, 3), 2)
A0 = coset_construction(inst)
print(A0.dlogs, structure_distance(inst, A0))
best = exact_Fk(inst).witness
print(best.dlogs, structure_distance(inst, best))

# beyond the exhaustive cap only a bracket is reported
F = Field(211)
print(exact_Fk(build_instance(F, Poly.monomial(F, 1, 5), 2)))
