"""
Multiplicative characters and the Weil bound
============================================

For every nontrivial character chi and scalar a, |sum_x chi(a f(x))| is at
most (r - 1) sqrt(q), r the number of distinct roots of f, unless f is a
constant times a d-th power with d the order of chi.
"""
from prodrep.acceptance import field_of
from prodrep.characters import Character, char_sum, count_representations, weil_verify
from prodrep.poly import Poly

F = field_of(13)
f = Poly(F, [1, 0, 1])
for j in (1, 4, 6):
    r = char_sum(Character(F, j), f, 2)
    print(j, Character(F, j).order, round(r.magnitude, 4), round(r.bound, 4))

rep = weil_verify(F, f)
print(rep.checked, rep.passed, round(rep.max_ratio, 4))

# a square polynomial is skipped for the quadratic character
print(weil_verify(F, Poly.monomial(F, 1, 2)).skipped)

# N(A, B) counts (a, b, x) with ab = f(x)
A = [1, 2, 3]
B = [5, 7]
print(count_representations(F, A, B, f))
