"""
Polynomials over F_q: factoring and the power part
==================================================
"""
from prodrep.ff import Field
from prodrep.poly import Poly, factor, parse_poly, power_part, value_set

F7 = Field(7)
h = parse_poly(F7, "2,0,4,0,2")        # 2x^4 + 4x^2 + 2
print(factor(h))

# h = C f^ell with ell as large as possible
pp = power_part(h)
print(pp.C, pp.f, pp.ell)             # 2, x^2 + 1, 2

print(sorted(value_set(Poly.monomial(F7, 1, 2))))   # the squares and 0

# over an extension field, coefficients are colon-joined coordinates
F9 = Field(3, 2)
g = parse_poly(F9, "1:1,0:0,1:0")
print(g, factor(g, seed=3))
