"""
Geometric progressions that beat the main term
==============================================

With h = alpha x^m - 1 the main term is 0, yet a progression inside F_p*
still has the star property.
"""
from prodrep.products import remark3_construction, remark4_construction

for p in (5, 7, 11, 13):
    for k in (2, 3):
        c = remark3_construction(p, k)
        print(p, k, c.t, c.A.elements(c.instance.field), c.checks)

c = remark4_construction(13, 3, 2)
print(c.instance.q, c.A.elements(c.instance.field), c.checks)
