"""
Sumsets in Z_n and m(k, n; s)
=============================

m(k, n; s) is the largest B in Z_n with s outside kB.  Small n are certified
by exhaustive pruned search; the divisor bounds bracket every case.
"""
from prodrep.sumsets import (
    ZnSubset,
    interval_construction,
    k_fold_sumset,
    m_bounds,
    m_exact,
    m_formula_coprime,
)

B = ZnSubset.of([0, 1], 7)
print(k_fold_sumset(B, 3))

rec = m_exact(3, 12, 5)
print(rec.value, rec.witness, rec.lower, rec.upper)

# coprime k, n: the formula is exact
print(m_exact(2, 9, 4).value, m_formula_coprime(2, 9))

# the gap cases
for n in (4, 8, 12, 16):
    lo, hi = m_bounds(2, n)
    print(n, lo, hi, [m_exact(2, n, s).value for s in range(n)])

print(interval_construction(2, 12, 0, 6))
