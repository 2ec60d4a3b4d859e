"""
Finite fields and discrete logarithms
=====================================

Elements of F_{p^m} are plain integers: the coefficient vector of the
residue polynomial read in base p.
"""
import numpy as np

from prodrep.ff import Field

F = Field(3, 2)
print(F)                       # modulus x^2 + 1, smallest generator
print(F.coords(F.generator))   # (1, 1), i.e. 1 + x

# the exp table lists g^0, g^1, ... and the log table inverts it
print(F.exp_table)
print(F.log_table)

# arithmetic works on whole arrays at once
a = np.arange(1, 9)
print(F.vmul(a, a))            # squares
print([F.dlog(x) for x in F.vmul(a, a)])   # all even

# index-n subgroup H and its cosets g^i H
n = 4
print([F.coset_index(x, n) for x in range(1, 9)])

# past the table limit the log falls back to baby-step giant-step
big = Field(1000003)
x = big.pow(big.generator, 271828)
print(big.dlog(x))
