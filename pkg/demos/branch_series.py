"""
Series of the probability branch at infinity.

For C**2 - z C + 1 = 0 the branch C = 1/z + ... has Catalan numbers as
coefficients, and for (z**2 - 1) C**2 = 1 the branch is 1/sqrt(z**2 - 1).
Rational mode gives exact fractions, float mode agrees with them.
"""
import numpy as np

from motherbody.branch import expand_probability_branch, probability_branch_test
from motherbody.polyalg import BiPoly

catalan = BiPoly({(2, 0): 1, (1, 1): -1, (0, 0): 1}, exact=True)
print(probability_branch_test(catalan))
s = expand_probability_branch(catalan, 15)
print("odd coefficients:", [str(s.coefficient(i)) for i in range(3, 16, 2)])

arcsine = BiPoly({(2, 2): 1, (2, 0): -1, (0, 0): -1})
s = expand_probability_branch(arcsine, 40)
for z in (3.0, 2.0 + 2.0j, -5.0j):
    print(z, s(z), 1 / np.sqrt(z - 1) / np.sqrt(z + 1))

# a squared factor has a double root on the diagonal and is refused
print(probability_branch_test(BiPoly({(2, 2): 1, (1, 1): -2, (0, 0): 1})))
