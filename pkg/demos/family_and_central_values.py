"""
The cubic family and its central values
=======================================

"""

import math

from cubic_lmoment.family import enumerate_family, family_count, family_size_C2, family_size_constants
from cubic_lmoment.lfunction import central_value

# counting: the leading term alone is still 25% low at 10^6, the X term closes the gap
C1, _ = family_size_constants()
C2 = family_size_C2()
for X in (10**3, 10**4, 10**5):
    n = family_count(X)
    print(f"X = {X:>6}  |F(X)| = {n:>6}  leading {n / (C1 * X * math.log(X)):.3f}"
          f"  with X term {n / (C1 * X * math.log(X) + C2 * X):.3f}")

# L(1/2, chi_c) for the smallest conductors; Y is a free balancing parameter
fam = enumerate_family(1000)
for c in fam[:8]:
    a, b = central_value(c, Y=0.5).value, central_value(c, Y=2.0).value
    print(f"c1 = {str(c.c1):>10} c2 = {str(c.c2):>10}  N(q) = {c.conductor_norm:4d}  L = {a.real:+.8f}{a.imag:+.8f}i  Y-shift {abs(a - b):.1e}")
