"""
Cubic symbols and Gauss sums over Z[w]
======================================

"""

from cubic_lmoment.eisenstein import EisensteinInt, cubic_symbol, cubic_symbol_reciprocity
from cubic_lmoment.gauss import gauss_direct, gauss_fast
from cubic_lmoment.primes import factor, sieve_primary_primes

# the first few primary primes; rational primes 2 mod 3 stay inert
for pr in sieve_primary_primes(50):
    print(f"{str(pr.element):>12}  N = {pr.norm:3d}  {pr.kind}")

# a composite modulus, its factorization and one symbol computed two ways
n = EisensteinInt(1, 3) ** 2 * EisensteinInt(4, 3) * EisensteinInt(-5, 0)
print(n, "=", " * ".join(f"{p.element}^{e}" for p, e in factor(n).primes))
a = EisensteinInt(17, 5)
print("by factoring:", cubic_symbol(a, n), " by reciprocity:", cubic_symbol_reciprocity(a, n))

# g(r, n) on a squarefree modulus: twisted multiplicativity reduces it to prime-level sums
n = EisensteinInt(1, 3) * EisensteinInt(4, 3) * EisensteinInt(-5, 0)
for r in (EisensteinInt(1, 0), EisensteinInt(2, 7)):
    f, d = gauss_fast(r, n).value, gauss_direct(r, n).value
    print(f"r = {r}: fast {f:.6f}  direct {d:.6f}  |g|^2 = {abs(f) ** 2:.3f}  N(n) = {n.norm()}")
