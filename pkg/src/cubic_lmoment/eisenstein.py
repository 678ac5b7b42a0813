"""Exact arithmetic in the Eisenstein integers Z[w], w = exp(2 pi i / 3).

Elements are stored as integer pairs (a, b) meaning a + b*w.  Python integers
never overflow, so norms and products are always exact.

Cubic residue symbols are returned as an exponent ``e`` in {0, 1, 2} meaning
w**e, or ``None`` when the symbol vanishes (argument not coprime to the
modulus).
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, NamedTuple, Optional

import numpy as np

from .errors import NotPrime, NotPrimaryizable, ResidueSystemTooLarge, UndefinedGCD

SQRT3 = 3.0 ** 0.5
_OMEGA_C = complex(-0.5, SQRT3 / 2)

RESIDUE_CAP = 10**7

Symbol = Optional[int]


@dataclass(frozen=True, order=True, slots=True)
class EisensteinInt:
    a: int
    b: int = 0

    @staticmethod
    def coerce(z) -> "EisensteinInt":
        if isinstance(z, EisensteinInt):
            return z
        if isinstance(z, int):
            return EisensteinInt(z, 0)
        if isinstance(z, tuple) and len(z) == 2:
            return EisensteinInt(int(z[0]), int(z[1]))
        raise TypeError(f"cannot interpret {z!r} as an Eisenstein integer")

    def __add__(self, other):
        o = EisensteinInt.coerce(other)
        return EisensteinInt(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, other):
        o = EisensteinInt.coerce(other)
        return EisensteinInt(self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        return EisensteinInt.coerce(other) - self

    def __neg__(self):
        return EisensteinInt(-self.a, -self.b)

    def __mul__(self, other):
        o = EisensteinInt.coerce(other)
        # w^2 = -1 - w
        bd = self.b * o.b
        return EisensteinInt(self.a * o.a - bd, self.a * o.b + self.b * o.a - bd)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative exponent")
        result, base = ONE, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __bool__(self):
        return self.a != 0 or self.b != 0

    def __complex__(self):
        return self.a + self.b * _OMEGA_C

    def conj(self) -> "EisensteinInt":
        return EisensteinInt(self.a - self.b, -self.b)

    def norm(self) -> int:
        return self.a * self.a - self.a * self.b + self.b * self.b

    def __divmod__(self, other):
        """Rounded division: the remainder has norm at most 3/4 of the divisor's."""
        o = EisensteinInt.coerce(other)
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Z[w]")
        t = self * o.conj()
        q = EisensteinInt(_round_div(t.a, n), _round_div(t.b, n))
        return q, self - q * o

    def __mod__(self, other):
        return divmod(self, other)[1]

    def divides(self, other) -> bool:
        o = EisensteinInt.coerce(other)
        if not self:
            return not o
        t = o * self.conj()
        n = self.norm()
        return t.a % n == 0 and t.b % n == 0

    def exact_div(self, other) -> "EisensteinInt":
        o = EisensteinInt.coerce(other)
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Z[w]")
        t = self * o.conj()
        if t.a % n or t.b % n:
            raise ValueError(f"{o} does not divide {self}")
        return EisensteinInt(t.a // n, t.b // n)

    def is_unit(self) -> bool:
        return self.norm() == 1

    def is_primary(self) -> bool:
        return (self.a - 1) % 3 == 0 and self.b % 3 == 0

    def __repr__(self):
        return f"E({self.a}, {self.b})"


def _round_div(x: int, n: int) -> int:
    return (2 * x + n) // (2 * n)


ZERO = EisensteinInt(0, 0)
ONE = EisensteinInt(1, 0)
OMEGA = EisensteinInt(0, 1)
LAMBDA = EisensteinInt(1, -1)  # 1 - w, the ramified prime above 3
SQRT_MINUS3 = EisensteinInt(1, 2)  # 1 + 2w

# Units as w^k and -w^k for k = 0, 1, 2.
UNITS = (
    ONE,
    OMEGA,
    EisensteinInt(-1, -1),
    EisensteinInt(-1, 0),
    EisensteinInt(0, -1),
    EisensteinInt(1, 1),
)
# Exponent of w in each unit, up to sign (-1 = (-1)^3 is a cube).
_UNIT_OMEGA_EXP = {u: i % 3 for i, u in enumerate(UNITS)}


def norm(z: EisensteinInt) -> int:
    return EisensteinInt.coerce(z).norm()


class PrimaryElement(NamedTuple):
    """``value = unit * input`` with ``value`` congruent to 1 mod 3."""

    value: EisensteinInt
    unit: EisensteinInt


def primary_associate(z) -> PrimaryElement:
    z = EisensteinInt.coerce(z)
    if not z or z.norm() % 3 == 0:
        raise NotPrimaryizable(f"{z} has no primary associate")
    for u in UNITS:
        v = u * z
        if v.is_primary():
            return PrimaryElement(v, u)
    raise AssertionError("unreachable: some associate is primary")


def as_primary(n) -> EisensteinInt:
    """Validate that ``n`` is primary and return it as an EisensteinInt."""
    if isinstance(n, PrimaryElement):
        n = n.value
    n = EisensteinInt.coerce(n)
    if not n.is_primary():
        raise NotPrimaryizable(f"{n} is not congruent to 1 mod 3")
    return n


def canonical_associate(z: EisensteinInt) -> EisensteinInt:
    if not z:
        return z
    if z.norm() % 3:
        return primary_associate(z).value
    return min(u * z for u in UNITS)


def gcd(z1, z2) -> EisensteinInt:
    x, y = EisensteinInt.coerce(z1), EisensteinInt.coerce(z2)
    if not x and not y:
        raise UndefinedGCD("gcd(0, 0) is undefined")
    while y:
        x, y = y, x % y
    return canonical_associate(x)


# Residue systems ---------------------------------------------------------

class ResidueLattice(NamedTuple):
    """Triangular basis of the ideal (n): representatives x + y*w with
    0 <= x < d1, 0 <= y < d2, and ``w_vec`` an ideal element with w-coordinate d2."""

    d1: int
    d2: int
    w_vec: EisensteinInt


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


@lru_cache(maxsize=65536)
def residue_lattice(n: EisensteinInt) -> ResidueLattice:
    n = EisensteinInt.coerce(n)
    if not n:
        raise ZeroDivisionError("residues modulo zero")
    v1, v2 = n, n * OMEGA
    g, s, t = _xgcd(v1.b, v2.b)
    if g < 0:
        g, s, t = -g, -s, -t
    w = v1 * s + v2 * t
    d2 = g
    d1 = n.norm() // d2
    return ResidueLattice(d1, d2, w)


def reduce_mod(z, n) -> EisensteinInt:
    """The representative of z in the residue system of ``residues_mod(n)``."""
    z = EisensteinInt.coerce(z)
    d1, d2, w = residue_lattice(EisensteinInt.coerce(n))
    k = (z.b - z.b % d2) // d2
    z = z - w * k
    return EisensteinInt(z.a % d1, z.b)


def residues_mod(n, cap: int = RESIDUE_CAP) -> list[EisensteinInt]:
    xs, ys = residue_arrays(n, cap)
    return [EisensteinInt(int(x), int(y)) for x, y in zip(xs, ys)]


def residue_arrays(n, cap: int = RESIDUE_CAP) -> tuple[np.ndarray, np.ndarray]:
    n = EisensteinInt.coerce(n.value if isinstance(n, PrimaryElement) else n)
    N = n.norm()
    if N > cap:
        raise ResidueSystemTooLarge(f"N({n}) = {N} exceeds the cap {cap}")
    d1, d2, _ = residue_lattice(n)
    ys, xs = np.divmod(np.arange(N, dtype=np.int64), d1)
    return xs, ys


# Cubic residue symbols ---------------------------------------------------

class PrimeField(NamedTuple):
    """Residue field data for a primary prime: split primes map w to ``r`` in F_p,
    inert primes (p = 2 mod 3) use F_{p^2} = F_p[w]."""

    kind: str
    p: int
    r: int


def _is_rational_prime(n: int) -> bool:
    from sympy import isprime

    return bool(isprime(n))


@lru_cache(maxsize=1 << 16)
def prime_field(pi: EisensteinInt, check: bool = True) -> PrimeField:
    N = pi.norm()
    if pi.b == 0 and N == pi.a * pi.a and abs(pi.a) % 3 == 2:
        p = abs(pi.a)
        if check and not _is_rational_prime(p):
            raise NotPrime(f"{pi} is not prime")
        return PrimeField("inert", p, 0)
    if N % 3 != 1 or (check and not _is_rational_prime(N)):
        raise NotPrime(f"{pi} is not a primary prime")
    p = N
    r = (-pi.a * pow(pi.b, -1, p)) % p
    return PrimeField("split", p, r)


def _fp2_mul(x1, y1, x2, y2, p):
    yy = y1 * y2
    return (x1 * x2 - yy) % p, (x1 * y2 + x2 * y1 - yy) % p


def _fp2_pow(x, y, e, p):
    rx, ry = 1, 0
    while e:
        if e & 1:
            rx, ry = _fp2_mul(rx, ry, x, y, p)
        x, y = _fp2_mul(x, y, x, y, p)
        e >>= 1
    return rx, ry


def _fp2_root_exponent(x, y, p) -> int:
    if (x, y) == (1, 0):
        return 0
    if (x, y) == (0, 1):
        return 1
    if (x, y) == (p - 1, p - 1):
        return 2
    raise AssertionError("power is not a cube root of unity")


def cubic_symbol_prime(alpha, pi, check: bool = True) -> Symbol:
    """Euler criterion for a primary prime ``pi``."""
    alpha = EisensteinInt.coerce(alpha)
    pi = as_primary(pi)
    f = prime_field(pi, check)
    p = f.p
    if f.kind == "split":
        t = (alpha.a + alpha.b * f.r) % p
        if t == 0:
            return None
        v = pow(t, (p - 1) // 3, p)
        if v == 1:
            return 0
        return 1 if v == f.r else 2
    x, y = alpha.a % p, alpha.b % p
    if x == 0 and y == 0:
        return None
    return _fp2_root_exponent(*_fp2_pow(x, y, (p * p - 1) // 3, p), p)


def _modpow_array(t: np.ndarray, e: int, p: int) -> np.ndarray:
    result = np.ones_like(t)
    base = t % p
    while e:
        if e & 1:
            result = (result * base) % p
        base = (base * base) % p
        e >>= 1
    return result


def _fp2_pow_array(x: np.ndarray, y: np.ndarray, e: int, p: int):
    rx, ry = np.ones_like(x), np.zeros_like(y)
    while e:
        if e & 1:
            yy = (ry * y) % p
            rx, ry = (rx * x - yy) % p, ((rx * y) % p + (x * ry) % p - yy) % p
        yy = (y * y) % p
        x, y = (x * x - yy) % p, (2 * ((x * y) % p) - yy) % p
        e >>= 1
    return rx, ry


def cubic_symbol_prime_array(xs: np.ndarray, ys: np.ndarray, pi) -> np.ndarray:
    """Vectorized Euler criterion; returns exponents with -1 marking zero."""
    pi = as_primary(pi)
    f = prime_field(pi, check=False)
    p = f.p
    if p >= 1 << 31:
        vals = [cubic_symbol_prime(EisensteinInt(int(x), int(y)), pi, check=False) for x, y in zip(xs, ys)]
        return np.array([-1 if v is None else v for v in vals], dtype=np.int64)
    xs = np.asarray(xs, dtype=np.int64) % p
    ys = np.asarray(ys, dtype=np.int64) % p
    out = np.full(xs.shape, -1, dtype=np.int64)
    if f.kind == "split":
        t = (xs + (ys * f.r) % p) % p
        v = _modpow_array(t, (p - 1) // 3, p)
        out[v == 1] = 0
        out[v == f.r] = 1
        out[v == (f.r * f.r) % p] = 2
        out[t == 0] = -1
        return out
    vx, vy = _fp2_pow_array(xs, ys, (p * p - 1) // 3, p)
    out[(vx == 1) & (vy == 0)] = 0
    out[(vx == 0) & (vy == 1)] = 1
    out[(vx == p - 1) & (vy == p - 1)] = 2
    out[(xs == 0) & (ys == 0)] = -1
    return out


def cubic_symbol(alpha, n) -> Symbol:
    """(alpha/n)_3 through the prime factorization of the primary modulus ``n``."""
    from .primes import factor

    alpha = EisensteinInt.coerce(alpha)
    e = 0
    for prime, v in factor(as_primary(n)).primes:
        s = cubic_symbol_prime(alpha, prime.element, check=False)
        if s is None:
            return None
        e += v * s
    return e % 3


def _supplement(n: EisensteinInt) -> tuple[int, int]:
    """Exponents of (w/n)_3 and ((1-w)/n)_3 for primary n = A + B w.

    With -n = (3m - 1) + 3k w these are m + k and 2m (mod 3)."""
    m = (1 - n.a) // 3
    k = -n.b // 3
    return (m + k) % 3, (2 * m) % 3


def cubic_symbol_reciprocity(alpha, n) -> Symbol:
    """(alpha/n)_3 without factoring: Euclid-style descent using cubic
    reciprocity for primary pairs and the supplementary laws for units and 1 - w."""
    alpha = EisensteinInt.coerce(alpha)
    n = as_primary(n)
    e = 0
    while True:
        if n == ONE:
            return e % 3
        alpha = alpha % n
        if not alpha:
            return None
        k = 0
        while alpha.norm() % 3 == 0:
            t = alpha * EisensteinInt(2, 1)  # alpha * conj(1 - w)
            alpha = EisensteinInt(t.a // 3, t.b // 3)
            k += 1
        value, unit = primary_associate(alpha)
        e_omega, e_lambda = _supplement(n)
        # alpha = unit^-1 * value; unit^-1 = +-w^(-j)
        e += k * e_lambda - _UNIT_OMEGA_EXP[unit] * e_omega
        if value == ONE:
            return e % 3
        alpha, n = n, value


def symbol_mul(s: Symbol, t: Symbol) -> Symbol:
    if s is None or t is None:
        return None
    return (s + t) % 3


def symbol_conj(s: Symbol) -> Symbol:
    return None if s is None else (-s) % 3


def symbol_value(s: Symbol) -> complex:
    if s is None:
        return 0j
    return _ROOTS_OF_UNITY[s % 3]


_ROOTS_OF_UNITY = (1 + 0j, _OMEGA_C, _OMEGA_C.conjugate())
ROOTS_OF_UNITY = np.array([*_ROOTS_OF_UNITY, 0j])  # index -1 gives 0


def phase(k: int, N: int) -> complex:
    """e(k/N) with k reduced exactly first."""
    return cmath.exp(2j * cmath.pi * ((k % N) / N))


def primary_elements(norm_limit: int) -> Iterator[EisensteinInt]:
    """All primary elements of norm <= norm_limit, brute-force scan (for oracles)."""
    bmax = int((4 * norm_limit / 3) ** 0.5) + 1
    for b in range(-bmax, bmax + 1):
        if b % 3:
            continue
        amax = bmax + abs(b)
        for a in range(-amax, amax + 1):
            if (a - 1) % 3 == 0:
                z = EisensteinInt(a, b)
                if 0 < z.norm() <= norm_limit:
                    yield z
