"""The family of primitive cubic characters chi_c, c = c2 c1^2.

c1, c2 are squarefree, primary and coprime, c = 1 mod 9 and c != 1.  The
conductor is generated by q = c1 c2.  Enumeration runs over squarefree q by
norm and, for each q, over its divisors d = c1 with q d = 1 mod 9.

The mod 9 test never multiplies anything out: a primary prime is
1 + 3 s (mod 9) for a class s in Z[w]/3, and those classes add.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Optional

import mpmath
import numpy as np

from .eisenstein import (
    ONE,
    EisensteinInt,
    Symbol,
    as_primary,
    cubic_symbol_prime,
    cubic_symbol_prime_array,
    gcd,
)
from .primes import factor, prime_table

CACHE_FORMAT = "cubic-family"
CACHE_VERSION = 1


@dataclass(frozen=True)
class FamilyElement:
    c1: EisensteinInt
    c2: EisensteinInt
    c: EisensteinInt
    q: EisensteinInt
    conductor_norm: int
    primes1: tuple[EisensteinInt, ...] = ()
    primes2: tuple[EisensteinInt, ...] = ()

    @classmethod
    def from_pair(cls, c1, c2) -> "FamilyElement":
        c1, c2 = as_primary(c1), as_primary(c2)
        p1 = tuple(pr.element for pr, _ in factor(c1).primes)
        p2 = tuple(pr.element for pr, _ in factor(c2).primes)
        q = c1 * c2
        return cls(c1, c2, c2 * c1 * c1, q, q.norm(), p1, p2)

    def conjugate(self) -> "FamilyElement":
        """The element c1 c2^2, whose character is the complex conjugate."""
        c = self.c1 * self.c2 * self.c2
        return FamilyElement(self.c2, self.c1, c, self.q, self.conductor_norm, self.primes2, self.primes1)

    def key(self) -> tuple[int, int, int]:
        return (self.conductor_norm, self.c.a, self.c.b)

    def prime_powers(self) -> list[tuple[EisensteinInt, int]]:
        return [(p, 1) for p in self.primes2] + [(p, 2) for p in self.primes1]

    def chi(self, alpha) -> Symbol:
        alpha = EisensteinInt.coerce(alpha)
        e = 0
        for p, v in self.prime_powers():
            s = cubic_symbol_prime(alpha, p, check=False)
            if s is None:
                return None
            e += v * s
        return e % 3

    def chi_array(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        """Exponents of chi_c on x + y w; -1 marks a zero value."""
        total = np.zeros(np.shape(xs), dtype=np.int64)
        zero = np.zeros(np.shape(xs), dtype=bool)
        for p, v in self.prime_powers():
            e = cubic_symbol_prime_array(xs, ys, p)
            zero |= e < 0
            total += v * np.where(e < 0, 0, e)
        total %= 3
        total[zero] = -1
        return total


def chi(c: FamilyElement, alpha) -> Symbol:
    return c.chi(alpha)


def _mod9_class(z: EisensteinInt) -> int:
    """Index 3 s_a + s_b of (z - 1)/3 mod 3, for z = 1 mod 3."""
    return 3 * (((z.a - 1) // 3) % 3) + (z.b // 3) % 3


def _add(s: int, t: int) -> int:
    return 3 * ((s // 3 + t // 3) % 3) + (s % 3 + t % 3) % 3


_ADD = [[_add(s, t) for t in range(9)] for s in range(9)]
_DOUBLE = [_add(s, s) for s in range(9)]


def _squarefree_stream(X: int):
    """Yield (norm, prime index tuple) for squarefree primary q with 1 < N(q) <= X."""
    table = prime_table(X)
    count = table.count_upto(X)
    norms = table.norms[:count].tolist()
    stack = [(0, 1, ())]
    while stack:
        start, nm, idx = stack.pop()
        for i in range(start, count):
            m = nm * norms[i]
            if m > X:
                break
            f = idx + (i,)
            yield m, f
            stack.append((i + 1, m, f))


def enumerate_family(X: int) -> list[FamilyElement]:
    if X < 1:
        return []
    table = prime_table(X)
    count = table.count_upto(X)
    elems = [p.element for p in table.primes[:count]]
    classes = [_mod9_class(z) for z in elems]
    out: list[FamilyElement] = []
    for nm, idx in _squarefree_stream(X):
        sq = 0
        for i in idx:
            sq = _ADD[sq][classes[i]]
        k = len(idx)
        for mask in range(1 << k):
            s = sq
            for bit in range(k):
                if mask >> bit & 1:
                    s = _ADD[s][classes[idx[bit]]]
            if s:
                continue
            p1 = tuple(elems[idx[bit]] for bit in range(k) if mask >> bit & 1)
            p2 = tuple(elems[idx[bit]] for bit in range(k) if not mask >> bit & 1)
            c1 = _prod(p1)
            c2 = _prod(p2)
            q = c1 * c2
            out.append(FamilyElement(c1, c2, c2 * c1 * c1, q, nm, p1, p2))
    out.sort(key=FamilyElement.key)
    return out


def _prod(zs) -> EisensteinInt:
    z = ONE
    for w in zs:
        z = z * w
    return z


def family_count(X: int) -> int:
    """|F(X)| without building the elements: track, for each squarefree q, how
    many divisor choices land in each class mod 9."""
    if X < 1:
        return 0
    table = prime_table(X)
    count = table.count_upto(X)
    norms = table.norms[:count].tolist()
    classes = [_mod9_class(p.element) for p in table.primes[:count]]
    total = 0
    start_hist = (1,) + (0,) * 8
    stack = [(0, 1, start_hist)]
    while stack:
        start, nm, hist = stack.pop()
        for i in range(start, count):
            m = nm * norms[i]
            if m > X:
                break
            s = classes[i]
            add1, add2 = _ADD[s], _ADD[_DOUBLE[s]]
            new = [0] * 9
            for t in range(9):
                h = hist[t]
                if h:
                    new[add1[t]] += h
                    new[add2[t]] += h
            total += new[0]
            stack.append((i + 1, m, tuple(new)))
    return total


def is_member(c1, c2) -> bool:
    """Direct membership test from the definition."""
    c1, c2 = EisensteinInt.coerce(c1), EisensteinInt.coerce(c2)
    if not (c1.is_primary() and c2.is_primary()):
        return False
    if c1 == ONE and c2 == ONE:
        return False
    if gcd(c1, c2) != ONE:
        return False
    if not (factor(c1).is_squarefree() and factor(c2).is_squarefree()):
        return False
    c = c2 * c1 * c1
    return (c.a - 1) % 9 == 0 and c.b % 9 == 0


def character_sum_over_family(m, X: int, family: Optional[list[FamilyElement]] = None) -> complex:
    """Sum of chi_m(c) over c in F(X) coprime to m."""
    from .eisenstein import ROOTS_OF_UNITY

    m = as_primary(m)
    fam = enumerate_family(X) if family is None else family
    if not fam:
        return 0j
    xs = np.array([c.c.a for c in fam], dtype=np.int64)
    ys = np.array([c.c.b for c in fam], dtype=np.int64)
    total = np.zeros(len(fam), dtype=np.int64)
    zero = np.zeros(len(fam), dtype=bool)
    for pr, v in factor(m).primes:
        e = cubic_symbol_prime_array(xs, ys, pr.element)
        zero |= e < 0
        total += v * np.where(e < 0, 0, e)
    total %= 3
    total[zero] = -1
    return complex(np.sum(ROOTS_OF_UNITY[total]))


# Euler products ------------------------------------------------------------

def _local_factor(N: np.ndarray) -> np.ndarray:
    x = 1.0 / N
    return 1.0 - 3.0 * x * x + 2.0 * x ** 3


def local_factor_product(limit: int) -> tuple[float, float]:
    """prod over primary primes of norm <= limit of (1 - 3/N^2 + 2/N^3), with a
    rigorous bound on the log of the omitted tail (<= 2 ideals per norm)."""
    table = prime_table(limit)
    N = table.norms[: table.count_upto(limit)].astype(float)
    val = float(np.exp(np.sum(np.log(_local_factor(N)))))
    # -log(1 - u) <= u/(1 - u) with u <= 3/N^2 <= 3/16
    tail = 2.0 * 3.0 * (16.0 / 13.0) / limit
    return val, tail


@lru_cache(maxsize=None)
def zeta_K(s: float = 2.0) -> float:
    """Dedekind zeta of Q(w): zeta(s) L(s, chi_-3)."""
    with mpmath.workdps(30):
        L = (mpmath.zeta(s, mpmath.mpf(1) / 3) - mpmath.zeta(s, mpmath.mpf(2) / 3)) / mpmath.mpf(3) ** s
        return float(mpmath.zeta(s) * L)


def _correction_log_bound(limit: int) -> float:
    # |log((1+2x)/((1-x)(1+x)^3))| <= 3 x^3 for x <= 1/4; at most 2 prime
    # ideals per norm gives sum over N > B of 6 N^-3 <= 3/B^2
    return 3.0 / limit**2


def euler_F(tol: float = 1e-10) -> tuple[float, float]:
    """F(1;1) = prod over primary primes of (1 - 3/N^2 + 2/N^3), accelerated by
    factoring out prod (1 - N^-2)^3 = (9/8 / zeta_K(2))^3.  Returns (value, bound)."""
    B = max(1000, math.ceil(math.sqrt(6.0 / tol)))
    table = prime_table(B)
    N = table.norms[: table.count_upto(B)].astype(float)
    x = 1.0 / N
    corr = np.sum(np.log1p(2 * x) - np.log1p(-x) - 3 * np.log1p(x))
    base = (9.0 / 8.0) / zeta_K(2.0)
    val = base**3 * math.exp(corr)
    tail = _correction_log_bound(B)
    return val, val * math.expm1(tail)


def F_psi0(n=ONE, tol: float = 1e-10) -> float:
    """F(1; n): the Euler product with the local factors at primes dividing n
    replaced by (1 - 1/N)^2."""
    val, _ = euler_F(tol)
    n = as_primary(n)
    for pr, _ in factor(n).primes:
        N = float(pr.norm)
        val *= (1 - 1 / N) ** 2 / float(_local_factor(np.array(N)))
    return val


def F_log_derivative(n=ONE, limit: int = 10**6) -> tuple[float, float]:
    """F'/F (1; n) truncated at ``limit`` with a bound on the omitted tail."""
    n = as_primary(n)
    table = prime_table(limit)
    N = table.norms[: table.count_upto(limit)].astype(float)
    divs = {pr.element: pr.norm for pr, _ in factor(n).primes}
    terms = 6 * np.log(N) * (1 - 1 / N) / (N**2 * _local_factor(N))
    s = float(np.sum(terms))
    for pi, Nn in divs.items():
        Nn = float(Nn)
        s -= 6 * math.log(Nn) * (1 - 1 / Nn) / (Nn**2 * float(_local_factor(np.array(Nn))))
        s += 2 * math.log(Nn) / (Nn - 1)
    # terms <= 6 (16/13) log N / N^2, at most 2 per norm: <= 2 * 7.4 (log B + 1)/B
    tail = 2 * 6 * (16 / 13) * (math.log(limit) + 1) / limit
    return s, tail


@lru_cache(maxsize=None)
def zeta_square_derivative_constant() -> float:
    """d/ds ((s-1)^2 zeta_K(s)^2) at s = 1, i.e. 2 h(1) h'(1) with
    h(s) = (s-1) zeta(s) L(s, chi_-3)."""
    with mpmath.workdps(30):
        third = mpmath.mpf(1) / 3
        L = lambda s: (mpmath.zeta(s, third) - mpmath.zeta(s, 2 * third)) / mpmath.mpf(3) ** s
        h1 = mpmath.pi / (3 * mpmath.sqrt(3))  # L(1, chi_-3)
        dh1 = mpmath.euler * h1 + mpmath.diff(L, 1)
        return float(2 * h1 * dh1)


def family_size_constants(n=ONE, tol: float = 1e-10) -> tuple[float, float]:
    """(C1(n), F-dependent part of C2(n)); |F(X)| ~ C1 X log X + C2 X."""
    F = F_psi0(n, tol)
    dlog, _ = F_log_derivative(n)
    C1 = 4 * math.pi**2 * F / 2187
    C2_partial = (4 / 81) * (F * (math.pi**2 / 27) * math.log(3 / math.e) + F * dlog * math.pi**2 / 27)
    return C1, C2_partial


def family_size_C2(n=ONE, tol: float = 1e-10) -> float:
    _, part = family_size_constants(n, tol)
    return part + (4 / 81) * F_psi0(n, tol) * zeta_square_derivative_constant()


# Cache -------------------------------------------------------------------------

def write_family_cache(X: int, path: Path, family: Optional[list[FamilyElement]] = None) -> int:
    fam = enumerate_family(X) if family is None else family
    with open(path, "w") as fh:
        fh.write(json.dumps({"format": CACHE_FORMAT, "version": CACHE_VERSION, "X": X}) + "\n")
        for c in fam:
            fh.write(json.dumps({"c1_a": c.c1.a, "c1_b": c.c1.b, "c2_a": c.c2.a, "c2_b": c.c2.b,
                                 "conductor_norm": c.conductor_norm}) + "\n")
    return len(fam)


def read_family_cache(path: Path) -> list[FamilyElement]:
    with open(path) as fh:
        header = json.loads(fh.readline())
        if header.get("format") != CACHE_FORMAT or header.get("version") != CACHE_VERSION:
            raise ValueError(f"{path}: unrecognized cache header {header}")
        return [FamilyElement.from_pair(EisensteinInt(r["c1_a"], r["c1_b"]), EisensteinInt(r["c2_a"], r["c2_b"]))
                for r in map(json.loads, fh)]
