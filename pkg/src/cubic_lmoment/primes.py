"""Primary primes of Z[w] by norm, factorization, ideal counting.

The prime table is built once per limit and shared.  Split rational primes
p = 1 mod 3 give two conjugate primary primes of norm p; inert primes
p = 2 mod 3 give the single primary prime -p of norm p^2.  The ramified prime
1 - w is not primary and is never stored.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Optional

import numpy as np
import sympy
from scipy import integrate, sparse

from .eisenstein import EisensteinInt, ONE, as_primary, gcd, primary_associate
from .errors import FactorizationUnavailable, SieveCapacity

SIEVE_CAPACITY = 10**8
DEFAULT_FACTOR_LIMIT = 10**6
CACHE_FORMAT = "eisenstein-primes"
CACHE_VERSION = 1


@dataclass(frozen=True, slots=True)
class EisensteinPrime:
    element: EisensteinInt
    norm: int
    kind: str  # "split" or "inert"

    @property
    def p(self) -> int:
        """The rational prime below."""
        return self.norm if self.kind == "split" else -self.element.a

    def sort_key(self):
        return (self.norm, self.element.a, self.element.b)


@dataclass(frozen=True)
class Factorization:
    primes: tuple[tuple[EisensteinPrime, int], ...]
    unit: EisensteinInt

    def omega(self) -> int:
        """Total number of prime factors with multiplicity."""
        return sum(e for _, e in self.primes)

    def value(self) -> EisensteinInt:
        z = self.unit
        for pr, e in self.primes:
            z = z * pr.element ** e
        return z

    def is_squarefree(self) -> bool:
        return all(e == 1 for _, e in self.primes)


def rational_primes(limit: int) -> np.ndarray:
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    sieve = np.ones(limit + 1, dtype=bool)
    sieve[:2] = False
    sieve[4::2] = False
    for i in range(3, math.isqrt(limit) + 1, 2):
        if sieve[i]:
            sieve[i * i :: 2 * i] = False
    return np.flatnonzero(sieve).astype(np.int64)


def _cube_root_of_unity(p: int) -> int:
    """A root of t^2 + t + 1 mod p for p = 1 mod 3."""
    g = 2
    while True:
        r = pow(g, (p - 1) // 3, p)
        if r != 1:
            return r
        g += 1


def split_prime(p: int) -> tuple[EisensteinInt, EisensteinInt]:
    """The two conjugate primary primes above a rational prime p = 1 mod 3."""
    r = _cube_root_of_unity(p)
    # (p, w - r) is a prime ideal; reduce it to a generator.
    pi = gcd(EisensteinInt(p, 0), EisensteinInt(-r, 1))
    assert pi.norm() == p
    a, b = sorted((pi, pi.conj()))
    return a, b


class PrimeTable:
    """Immutable table of the primary primes of norm <= limit, sorted by
    (norm, a, b), with numpy columns for vectorized work."""

    def __init__(self, limit: int, primes: list[EisensteinPrime]):
        self.limit = limit
        self.primes = primes
        self.a = np.array([q.element.a for q in primes], dtype=np.int64)
        self.b = np.array([q.element.b for q in primes], dtype=np.int64)
        self.norms = np.array([q.norm for q in primes], dtype=np.int64)
        self.index = {q.element: i for i, q in enumerate(primes)}
        self.by_rational: dict[int, tuple[EisensteinPrime, ...]] = {}
        for q in primes:
            self.by_rational.setdefault(q.p, ())
            self.by_rational[q.p] += (q,)
        self.rational = rational_primes(limit)

    def __len__(self):
        return len(self.primes)

    def count_upto(self, x: float) -> int:
        return int(np.searchsorted(self.norms, math.floor(x), side="right"))

    def upto(self, x: float) -> list[EisensteinPrime]:
        return self.primes[: self.count_upto(x)]


def _build_table(limit: int) -> PrimeTable:
    out: list[EisensteinPrime] = []
    for p in rational_primes(limit).tolist():
        if p % 3 == 1:
            for z in split_prime(p):
                out.append(EisensteinPrime(z, p, "split"))
        elif p % 3 == 2 and p * p <= limit:
            out.append(EisensteinPrime(EisensteinInt(-p, 0), p * p, "inert"))
    out.sort(key=EisensteinPrime.sort_key)
    return PrimeTable(limit, out)


_TABLES: dict[int, PrimeTable] = {}


def prime_table(limit: int) -> PrimeTable:
    """Shared table covering at least ``limit`` (reuses a larger one if built)."""
    if limit > SIEVE_CAPACITY:
        raise SieveCapacity(f"norm limit {limit} exceeds the sieve capacity {SIEVE_CAPACITY}")
    for lim in sorted(_TABLES):
        if lim >= limit:
            return _TABLES[lim]
    # round up so that nearby requests share one table
    lim = max(limit, 1000)
    lim = 10 ** math.ceil(math.log10(lim)) if lim <= 10**6 else lim
    table = _load_cached(lim) or _build_table(lim)
    _TABLES[lim] = table
    _save_cached(table)
    return table


def sieve_primary_primes(norm_limit: int) -> list[EisensteinPrime]:
    if norm_limit > SIEVE_CAPACITY:
        raise SieveCapacity(f"norm limit {norm_limit} exceeds the sieve capacity {SIEVE_CAPACITY}")
    if norm_limit < 2:
        return []
    return prime_table(norm_limit).upto(norm_limit)


# Cache files ---------------------------------------------------------------

def cache_dir() -> Optional[Path]:
    import os

    d = os.environ.get("CUBIC_LMOMENT_CACHE_DIR")
    return Path(d) if d else None


def write_prime_cache(table: PrimeTable, path: Path) -> None:
    with open(path, "w") as fh:
        fh.write(json.dumps({"format": CACHE_FORMAT, "version": CACHE_VERSION, "limit": table.limit}) + "\n")
        for q in table.primes:
            rec = {"a": q.element.a, "b": q.element.b, "norm": q.norm, "kind": q.kind}
            fh.write(json.dumps(rec) + "\n")


def read_prime_cache(path: Path) -> PrimeTable:
    with open(path) as fh:
        header = json.loads(fh.readline())
        if header.get("format") != CACHE_FORMAT or header.get("version") != CACHE_VERSION:
            raise ValueError(f"{path}: unrecognized cache header {header}")
        primes = []
        for line in fh:
            rec = json.loads(line)
            primes.append(EisensteinPrime(EisensteinInt(rec["a"], rec["b"]), rec["norm"], rec["kind"]))
    return PrimeTable(int(header["limit"]), primes)


def _load_cached(limit: int) -> Optional[PrimeTable]:
    d = cache_dir()
    if d is None:
        return None
    path = d / f"primes-{limit}.jsonl"
    return read_prime_cache(path) if path.exists() else None


def _save_cached(table: PrimeTable) -> None:
    d = cache_dir()
    if d is None:
        return
    d.mkdir(parents=True, exist_ok=True)
    path = d / f"primes-{table.limit}.jsonl"
    if not path.exists():
        write_prime_cache(table, path)


# Factorization -------------------------------------------------------------

def factor(n, table: Optional[PrimeTable] = None) -> Factorization:
    """Factor an element coprime to 3 into primary primes times a unit."""
    z = n.value if hasattr(n, "value") and not isinstance(n, EisensteinInt) else n
    z = EisensteinInt.coerce(z)
    value, unit = primary_associate(z)  # value = unit * z
    N = value.norm()
    if table is None:
        table = prime_table(max(1000, min(math.isqrt(N) + 1, DEFAULT_FACTOR_LIMIT)))
    found: list[tuple[EisensteinPrime, int]] = []
    m = N
    rest = value
    for p in table.rational.tolist():
        if p * p > m:
            break
        if m % p:
            continue
        while m % p == 0:
            m //= p
        rest = _strip(rest, p, table, found)
    if m > 1:
        # every prime factor of m exceeds the table, so m is prime when m < limit^2
        if m > table.limit**2 and not sympy.isprime(m):
            raise FactorizationUnavailable(f"N({z}) = {N} has a cofactor {m} beyond the prime table")
        rest = _strip(rest, m, table, found)
    assert rest == ONE, (z, rest)
    found.sort(key=lambda t: t[0].sort_key())
    # z = unit^-1 * value
    inv = next(u for u in _units() if (u * unit) == ONE)
    return Factorization(tuple(found), inv)


def _units():
    from .eisenstein import UNITS

    return UNITS


def _primes_above(p: int, table: PrimeTable) -> tuple[EisensteinPrime, ...]:
    if p in table.by_rational:
        return table.by_rational[p]
    if p % 3 == 1:
        return tuple(EisensteinPrime(z, p, "split") for z in split_prime(p))
    return (EisensteinPrime(EisensteinInt(-p, 0), p * p, "inert"),)


def _strip(rest, p, table, found):
    for q in _primes_above(p, table):
        e = 0
        while q.element.divides(rest):
            rest = rest.exact_div(q.element)
            e += 1
        if e:
            found.append((q, e))
    return rest


# Counting --------------------------------------------------------------------

def pi_K(x: float) -> int:
    """Number of prime ideals of norm <= x (the ramified ideal included)."""
    if x < 2:
        return 0
    return prime_table(int(x)).count_upto(x) + (1 if x >= 3 else 0)


def ideal_count(x: float) -> int:
    """Nonzero ideals of norm <= x: lattice points of norm <= x, minus zero, over 6."""
    X = math.floor(x)
    if X < 1:
        return 0
    # a^2 - ab + b^2 <= X  <=>  (2a - b)^2 <= 4X - 3b^2
    bmax = math.isqrt(4 * X // 3)
    b = np.arange(-bmax, bmax + 1, dtype=np.int64)
    disc = 4 * X - 3 * b * b
    s = np.array([math.isqrt(int(v)) for v in disc], dtype=np.int64)
    hi = (b + s) // 2
    lo = -((s - b) // 2)  # ceil((b - s) / 2)
    points = int(np.sum(hi - lo + 1)) - 1
    assert points % 6 == 0
    return points // 6


def li(x: float) -> float:
    """Offset logarithmic integral, int_2^x dt / log t."""
    val, _ = integrate.quad(lambda t: 1.0 / math.log(t), 2.0, x, epsabs=1e-8, epsrel=1e-12, limit=200)
    return val


def prime_ideal_reciprocal_sum(lo: float, hi: float, power: float = 1.0, table: Optional[PrimeTable] = None) -> float:
    """Sum of N(p)^-power over primary prime ideals with lo < N(p) <= hi."""
    table = table or prime_table(int(hi))
    i0 = table.count_upto(lo)
    i1 = table.count_upto(hi)
    return float(np.sum(table.norms[i0:i1].astype(float) ** -power))


# Ideals coprime to 3 ---------------------------------------------------------

class IdealTable:
    """All primary elements b of norm <= limit (one per ideal coprime to 3),
    sorted by norm, with a sparse exponent matrix over the prime table so that
    completely multiplicative functions can be evaluated by a matrix product."""

    def __init__(self, limit: int):
        table = prime_table(limit)
        self.limit = limit
        self.prime_count = table.count_upto(limit)
        norms = table.norms[: self.prime_count].tolist()
        rows: list[int] = []
        cols: list[int] = []
        vals: list[int] = []
        out_norms: list[int] = [1]
        out_a: list[int] = [1]
        out_b: list[int] = [0]
        elems = [q.element for q in table.primes[: self.prime_count]]

        # depth-first over nondecreasing prime indices
        stack = [(0, 1, ONE, ())]
        while stack:
            start, nm, z, fac = stack.pop()
            for i in range(start, self.prime_count):
                m = nm * norms[i]
                if m > limit:
                    break
                w = z * elems[i]
                f2 = fac + (i,)
                row = len(out_norms)
                out_norms.append(m)
                out_a.append(w.a)
                out_b.append(w.b)
                for j in set(f2):
                    rows.append(row)
                    cols.append(j)
                    vals.append(f2.count(j))
                stack.append((i, m, w, f2))
        order = np.argsort(np.array(out_norms), kind="stable")
        inv = np.empty_like(order)
        inv[order] = np.arange(len(order))
        self.norms = np.array(out_norms, dtype=np.int64)[order]
        self.a = np.array(out_a, dtype=np.int64)[order]
        self.b = np.array(out_b, dtype=np.int64)[order]
        self.exponents = sparse.csr_matrix(
            (np.array(vals, dtype=np.int64), (inv[np.array(rows, dtype=np.int64)], np.array(cols, dtype=np.int64))),
            shape=(len(out_norms), max(self.prime_count, 1)),
        )

    def count_upto(self, x: float) -> int:
        return int(np.searchsorted(self.norms, math.floor(x), side="right"))

    def multiplicative(self, prime_exps: np.ndarray, upto: Optional[int] = None) -> np.ndarray:
        """Cubic-character exponents on the ideals from exponents on the primes
        (-1 marks a zero value)."""
        k = self.count_upto(upto) if upto is not None else len(self.norms)
        E = self.exponents[:k]
        pe = np.asarray(prime_exps[: self.prime_count], dtype=np.int64)
        zero = pe < 0
        out = np.asarray(E @ np.where(zero, 0, pe)).ravel() % 3
        if zero.any():
            hit = np.asarray(E @ zero.astype(np.int64)).ravel() > 0
            out[hit] = -1
        return out


@lru_cache(maxsize=4)
def _ideal_table(limit: int) -> IdealTable:
    return IdealTable(limit)


def ideal_table(limit: int) -> IdealTable:
    lim = 1 << max(10, math.ceil(math.log2(max(limit, 2))))
    return _ideal_table(lim)
