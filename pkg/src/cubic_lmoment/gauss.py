"""Cubic Gauss sums g(r, n) = sum over alpha mod n of chi_n(alpha) e(tr(r alpha / n)).

``gauss_direct`` sums over a residue system; ``gauss_fast`` splits n into
prime powers with twisted multiplicativity and evaluates each prime power in
closed form from the prime-level sum g(1, pi).
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import numpy as np

from .eisenstein import (
    ROOTS_OF_UNITY,
    EisensteinInt,
    SQRT_MINUS3,
    as_primary,
    cubic_symbol_prime,
    cubic_symbol_prime_array,
    reduce_mod,
    residue_arrays,
)
from .errors import DirectSumTooLarge
from .primes import factor

DIRECT_CAP = 10**5


@dataclass(frozen=True)
class GaussSumValue:
    value: complex
    modulus_norm: int
    method: str  # "direct" or "recurrence"


def character_exponents(xs: np.ndarray, ys: np.ndarray, prime_powers) -> np.ndarray:
    """Exponents of prod chi_pi^v on the points x + y w (-1 marks zero)."""
    total = np.zeros(np.shape(xs), dtype=np.int64)
    zero = np.zeros(np.shape(xs), dtype=bool)
    for pi, v in prime_powers:
        e = cubic_symbol_prime_array(xs, ys, pi)
        zero |= e < 0
        total += v * np.where(e < 0, 0, e)
    total %= 3
    total[zero] = -1
    return total


def _trace_phases(xs, ys, mult: EisensteinInt, denom: int) -> np.ndarray:
    """e(tr((x + y w) * mult) / denom), the trace numerator reduced mod denom exactly."""
    c, d = mult.a, mult.b
    X = c * xs - d * ys
    Y = c * ys + d * xs - d * ys
    k = np.mod(2 * X - Y, denom)
    return np.exp(2j * np.pi * (k / denom))


def gauss_direct(r, n, cap: int = DIRECT_CAP) -> GaussSumValue:
    r = EisensteinInt.coerce(r)
    n = as_primary(n)
    N = n.norm()
    if N > cap:
        raise DirectSumTooLarge(f"N({n}) = {N} exceeds the direct-summation cap {cap}")
    xs, ys = residue_arrays(n)
    pp = [(pr.element, e) for pr, e in factor(n).primes]
    chi = character_exponents(xs, ys, pp)
    # tr(r alpha / n) = tr(r alpha conj(n)) / N(n)
    mult = reduce_mod(r, n) * n.conj()
    val = np.sum(ROOTS_OF_UNITY[chi] * _trace_phases(xs, ys, mult, N))
    return GaussSumValue(complex(val), N, "direct")


_PRELOADED: dict[EisensteinInt, complex] = {}


@lru_cache(maxsize=None)
def gauss_prime(pi: EisensteinInt) -> complex:
    """g(1, pi) for a primary prime, by direct summation (or a loaded cache)."""
    if pi in _PRELOADED:
        return _PRELOADED[pi]
    return gauss_direct(1, pi, cap=max(DIRECT_CAP, pi.norm())).value


def _prime_power_sum(r: EisensteinInt, pi: EisensteinInt, k: int) -> complex:
    Np = pi.norm()
    j = 0
    if r:
        while j < k and pi.divides(r):
            r = r.exact_div(pi)
            j += 1
    else:
        j = k
    if j >= k:
        # r = 0 mod pi^k: the sum of chi over all residues
        return float(Np**k - Np ** (k - 1)) if k % 3 == 0 else 0.0
    if k != j + 1:
        return 0.0
    if k % 3 == 0:
        base = -1.0
    elif k % 3 == 1:
        base = gauss_prime(pi)
    else:
        base = gauss_prime(pi).conjugate()
    s = cubic_symbol_prime(r, pi, check=False)
    # conj(chi_{pi^k}(r)) = w^(-k s)
    return Np**j * base * ROOTS_OF_UNITY[(-k * s) % 3]


def gauss_fast(r, n) -> GaussSumValue:
    r = EisensteinInt.coerce(r)
    n = as_primary(n)
    value = 1.0 + 0j
    for pr, k in factor(n).primes:
        value *= _prime_power_sum(r, pr.element, k)
        if value == 0:
            break
        r = r * pr.element**k
    return GaussSumValue(complex(value), n.norm(), "recurrence")


def root_number(c) -> complex:
    """W(chi_c) = conj(g(1, c1)) g(1, c2)."""
    return gauss_fast(1, c.c1).value.conjugate() * gauss_fast(1, c.c2).value


def normalized_root_number(c) -> complex:
    return root_number(c) / c.conductor_norm**0.5


def root_number_direct(c) -> complex:
    """W(chi) as the sum over x mod q coprime to q of chi(x) e(tr(x / (q sqrt(-3))))."""
    q = as_primary(c.q)
    xs, ys = residue_arrays(q)
    pp = [(pr.element, e) for pr, e in factor(c.c2).primes]
    pp += [(pr.element, 2 * e) for pr, e in factor(c.c1).primes]
    chi = character_exponents(xs, ys, pp)
    m = q * SQRT_MINUS3
    vals = ROOTS_OF_UNITY[chi] * _trace_phases(xs, ys, m.conj(), m.norm())
    return complex(np.sum(vals))


# Cache -----------------------------------------------------------------------

CACHE_FORMAT = "cubic-gauss-sums"
CACHE_VERSION = 1


def write_gauss_cache(limit: int, path: Path) -> int:
    from .primes import sieve_primary_primes

    primes = sieve_primary_primes(limit)
    with open(path, "w") as fh:
        fh.write(json.dumps({"format": CACHE_FORMAT, "version": CACHE_VERSION, "limit": limit}) + "\n")
        for pr in primes:
            g = gauss_prime(pr.element)
            fh.write(json.dumps({"a": pr.element.a, "b": pr.element.b, "re": g.real, "im": g.imag}) + "\n")
    return len(primes)


def read_gauss_cache(path: Path) -> int:
    """Load prime-level sums into the in-memory cache; returns the count."""
    with open(path) as fh:
        header = json.loads(fh.readline())
        if header.get("format") != CACHE_FORMAT or header.get("version") != CACHE_VERSION:
            raise ValueError(f"{path}: unrecognized cache header {header}")
        n = 0
        for line in fh:
            rec = json.loads(line)
            _preload(EisensteinInt(rec["a"], rec["b"]), complex(rec["re"], rec["im"]))
            n += 1
    return n


def _preload(pi: EisensteinInt, g: complex) -> None:
    _PRELOADED[pi] = g
