"""Central values L(1/2, chi_c) from the smoothed approximate functional equation.

Every ideal is (1 - w)^r2 (b) with b primary, and chi_c(1 - w) = 1 on the
family, so both sums run over all ideals with weight N^-1/2 V(N / scale):

    L = sum chi(a) N(a)^-1/2 V(N(a)/Y')  +  W/sqrt(n) sum conj chi(a) N(a)^-1/2 V(N(a) Y'/(3n))

with Y' = Y sqrt(3n) and V(y) = Gamma(1/2, 2 pi y)/Gamma(1/2) = erfc(sqrt(2 pi y)).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import mpmath
import numpy as np
from scipy import optimize, special

from .eisenstein import ROOTS_OF_UNITY
from .family import FamilyElement
from .gauss import root_number
from .primes import ideal_table, prime_table

DEFAULT_TOL = 1e-8
IDEAL_DENSITY = math.pi / (3 * math.sqrt(3))


def weight_V(y):
    """V(y) = Gamma(1/2, 2 pi y) / Gamma(1/2)."""
    y = np.asarray(y, dtype=float)
    if np.any(y <= 0):
        raise ValueError("V(y) is defined for y > 0")
    out = special.erfc(np.sqrt(2 * np.pi * y))
    return float(out) if out.ndim == 0 else out


def weight_V_contour(y: float, c: float = 2.0, dps: int = 30) -> float:
    """The inverse Mellin integral (1/2 pi i) int_(c) (2 pi y)^-u Gamma(1/2+u)/Gamma(1/2) du/u."""
    with mpmath.workdps(dps):
        y = mpmath.mpf(y)
        g = mpmath.gamma(mpmath.mpf(1) / 2)

        def integrand(t):
            u = mpmath.mpc(c, t)
            return mpmath.re((2 * mpmath.pi * y) ** (-u) * mpmath.gamma(mpmath.mpf(1) / 2 + u) / g / u)

        val = mpmath.quad(integrand, [-mpmath.inf, -20, 0, 20, mpmath.inf]) / (2 * mpmath.pi)
        return float(val)


def ideal_count_bound(t: float) -> float:
    """Upper bound for the number of ideals of norm <= t: lattice points in the
    disc |z| <= sqrt(t) lie in the disc of radius sqrt(t) + sqrt(3) cell-wise."""
    return IDEAL_DENSITY * (math.sqrt(t) + math.sqrt(3)) ** 2


def weighted_tail_bound(B: float, scale: float) -> float:
    """Bound for the sum over ideals of norm > B of N^-1/2 V(N/scale), by
    dyadic blocks (B 2^k, B 2^(k+1)] each bounded by count * largest weight."""
    total = 0.0
    t = float(B)
    while True:
        w = weight_V(t / scale) / math.sqrt(t)
        term = ideal_count_bound(2 * t) * w
        total += term
        if term < 1e-30 or w == 0.0:
            return total
        t *= 2


def truncation_point(scale: float, tol: float) -> int:
    """Smallest integer B (up to a factor 1 + 1/64) whose tail bound is <= tol."""
    hi = max(4.0, scale)
    while weighted_tail_bound(hi, scale) > tol:
        hi *= 2
    lo = hi / 2
    while hi - lo > max(1.0, hi / 64):
        mid = (lo + hi) / 2
        if weighted_tail_bound(mid, scale) > tol:
            lo = mid
        else:
            hi = mid
    return int(math.ceil(hi))


@dataclass
class LValueRecord:
    c: FamilyElement
    value: complex
    Y: float
    principal_terms: int
    dual_terms: int
    truncation_error_bound: float
    root_number: complex = field(default=0j)


def _ideal_sums(exps: np.ndarray, norms: np.ndarray, B: int, scale: float, conjugate: bool) -> tuple[complex, int]:
    """sum over ideals (1-w)^r2 b with norm <= B of chi(b) N^-1/2 V(N/scale)."""
    vals = ROOTS_OF_UNITY[exps]
    if conjugate:
        vals = vals.conj()
    total = 0j
    terms = 0
    p3 = 1
    while p3 <= B:
        k = int(np.searchsorted(norms, B // p3, side="right"))
        if k == 0:
            break
        m = (norms[:k] * p3).astype(float)
        total += np.sum(vals[:k] * weight_V(m / scale) / np.sqrt(m))
        terms += k
        p3 *= 3
    return complex(total), terms


def character_on_ideals(c: FamilyElement, B: int):
    """(exponents, norms) of chi_c on the primary elements of norm <= B."""
    itab = ideal_table(B)
    ptab = prime_table(itab.limit)
    k = itab.prime_count
    pexp = c.chi_array(ptab.a[:k], ptab.b[:k])
    n_ideals = itab.count_upto(B)
    exps = itab.multiplicative(pexp, upto=B)
    return exps, itab.norms[:n_ideals]


def central_value(c: FamilyElement, Y: float = 1.0, tol: float = DEFAULT_TOL, W: complex | None = None) -> LValueRecord:
    n = c.conductor_norm
    Yp = Y * math.sqrt(3 * n)
    s1, s2 = Yp, 3 * n / Yp
    B1 = truncation_point(s1, tol / 4)
    B2 = truncation_point(s2, tol / 4)
    exps, norms = character_on_ideals(c, max(B1, B2))
    principal, t1 = _ideal_sums(exps, norms, B1, s1, conjugate=False)
    dual, t2 = _ideal_sums(exps, norms, B2, s2, conjugate=True)
    W = root_number(c) if W is None else W
    value = principal + W / math.sqrt(n) * dual
    bound = weighted_tail_bound(B1, s1) + weighted_tail_bound(B2, s2) * abs(W) / math.sqrt(n)
    return LValueRecord(c, value, Y, t1, t2, bound, W)


def principal_sum(c: FamilyElement, scale: float, tol: float = DEFAULT_TOL) -> complex:
    """The first AFE sum alone at an arbitrary scale (no dual term)."""
    B = truncation_point(scale, tol)
    exps, norms = character_on_ideals(c, B)
    return _ideal_sums(exps, norms, B, scale, conjugate=False)[0]


# GRH-conditional upper bound for log |L(1/2)| ------------------------------------

def lambda0() -> float:
    """The root of e^-l = l + l^2/2."""
    return optimize.brentq(lambda l: math.exp(-l) - l - l * l / 2, 0.0, 1.0, xtol=1e-15)


def prime_power_sum(c: FamilyElement, x: float, sigma: float, lo: float = 1.0) -> float:
    """Re sum over prime powers a with lo < N(a) <= x of
    Lambda(a) chi(a) / (N(a)^sigma log N(a)) * log(x/N(a))/log x."""
    lx = math.log(x)
    total = 0.0
    # ramified prime (1 - w), chi = 1
    m, N = 1, 3.0
    while N <= x:
        if N > lo:
            total += math.log(x / N) / lx / (m * N**sigma)
        m += 1
        N *= 3
    table = prime_table(int(x))
    k = table.count_upto(x)
    if k == 0:
        return total
    norms = table.norms[:k].astype(float)
    e = c.chi_array(table.a[:k], table.b[:k])
    m = 1
    while True:
        Nm = norms**m
        sel = Nm <= x
        if not sel.any():
            break
        sel &= Nm > lo
        em = np.where(e < 0, -1, (e * m) % 3)
        vals = ROOTS_OF_UNITY[em].real
        total += float(np.sum((vals * np.log(x / Nm) / lx / (m * Nm**sigma))[sel]))
        m += 1
    return total


def grh_log_bound(c: FamilyElement, x: float, lam: float = 1.0) -> float:
    lx = math.log(x)
    sigma = 0.5 + lam / lx
    n = c.conductor_norm
    return (
        prime_power_sum(c, x, sigma)
        + (1 + lam) / (2 * lx) * math.log(3 * n * sigma**2 / (4 * math.pi**2))
        + 2 * math.exp(-lam) / (math.sqrt(x) * lx**2 * sigma**2)
    )
