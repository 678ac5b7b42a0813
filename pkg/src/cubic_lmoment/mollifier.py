"""Mollifier machinery: interval scheme, truncated exponentials, prime sums
F_r(c, j), the mollifier M(c, kappa) and the per-character objects D, S, T.

Interval membership uses integer norm bounds: N is in (X^t0, X^t1] exactly
when floor(X^t0) < N <= floor(X^t1).
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import asdict, dataclass, field
from functools import cached_property
from typing import Optional, Sequence

import mpmath
import numpy as np

from .eisenstein import ONE, ROOTS_OF_UNITY, EisensteinInt
from .family import FamilyElement
from .lfunction import grh_log_bound
from .primes import prime_table, rational_primes


@dataclass(frozen=True)
class MollifierConfig:
    k: float
    kappa: float
    alpha: float
    beta: float
    Theta: float
    X: int
    a: float = 1.0299
    eps: float = 1e-5
    D: int = 1

    @classmethod
    def desk_mode(cls, X: int, k: float = 1.0, kappa: float = 1.0) -> "MollifierConfig":
        return cls(k=k, kappa=kappa, alpha=1.2, beta=0.75, Theta=0.5, X=X)

    @classmethod
    def proof_parameters(cls, X: int = 10**6) -> "MollifierConfig":
        return cls(k=2.0, kappa=1.0, alpha=7.0, beta=0.916, Theta=5.8025935515e-44, X=X, a=1.0299, eps=1e-5, D=1)

    @classmethod
    def from_json(cls, text: str) -> "MollifierConfig":
        return cls(**json.loads(text))

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    # derived -------------------------------------------------------------
    @cached_property
    def k0(self) -> float:
        return max(3.0, 4 * self.k * self.k)

    @cached_property
    def log_X(self) -> float:
        return math.log(self.X)

    @cached_property
    def log2_X(self) -> float:
        return math.log(self.log_X)

    @cached_property
    def J(self) -> int:
        return math.floor(math.log(self.Theta * self.log2_X**self.alpha))

    def theta(self, j: int) -> float:
        if j == -1:
            return math.log(self.k0) / self.log_X
        return math.exp(j) / self.log2_X**self.alpha

    @cached_property
    def thetas(self) -> list[float]:
        """theta_{-1}, ..., theta_J."""
        return [self.theta(j) for j in range(-1, self.J + 1)]

    def ell(self, j: int) -> int:
        return 2 * math.floor(self.theta(j) ** -self.beta)

    @cached_property
    def ells(self) -> list[int]:
        return [self.ell(j) for j in range(self.J + 1)]

    def norm_bound(self, j: int) -> int:
        """floor(X^theta_j), with theta_{-1} giving k0 exactly."""
        if j == -1:
            return math.floor(self.k0)
        return _floor_power(self.log_X * self.theta(j))

    def interval(self, j: int) -> tuple[int, int]:
        """Integer norm range (lo, hi] of I_j."""
        return self.norm_bound(j - 1), self.norm_bound(j)

    @cached_property
    def intervals(self) -> list[tuple[int, int]]:
        return [self.interval(j) for j in range(self.J + 1)]

    def s(self, j: int) -> int:
        """The even exponents s_j = 2 floor(1 / (4 a theta_j))."""
        return 2 * math.floor(1 / (4 * self.a * self.theta(j)))

    # validation ----------------------------------------------------------
    def validate(self) -> dict[str, bool]:
        k, kk, b, T, a, eps = self.k, self.k * self.kappa, self.beta, self.Theta, self.a, self.eps
        E = math.exp(1 - b)
        p = 1 / (1 - b)
        ratio = (1 - 2 * eps) / (1 + 2 * eps)
        br = b - 2 / 3 - 2 * a * (8 * kk + 1) * T ** (1 - b) / 3
        log3 = math.log(self.log2_X) if self.log2_X > 0 else -math.inf
        flags = {
            "alphabetacond": self.alpha * b > (2 * kk + 3) / 2,
            "Xcond": self.log2_X > 0 and self.log2_X ** (self.alpha * b) > 2 and self.alpha * log3 >= 1 - math.log(T),
            "eta0bound": T <= (ratio / (8 * kk + 12 + 4 * kk * E / (E - 1))) ** p,
            "etaJcond": T <= ((E - 1) * (1 - 2 * eps) / (2 * E * (2 * kk + 1) * (1 + 2 * eps))) ** p,
            "thetacond1": T <= (1 / (8 * a * (kk + 1))) ** p,
            "etajcond": _pos_power((E - 1) / (2 * (2 * kk + 1) * E) * (ratio - 1 / a), p, T, strict=False),
            "betacond": br > 0,
            "ThetaBetacond": b > 2 / 3 and _pos_power((3 * b - 2) / (2 * a * (8 * kk + 3)), p, T, strict=True),
            "thetacond4": b > 2 / 3 and T < ((2 / (math.e**2 * k)) * (3 * a * a / 5) ** (1 / 3)) ** (1 / (b - 2 / 3)),
            "thetacond5": T < 1 / (8 * k * self.D + 4 * math.log(16 * math.sqrt(5))),
            "ThetaCond1stmoment": _pos_power(
                (E - 1) / (2 * E) * min((2 - 132 * eps) / (264 * eps + 97), (3 - 156 * eps) / (312 * eps + 149)),
                p, T, strict=False),
        }
        return flags

    def proof_conditions_hold(self) -> bool:
        flags = self.validate()
        flags.pop("Xcond")
        return all(flags.values())


def _pos_power(base: float, p: float, T: float, strict: bool) -> bool:
    if base <= 0:
        return False
    bound = base**p
    return T < bound if strict else T <= bound


def _floor_power(log_value: float) -> int:
    v = math.exp(log_value)
    r = round(v)
    if abs(v - r) < 1e-9 * max(1.0, v):
        return int(r)
    return math.floor(v)


# Truncated exponential --------------------------------------------------------

def truncated_exp(x, ell: int):
    """E_ell(x) = sum_{n <= ell} x^n / n!, Horner from the top."""
    s = 1.0
    for n in range(ell, 0, -1):
        s = 1.0 + x * s / n
    return s


def exp_bound_margins(x: float, ell: int, dps: int = 60) -> tuple[float, float]:
    """(E_2l(x) - e^x, (1 + e^-2l) E_2l(x) - e^x) at high precision.

    The gap near x = 0 is |x|^(2l+1)/(2l+1)!, far below double precision, so
    both are evaluated in mpmath.  At x = 0 the first margin is exactly 0."""
    with mpmath.workdps(dps):
        xm = mpmath.mpf(x)
        E = truncated_exp(xm, 2 * ell)
        ex = mpmath.exp(xm)
        return float(E - ex), float((1 + mpmath.exp(-2 * ell)) * E - ex)


# Arithmetic weights -----------------------------------------------------------

def big_omega(exponents: Sequence[int]) -> int:
    return int(sum(exponents))


def liouville(exponents: Sequence[int]) -> int:
    return -1 if big_omega(exponents) % 2 else 1


def nu(exponents: Sequence[int]) -> float:
    out = 1.0
    for e in exponents:
        out /= math.factorial(e)
    return out


def nu_n(exponents: Sequence[int], n: int, ell: Optional[int] = None) -> float:
    """n-fold convolution of nu, optionally restricted to factors with Omega <= ell,
    by brute force over all ways to split each exponent among the n factors."""
    splits = [list(_compositions(e, n)) for e in exponents]
    total = 0.0
    for choice in itertools.product(*splits):
        # choice[i][t] = exponent of prime i in factor t
        if ell is not None and any(sum(col[t] for col in choice) > ell for t in range(n)):
            continue
        term = 1.0
        for col in choice:
            for e in col:
                term /= math.factorial(e)
        total += term
    return total


def nu_n_formula(exponents: Sequence[int], n: int) -> float:
    out = 1.0
    for e in exponents:
        out *= n**e / math.factorial(e)
    return out


def _compositions(m: int, n: int):
    if n == 1:
        yield (m,)
        return
    for first in range(m + 1):
        for rest in _compositions(m - first, n - 1):
            yield (first,) + rest


class ArithmeticWeights:
    """lambda, nu, nu_n, Omega on exponent vectors; f(a, j) on norms."""

    omega = staticmethod(big_omega)
    liouville = staticmethod(liouville)
    nu = staticmethod(nu)
    nu_n = staticmethod(nu_n)

    @staticmethod
    def f(norms: Sequence[int], exponents: Sequence[int], j: int, cfg: "MollifierConfig") -> float:
        """f(a, j) for a = prod p^e, extended completely multiplicatively."""
        out = 1.0
        for N, e in zip(norms, exponents):
            out *= f_weight(N, j, cfg) ** e
        return out


# Prime sums ----------------------------------------------------------------------

def f_weight(p_norm, j: int, cfg: MollifierConfig):
    """f(p, j) = N^(-1/(theta_j log X)) (1 - log N / (theta_j log X))."""
    L = cfg.theta(j) * cfg.log_X
    N = np.asarray(p_norm, dtype=float)
    out = N ** (-1.0 / L) * (1.0 - np.log(N) / L)
    return float(out) if out.ndim == 0 else out


def _prime_slice(lo: int, hi: int):
    table = prime_table(max(hi, 2))
    i0, i1 = table.count_upto(lo), table.count_upto(hi)
    return table.a[i0:i1], table.b[i0:i1], table.norms[i0:i1], table.primes[i0:i1]


def _chi_values(c: FamilyElement, a, b, power: int = 1) -> np.ndarray:
    e = c.chi_array(a, b)
    e = np.where(e < 0, -1, (e * power) % 3)
    return ROOTS_OF_UNITY[e]


def F_r(c: FamilyElement, r: int, j: int, cfg: MollifierConfig) -> complex:
    if r < 0 or r > cfg.J:
        return 0j
    lo, hi = cfg.interval(r)
    if hi <= lo:
        return 0j
    a, b, N, _ = _prime_slice(lo, hi)
    if len(N) == 0:
        return 0j
    Nf = N.astype(float)
    return complex(np.sum(_chi_values(c, a, b) * f_weight(Nf, j, cfg) / np.sqrt(Nf)))


def mollifier_M(c: FamilyElement, cfg: MollifierConfig, kappa: Optional[float] = None) -> complex:
    kappa = cfg.kappa if kappa is None else kappa
    M = 1.0 + 0j
    for j in range(cfg.J + 1):
        M *= truncated_exp(-F_r(c, j, cfg.J, cfg) / kappa, cfg.ell(j))
    return complex(M)


def expansion_from_values(z: Sequence[complex], ell: int, kappa: float = 1.0) -> complex:
    """sum over exponent vectors e with |e| <= ell of prod (-z_p/kappa)^e_p / e_p!,
    i.e. the Dirichlet-coefficient form of E_ell(-(sum z_p)/kappa)."""
    total = 0j
    for exps in _bounded_vectors(len(z), ell):
        term = 1.0 + 0j
        for zp, e in zip(z, exps):
            if e:
                term *= (-zp / kappa) ** e / math.factorial(e)
        total += term
    return total


def _bounded_vectors(m: int, ell: int):
    if m == 0:
        yield ()
        return
    for e in range(ell + 1):
        for rest in _bounded_vectors(m - 1, ell - e):
            yield (e,) + rest


def mollifier_factor_expansion(c: FamilyElement, j: int, cfg: MollifierConfig, kappa: Optional[float] = None) -> complex:
    """M_j as the coefficient sum over ideals a built from primes of I_j with
    Omega(a) <= ell_j: chi_c(a) lambda(a) f(a, J) nu(a) N(a)^-1/2 kappa^-Omega(a),
    with chi_c evaluated on the product element."""
    kappa = cfg.kappa if kappa is None else kappa
    lo, hi = cfg.interval(j)
    _, _, N, primes = _prime_slice(lo, hi)
    ell = cfg.ell(j)
    f = [f_weight(float(n), cfg.J, cfg) for n in N]
    total = 0j
    for exps in _bounded_vectors(len(primes), ell):
        elem = ONE
        fa = 1.0
        Na = 1
        for pr, fp, e in zip(primes, f, exps):
            if e:
                elem = elem * pr.element**e
                fa *= fp**e
                Na *= pr.norm**e
        chi = c.chi(elem)
        if chi is None:
            continue
        om = sum(exps)
        total += ROOTS_OF_UNITY[chi] * liouville(exps) * fa * nu(exps) / math.sqrt(Na) / kappa**om
    return complex(total)


# D, S, T diagnostics -------------------------------------------------------------

def square_prime_sum(c: FamilyElement, j: int, cfg: MollifierConfig) -> complex:
    """K(c, j): sum over k0 < N(p) <= X^(theta_j/2) of chi_c(p^2) B_j(p) / N(p)."""
    L = cfg.theta(j) * cfg.log_X
    hi = _floor_power(L / 2)
    lo = math.floor(cfg.k0)
    if hi <= lo:
        return 0j
    a, b, N, _ = _prime_slice(lo, hi)
    if len(N) == 0:
        return 0j
    Nf = N.astype(float)
    B = 1.0 / (2 * Nf ** (2.0 / L)) * (1.0 - 2.0 * np.log(Nf) / L)
    return complex(np.sum(_chi_values(c, a, b, power=2) * B / Nf))


@dataclass
class DSDiagnostics:
    D: float
    S: float
    T_membership: list[bool] = field(default_factory=list)


def T_membership(c: FamilyElement, cfg: MollifierConfig, k: Optional[float] = None) -> list[bool]:
    k = cfg.k if k is None else k
    out = []
    for r in range(cfg.J + 1):
        worst = max(F_r(c, r, jj, cfg).real for jj in range(r, cfg.J + 1))
        out.append(worst <= cfg.ell(r) / (k * math.e**2))
    return out


def diagnostics_DS(c: FamilyElement, j: int, cfg: MollifierConfig, k: Optional[float] = None) -> DSDiagnostics:
    k = cfg.k if k is None else k
    D = 1.0
    for r in range(j + 1):
        ell = cfg.ell(r)
        D *= (1 + math.exp(-ell)) * truncated_exp(k * F_r(c, r, j, cfg).real, ell)
    S = math.exp(k * square_prime_sum(c, j, cfg).real)
    return DSDiagnostics(D, S, T_membership(c, cfg, k))


def log_bound_remainder(c: FamilyElement, j: int, cfg: MollifierConfig) -> float:
    """The part of the GRH log bound at x = X^theta_j not captured by the prime
    sums F_0..F_j and the square sum: small primes, higher powers, the
    conductor term and the last term.  Its exponential replaces the
    exp(1/theta_j + O(k0)) factor."""
    x = math.exp(cfg.theta(j) * cfg.log_X)
    total = grh_log_bound(c, x, 1.0)
    captured = sum(F_r(c, r, j, cfg).real for r in range(j + 1)) + square_prime_sum(c, j, cfg).real
    return total - captured


@dataclass
class InT0Check:
    in_T0: bool
    lhs: float
    rhs: float
    implied_constants: list[float]

    @property
    def holds(self) -> bool:
        return (not self.in_T0) or self.lhs <= self.rhs


def int0_check(c: FamilyElement, L_abs: float, cfg: MollifierConfig, k: Optional[float] = None) -> InT0Check:
    """Both sides of the bound for |L(1/2, chi_c)|^k valid for c in T_0, with the
    exp(k/theta_j + O(k k0)) factors instantiated as exp(k R_j(c)) and
    s_{j+1} = 2 floor(1/(4 a theta_{j+1}))."""
    k = cfg.k if k is None else k
    J = cfg.J
    T = T_membership(c, cfg, k)
    rem = [log_bound_remainder(c, j, cfg) for j in range(J + 1)]
    rhs = 0.0
    for j in range(J):
        ds = diagnostics_DS(c, j, cfg, k)
        s_next = cfg.s(j + 1)
        for u in range(j + 1, J + 1):
            t = math.e**2 * k * F_r(c, j + 1, u, cfg).real / cfg.ell(j + 1)
            rhs += math.exp(k * rem[j]) * ds.D * ds.S * t**s_next
    ds = diagnostics_DS(c, J, cfg, k)
    rhs += math.exp(k * rem[J]) * ds.D * ds.S
    implied = [(rem[j] - 1 / cfg.theta(j)) / cfg.k0 for j in range(J + 1)]
    return InT0Check(bool(T and T[0]), L_abs**k, rhs, implied)


# Prime-sum estimates ----------------------------------------------------------

def _tail_three_halves(B: int) -> float:
    # at most 2 prime ideals per norm value: 2 int_B^inf t^-3/2 dt
    return 4.0 / math.sqrt(B)


def prime_sum_estimate_1(k0: float, limit: int = 10**6) -> tuple[float, float]:
    """(partial sum over k0 < N(p) <= limit of N(p)^-3/2, tail bound)."""
    table = prime_table(limit)
    i0, i1 = table.count_upto(k0), table.count_upto(limit)
    s = float(np.sum(table.norms[i0:i1].astype(float) ** -1.5))
    return s, _tail_three_halves(limit)


def prime_sum_estimate_2(cfg: MollifierConfig, r: int, sigma: float) -> tuple[float, float]:
    lo, hi = cfg.interval(r)
    _, _, N, _ = _prime_slice(lo, hi)
    lhs = float(np.sum(N.astype(float) ** -sigma))
    rhs = 2.0 / ((sigma - 1) * max(lo, 1) ** (sigma - 1))
    return lhs, rhs


def prime_sum_estimate_3(cfg: MollifierConfig) -> tuple[float, float]:
    lo, hi = cfg.interval(0)
    _, _, N, _ = _prime_slice(lo, hi)
    lhs = float(np.sum(1.0 / N.astype(float)))
    rhs = 2 * math.log(cfg.theta(0) * cfg.log_X)
    return lhs, rhs


def prime_sum_estimate_4(cfg: MollifierConfig, j: int) -> tuple[float, int, float]:
    """(sum of 1/N(p) over X^theta_j < N(p) <= X^theta_J, J - j, scaled error
    |sum - (J - j)| * log X^theta_j)."""
    lo, hi = cfg.norm_bound(j), cfg.norm_bound(cfg.J)
    _, _, N, _ = _prime_slice(lo, hi)
    s = float(np.sum(1.0 / N.astype(float)))
    return s, cfg.J - j, abs(s - (cfg.J - j)) * cfg.theta(j) * cfg.log_X


def prime_sum_estimate_5(cfg: MollifierConfig, j: int) -> tuple[float, float]:
    lo, hi = math.floor(cfg.k0), cfg.norm_bound(j)
    _, _, N, _ = _prime_slice(lo, hi)
    Nf = N.astype(float)
    lhs = float(np.sum(np.log(Nf) ** 2 / Nf))
    return lhs, 2 * (cfg.theta(j) * cfg.log_X) ** 2


def constant_D_values(convention: str, n_max: int, k0: float = 16) -> list[float]:
    """n * sum of 1/p over rational primes p in I_n, for n = 1..n_max.

    "x8": I_n = (8 5^(n-1), 8 5^n];  "k0": I_n = (k0 5^(n-1), k0 5^n]."""
    base = 8 if convention == "x8" else k0
    hi_all = int(base * 5**n_max)
    ps = rational_primes(hi_all).astype(float)
    out = []
    for n in range(1, n_max + 1):
        lo, hi = base * 5 ** (n - 1), base * 5**n
        sel = (ps > lo) & (ps <= hi)
        out.append(n * float(np.sum(1.0 / ps[sel])))
    return out
