"""First mollified moment, the Euler-product constants c0, c1, C_X, the
S1/S2/S3 split of the twisted first moment, non-vanishing counts and the
printed numerical constants of the non-vanishing argument."""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Optional

import mpmath
import numpy as np

from .eisenstein import ONE, ROOTS_OF_UNITY, EisensteinInt, as_primary, gcd
from .family import (
    FamilyElement,
    character_sum_over_family,
    enumerate_family,
    euler_F,
    local_factor_product,
    zeta_K,
)
from .gauss import root_number
from .lfunction import DEFAULT_TOL, _ideal_sums, central_value, character_on_ideals, truncation_point, weight_V
from .mollifier import MollifierConfig, f_weight, mollifier_M
from .primes import factor, ideal_table, prime_table

C0_PREFACTOR = 4 * math.pi**2 * math.sqrt(3) / (2187 * (math.sqrt(3) - 1))
PRODUCT_LIMIT = 10**6


# Euler-product constants ---------------------------------------------------------

def euler_constant_c0(tol: float = 1e-10) -> float:
    F, _ = euler_F(tol)
    return C0_PREFACTOR * F


def c0_truncated(limit: int) -> tuple[float, float]:
    """Plain truncation at ``limit``: (value, bound on |log(value/c0)|)."""
    val, tail = local_factor_product(limit)
    return C0_PREFACTOR * val, tail


@dataclass(frozen=True)
class ProductValue:
    value: float
    log_error: float


def _upper_factor_product(lo_exclusive: float, limit: int = PRODUCT_LIMIT) -> ProductValue:
    """prod over primary primes with N > lo of 1 + N/((N+2)(N^{3/2}-1)).

    Each factor equals (1 - 2x/(N+2))/(1 - x) with x = N^{-3/2}; the 1/(1 - x)
    part over all primes is zeta_K(3/2)(1 - 3^{-3/2}), the rest converges like
    N^{-5/2} and is truncated at ``limit``."""
    table = prime_table(limit)
    N = table.norms[: table.count_upto(limit)].astype(float)
    x = N**-1.5
    small = N <= lo_exclusive
    log_all = math.log(zeta_K(1.5) * (1 - 3**-1.5))
    log_geo = log_all + float(np.sum(np.log1p(-x[small])))
    corr = float(np.sum(np.log1p(-2 * x[~small] / (N[~small] + 2))))
    # |log(1 - 2x/(N+2))| <= 2.2 N^-5/2, at most 2 ideals per norm
    err = 2 * 2.2 * (2 / 3) * max(limit, lo_exclusive) ** -1.5
    return ProductValue(math.exp(log_geo + corr), err)


def b_terms(f: float, N: float, tol: float = 1e-16) -> list[float]:
    """b_m = f^m / (m! N^{(3/2) max(1, ceil(m/3))}) until terms drop below tol."""
    out = []
    m = 0
    while True:
        e = max(1, -(-m // 3))
        b = f**m / math.factorial(m) / N ** (1.5 * e)
        out.append(b)
        if b < tol or m > 200:
            return out
        m += 1


def alternating_b_sum(f: float, N: float, tol: float = 1e-16) -> float:
    b = b_terms(f, N, tol)
    return math.fsum((-1) ** m * v for m, v in enumerate(b))


@dataclass(frozen=True)
class EulerConstants:
    c0: float
    c1: float
    CX: float
    c1_printed: float
    mid_factors: int


def euler_constants(cfg: MollifierConfig, tol: float = 1e-12) -> EulerConstants:
    """c0, C_X and the upper constant c1.

    C_X uses the ranges k0 < N < X^theta_J (alternating b-series factor) and
    N >= X^theta_J.  Its mid-range factor is
        1 + N/(N+2) * 1/(1 - N^{-3/2}) * sum (-1)^m b_m,
    which is what the ideal-sum rearrangement produces; since b_0 = N^{-3/2}
    it is below 1 + N/((N+2)(N^{3/2}-1)).  Hence c1 takes that bound over all
    N > k0.  ``c1_printed`` keeps the product over N >= X^theta_J only, which
    lies below C_X whenever the mid range holds a prime."""
    c0 = euler_constant_c0(tol)
    if cfg.J < 0:
        full = _upper_factor_product(0.0).value
        return EulerConstants(c0, c0 * full, c0 * full, c0 * full, 0)
    x_top = math.exp(cfg.theta(cfg.J) * cfg.log_X)
    k0 = cfg.k0
    upper = _upper_factor_product(math.ceil(x_top) - 1).value
    table = prime_table(max(int(x_top) + 1, 2))
    N = table.norms[: table.count_upto(x_top)]
    mid = [float(n) for n in N if k0 < n < x_top]
    log_mid = 0.0
    for n in mid:
        s = alternating_b_sum(f_weight(n, cfg.J, cfg), n, tol)
        log_mid += math.log1p(n / (n + 2) / (1 - n**-1.5) * s)
    log_mid_upper = sum(math.log1p(n / ((n + 2) * (n**1.5 - 1))) for n in mid)
    CX = c0 * upper * math.exp(log_mid)
    c1 = c0 * upper * math.exp(log_mid_upper)
    return EulerConstants(c0, c1, CX, c0 * upper, len(mid))


def _with_X(X: int, cfg: Optional[MollifierConfig]) -> MollifierConfig:
    return MollifierConfig.desk_mode(X) if cfg is None else replace(cfg, X=X)


def euler_constant_c1(X: int, cfg: Optional[MollifierConfig] = None, tol: float = 1e-12) -> float:
    return euler_constants(_with_X(X, cfg), tol).c1


def euler_constant_CX(X: int, cfg: Optional[MollifierConfig] = None, tol: float = 1e-12) -> float:
    return euler_constants(_with_X(X, cfg), tol).CX


# First mollified moment ----------------------------------------------------------

@dataclass
class CharacterRecord:
    c: FamilyElement
    L: complex
    M: complex
    err_bound: float


@dataclass
class MomentReport:
    X: int
    family_size: int
    moment_value: complex
    main_term_prediction: float
    c0: float
    c1: float
    CX: float
    nonvanishing_count: int
    threshold: float
    second_moment: float = 0.0
    records: list[CharacterRecord] = field(default_factory=list, repr=False)

    @property
    def ratio(self) -> float:
        return self.moment_value.real / self.main_term_prediction if self.main_term_prediction else math.nan

    def to_dict(self) -> dict:
        return {
            "X": self.X,
            "family_size": self.family_size,
            "moment_re": self.moment_value.real,
            "moment_im": self.moment_value.imag,
            "main_term_prediction": self.main_term_prediction,
            "ratio": self.ratio,
            "c0": self.c0,
            "c1": self.c1,
            "CX": self.CX,
            "nonvanishing_count": self.nonvanishing_count,
            "threshold": self.threshold,
            "second_moment_ratio": self.second_moment / self.family_size if self.family_size else 0.0,
        }


def _evaluate(args) -> list[tuple[complex, complex, float]]:
    chunk, cfg, tol = args
    out = []
    for c in chunk:
        rec = central_value(c, tol=tol)
        out.append((rec.value, mollifier_M(c, cfg), rec.truncation_error_bound))
    return out


def character_records(family: list[FamilyElement], cfg: MollifierConfig, tol: float = DEFAULT_TOL,
                      jobs: int = 1) -> list[CharacterRecord]:
    if jobs <= 1 or len(family) < 2 * jobs:
        vals = _evaluate((family, cfg, tol))
    else:
        size = -(-len(family) // (4 * jobs))
        chunks = [family[i:i + size] for i in range(0, len(family), size)]
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            vals = [v for part in ex.map(_evaluate, [(ch, cfg, tol) for ch in chunks]) for v in part]
    return [CharacterRecord(c, L, M, e) for c, (L, M, e) in zip(family, vals)]


def _exact_sum(zs) -> complex:
    # fsum is exactly rounded, so the result does not depend on order or chunking
    zs = list(zs)
    return complex(math.fsum(z.real for z in zs), math.fsum(z.imag for z in zs))


def nonzero_threshold(tol: float, err_bound: float) -> float:
    return max(10 * tol, 10 * err_bound)


def first_mollified_moment(X: int, cfg: Optional[MollifierConfig] = None, tol: float = DEFAULT_TOL,
                           jobs: int = 1, family: Optional[list[FamilyElement]] = None) -> MomentReport:
    cfg = MollifierConfig.desk_mode(X) if cfg is None else cfg
    fam = enumerate_family(X) if family is None else sorted(family, key=FamilyElement.key)
    return moment_from_records(X, cfg, tol, character_records(fam, cfg, tol, jobs))


def moment_from_records(X: int, cfg: MollifierConfig, tol: float, recs: list[CharacterRecord]) -> MomentReport:
    """Assemble the report from per-character values (fresh or cached)."""
    moment = _exact_sum(r.L * r.M for r in recs)
    second = math.fsum(abs(r.L * r.M) ** 2 for r in recs)
    consts = euler_constants(cfg)
    nonzero = sum(abs(r.L) > nonzero_threshold(tol, r.err_bound) for r in recs)
    main = consts.CX * X * math.log(X) if X > 1 else 0.0
    return MomentReport(X, len(recs), moment, main, consts.c0, consts.c1, consts.CX, nonzero,
                        10 * tol, second, recs)


# Non-vanishing ----------------------------------------------------------------

PROPORTION_PREFACTOR = 3 / (math.sqrt(3) - 1) ** 2
PROPORTION_LOGLOG_RECIPROCAL = 101.3


@dataclass(frozen=True)
class NonvanishingReport:
    count_nonzero: int
    count_below_threshold: int
    proportion: float
    bound_prefactor: float = PROPORTION_PREFACTOR
    bound_loglog_reciprocal: float = PROPORTION_LOGLOG_RECIPROCAL

    def exceeds_bound(self) -> bool:
        """Compare proportion with prefactor * exp(-exp(loglog)) in log-log space."""
        if self.proportion <= 0:
            return False
        # proportion > pre e^{-e^L}  <=>  log(pre) - log(prop) < e^L
        return math.log(self.bound_prefactor) - math.log(self.proportion) < math.exp(self.bound_loglog_reciprocal)


def nonvanishing_report(X: int, tol: float = DEFAULT_TOL, records: Optional[list[CharacterRecord]] = None,
                        cfg: Optional[MollifierConfig] = None) -> NonvanishingReport:
    """Counts of c with |L(1/2, chi_c)| above the certified threshold, and the
    Cauchy-Schwarz proportion |sum L M|^2 / (|F| sum |L M|^2)."""
    if records is None:
        fam = enumerate_family(X)
        if not fam:
            return NonvanishingReport(0, 0, 0.0)
        cfg = MollifierConfig.desk_mode(max(X, 3)) if cfg is None else cfg
        records = character_records(fam, cfg, tol)
    if not records:
        return NonvanishingReport(0, 0, 0.0)
    nonzero = sum(abs(r.L) > nonzero_threshold(tol, r.err_bound) for r in records)
    first = _exact_sum(r.L * r.M for r in records)
    second = math.fsum(abs(r.L * r.M) ** 2 for r in records)
    prop = abs(first) ** 2 / (len(records) * second) if second else 0.0
    return NonvanishingReport(nonzero, len(records) - nonzero, prop)


# S1 / S2 / S3 ------------------------------------------------------------------

@dataclass(frozen=True)
class TermSplit:
    S1: float
    S2: complex
    S3: complex
    Y: float
    b_terms: int

    @property
    def total(self) -> complex:
        return self.S1 + self.S2 + self.S3


def _cube_root(m: EisensteinInt) -> Optional[EisensteinInt]:
    f = factor(m)
    if any(e % 3 for _, e in f.primes):
        return None
    d = ONE
    for pr, e in f.primes:
        d = d * pr.element ** (e // 3)
    return d


def coprime_count(family: list[FamilyElement], m: EisensteinInt) -> int:
    """#{c in family : (c, m) = 1}, by explicit gcds."""
    return sum(1 for c in family if gcd(c.q, m) == ONE)


def afe_term_split(X: int, a=ONE, Y: Optional[float] = None, tol: float = DEFAULT_TOL,
                   family: Optional[list[FamilyElement]] = None) -> TermSplit:
    """The three sums of the twisted first moment sum_c chi_c(a) L(1/2, chi_c),
    with the smoothing scale Y fixed across the family (default X^(3/4)):

      S1 = sum_{r2, b: ab cube} 3^{-r2/2} N(b)^{-1/2} V(3^r2 N(b)/Y) #{c : (c, ab) = 1}
      S2 = same over ab not a cube, with sum_c chi_{ab}(c)
      S3 = sum_c chi_c(a) W(chi_c)/sqrt(n_c) * (dual sum at scale 3 n_c / Y).
    """
    a = as_primary(a)
    fam = enumerate_family(X) if family is None else family
    Y = X**0.75 if Y is None else float(Y)
    B = truncation_point(Y, tol / 4)
    itab = ideal_table(B)
    nb = itab.count_upto(B)
    S1 = []
    S2 = []
    for i in range(nb):
        N = int(itab.norms[i])
        b = EisensteinInt(int(itab.a[i]), int(itab.b[i]))
        w = 0.0
        p3 = 1
        while p3 * N <= B:
            w += p3**-0.5 * weight_V(p3 * N / Y)
            p3 *= 3
        w /= math.sqrt(N)
        m = a * b
        if _cube_root(m) is not None:
            S1.append(w * coprime_count(fam, m))
        else:
            S2.append(w * character_sum_over_family(m, X, fam))
    S3 = []
    for c in fam:
        tw = c.chi(a)
        if tw is None:
            continue
        n = c.conductor_norm
        s2 = 3 * n / Y
        Bd = truncation_point(s2, tol / 4)
        exps, norms = character_on_ideals(c, Bd)
        dual, _ = _ideal_sums(exps, norms, Bd, s2, conjugate=True)
        S3.append(ROOTS_OF_UNITY[tw] * root_number(c) / math.sqrt(n) * dual)
    return TermSplit(math.fsum(S1), _exact_sum(S2), _exact_sum(S3), Y, nb)


def twisted_moment_direct(X: int, a=ONE, Y: Optional[float] = None, tol: float = DEFAULT_TOL,
                          family: Optional[list[FamilyElement]] = None) -> complex:
    """sum_c chi_c(a) L(1/2, chi_c) from per-character central values at the
    matching scale; the route independent of afe_term_split."""
    a = as_primary(a)
    fam = enumerate_family(X) if family is None else family
    Y = X**0.75 if Y is None else float(Y)
    out = []
    for c in fam:
        tw = c.chi(a)
        if tw is None:
            continue
        rec = central_value(c, Y=Y / math.sqrt(3 * c.conductor_norm), tol=tol)
        out.append(ROOTS_OF_UNITY[tw] * rec.value)
    return _exact_sum(out)


# Printed constants --------------------------------------------------------------

D2_GIVEN = 2.6176409874e15


@dataclass(frozen=True)
class PaperConstants:
    R1: float
    R2: float
    S_k: float
    D: int
    loglog_bound: float
    proportion_prefactor: float
    proportion_loglog_reciprocal: float
    R1_interval: tuple[float, float] = (math.nan, math.nan)


def _mp(x) -> mpmath.mpf:
    # the shortest decimal repr, so 1.0299 means 1.0299 and not its binary neighbour
    return mpmath.mpf(repr(float(x)))


def _bracket(k, kappa, a, beta, Theta):
    return beta - mpmath.mpf(2) / 3 - 2 * a * (8 * k * kappa + 1) * Theta ** (1 - beta) / 3


def R1_value(k, kappa, a, beta, Theta) -> float:
    """R1 at 40 digits: the bracket cancels to about 1e-3 from terms near 6."""
    with mpmath.workdps(40):
        k, kappa, a, beta, Theta = map(_mp, (k, kappa, a, beta, Theta))
        e = mpmath.e
        br = _bracket(k, kappa, a, beta, Theta)
        inner = k * e + mpmath.log((5 / (3 * a * a)) ** (mpmath.mpf(1) / 3) * e * e * k / 2) / (4 * a) \
            + mpmath.log(Theta) / (4 * a) * br
        return float(e / Theta * inner)


def R2_value(k, kappa, a, beta, Theta) -> float:
    with mpmath.workdps(40):
        k, kappa, a, beta, Theta = map(_mp, (k, kappa, a, beta, Theta))
        return float(mpmath.e * _bracket(k, kappa, a, beta, Theta) / (4 * a * Theta))


def S_k_value(k: int, D: int) -> float:
    return 4 * 5 ** (2 * k * D) * math.factorial(2 * k * D) * math.exp(4 * k * (1 + D))


def loglog_chain(Theta: float, D2: float = D2_GIVEN) -> float:
    """log(log(D2) + 2e/Theta): the double logarithm of D2 exp(2e/Theta)."""
    with mpmath.workdps(40):
        return float(mpmath.log(mpmath.log(mpmath.mpf(D2)) + 2 * mpmath.e / mpmath.mpf(Theta)))


def reproduce_paper_constants(cfg: Optional[MollifierConfig] = None) -> PaperConstants:
    cfg = MollifierConfig.proof_parameters() if cfg is None else cfg
    args = (cfg.k, cfg.kappa, cfg.a, cfg.beta, cfg.Theta)
    # Theta is printed to 11 significant digits; R1 over that rounding interval
    half = 0.5e-10 * 10 ** math.floor(math.log10(cfg.Theta))
    r_lo = R1_value(cfg.k, cfg.kappa, cfg.a, cfg.beta, cfg.Theta - half)
    r_hi = R1_value(cfg.k, cfg.kappa, cfg.a, cfg.beta, cfg.Theta + half)
    return PaperConstants(
        R1=R1_value(*args),
        R2=R2_value(*args),
        S_k=S_k_value(int(cfg.k), cfg.D),
        D=cfg.D,
        loglog_bound=loglog_chain(cfg.Theta),
        proportion_prefactor=PROPORTION_PREFACTOR,
        proportion_loglog_reciprocal=PROPORTION_LOGLOG_RECIPROCAL,
        R1_interval=(min(r_lo, r_hi), max(r_lo, r_hi)),
    )


def matches_printed(value: float, printed_mantissa: str, exponent: int) -> bool:
    """True when value rounds to the printed mantissa at its printed digits."""
    digits = len(printed_mantissa.replace("-", "").replace(".", "")) - 1
    scaled = value / 10.0**exponent
    return f"{scaled:.{digits}f}" == printed_mantissa
