import math
import random

import mpmath
import pytest

from cubic_lmoment.eisenstein import ONE, primary_elements
from cubic_lmoment.family import enumerate_family
from cubic_lmoment.lfunction import truncation_point
from cubic_lmoment.mollifier import MollifierConfig, f_weight
from cubic_lmoment.moments import (
    C0_PREFACTOR,
    PROPORTION_LOGLOG_RECIPROCAL,
    PROPORTION_PREFACTOR,
    NonvanishingReport,
    afe_term_split,
    alternating_b_sum,
    b_terms,
    c0_truncated,
    euler_constant_CX,
    euler_constant_c0,
    euler_constant_c1,
    euler_constants,
    first_mollified_moment,
    loglog_chain,
    matches_printed,
    nonvanishing_report,
    reproduce_paper_constants,
    twisted_moment_direct,
)
from cubic_lmoment.primes import sieve_primary_primes

WIDE = MollifierConfig(k=1, kappa=1, alpha=2.0, beta=0.75, Theta=0.9, X=10**6)


# c0 ---------------------------------------------------------------------------------

def test_c0_frozen():
    assert euler_constant_c0() == pytest.approx(0.029700008718, abs=1e-12)
    assert C0_PREFACTOR == pytest.approx(4 * math.pi**2 * math.sqrt(3) / (2187 * (math.sqrt(3) - 1)))
    assert euler_constant_c0() < C0_PREFACTOR


def test_c0_empty_product():
    v, _ = c0_truncated(1)
    assert v == C0_PREFACTOR


def test_c0_two_truncations():
    c0 = euler_constant_c0()
    for limit in (10**4, 10**6):
        v, tail = c0_truncated(limit)
        assert abs(math.log(v / c0)) <= tail
    a, ta = c0_truncated(10**4)
    b, tb = c0_truncated(10**6)
    assert abs(math.log(a / b)) <= ta + tb


# b-series and C_X -------------------------------------------------------------------

def test_b_terms_decrease():
    rng = random.Random(0)
    cfg = MollifierConfig.desk_mode(10**5)
    for _ in range(200):
        N = rng.choice([7, 13, 19, 25, 31, 37, 43])
        f = f_weight(N, 0, cfg)
        b = b_terms(f, N)
        assert all(y < x for x, y in zip(b, b[1:]))
        s = alternating_b_sum(f, N)
        assert b[0] - b[1] < s < b[0]


def test_b_terms_closed_form():
    f, N = 0.7, 13.0
    b = b_terms(f, N, 1e-20)
    for m, v in enumerate(b[:10]):
        want = f**m / math.factorial(m) / N ** (1.5 * max(1, math.ceil(m / 3)))
        assert v == pytest.approx(want, rel=1e-14)


@pytest.mark.parametrize("X", [10**4, 10**5])
def test_sandwich_desk(X):
    e = euler_constants(MollifierConfig.desk_mode(X))
    assert e.c0 < e.CX < e.c1
    assert e.mid_factors > 0
    assert euler_constant_CX(X) == e.CX and euler_constant_c1(X) == e.c1


def test_sandwich_wide():
    e = euler_constants(WIDE)
    assert e.c0 < e.CX < e.c1


def test_printed_range_upper_constant_is_below_CX():
    # the product over N >= X^theta_J alone omits the mid-range factors, all > 1
    e = euler_constants(MollifierConfig.desk_mode(10**4))
    assert e.c1_printed < e.CX


def test_degenerate_J_negative():
    e = euler_constants(MollifierConfig.proof_parameters())
    assert e.mid_factors == 0
    assert e.CX == e.c1 > e.c0


def test_frozen_desk_constants():
    e = euler_constants(MollifierConfig.desk_mode(10**4))
    assert e.CX == pytest.approx(0.036311, abs=1e-6)
    assert e.c1 == pytest.approx(0.037271, abs=1e-6)
    assert e.mid_factors == 9


# moment -----------------------------------------------------------------------------

@pytest.fixture(scope="module")
def report_1e3():
    return first_mollified_moment(1000)


def test_moment_small(report_1e3):
    r = report_1e3
    assert r.family_size == 136
    assert r.moment_value.real > 0
    assert abs(r.moment_value.imag) <= 1e-6 * (1 + abs(r.moment_value.real))
    assert r.c0 < r.CX < r.c1
    assert r.main_term_prediction == pytest.approx(r.CX * 1000 * math.log(1000))
    d = r.to_dict()
    assert d["family_size"] == 136 and d["ratio"] == pytest.approx(r.ratio)


def test_moment_deterministic(report_1e3):
    fam = enumerate_family(1000)
    random.Random(1).shuffle(fam)
    again = first_mollified_moment(1000, family=fam, jobs=2)
    assert again.moment_value == report_1e3.moment_value
    assert again.second_moment == report_1e3.second_moment


def test_moment_plain_when_J_negative():
    cfg = MollifierConfig.proof_parameters(10**3)
    r = first_mollified_moment(1000, cfg)
    assert all(rec.M == 1 for rec in r.records)
    assert r.moment_value.real > 0


@pytest.mark.slow
def test_moment_ratio_1e5():
    r = first_mollified_moment(10**5, jobs=1)
    assert 0.2 <= r.ratio <= 5
    assert abs(r.moment_value.imag) <= 1e-6 * (1 + abs(r.moment_value.real))


# non-vanishing ---------------------------------------------------------------------

def test_nonvanishing_empty():
    r = nonvanishing_report(1)
    assert (r.count_nonzero, r.count_below_threshold, r.proportion) == (0, 0, 0.0)


def test_nonvanishing_small(report_1e3):
    r = nonvanishing_report(1000, records=report_1e3.records)
    assert r.count_nonzero + r.count_below_threshold == 136
    assert 0 < r.proportion <= 1
    assert r.exceeds_bound()
    assert r.bound_prefactor == PROPORTION_PREFACTOR == 3 / (math.sqrt(3) - 1) ** 2
    assert r.bound_loglog_reciprocal == PROPORTION_LOGLOG_RECIPROCAL == 101.3
    assert not NonvanishingReport(0, 1, 0.0).exceeds_bound()


# S1 / S2 / S3 -----------------------------------------------------------------------

def brute_S1(X, Y, B):
    """Cube b over a brute scan, coprimality by prime divisibility, V by mpmath."""
    fam = enumerate_family(X)
    cubes = {d * d * d for d in primary_elements(round(B ** (1 / 3)) + 2)}
    total = []
    for b in primary_elements(B):
        if b not in cubes:
            continue
        cnt = sum(1 for c in fam if not any(p.divides(b) for p in c.primes1 + c.primes2))
        w = 0.0
        r2 = 0
        while 3**r2 * b.norm() <= B:
            N = 3**r2 * b.norm()
            w += 3 ** (-r2 / 2) * float(mpmath.erfc(mpmath.sqrt(2 * mpmath.pi * N / Y)))
            r2 += 1
        total.append(w / math.sqrt(b.norm()) * cnt)
    return math.fsum(total)


def test_S1_independent_oracle():
    ts = afe_term_split(300)
    B = truncation_point(ts.Y, 1e-8 / 4)
    assert ts.S1 == pytest.approx(brute_S1(300, ts.Y, B), rel=1e-12)


def test_S2_zero_when_only_cubes():
    ts = afe_term_split(100, Y=0.01)
    assert ts.b_terms == 1
    assert ts.S2 == 0


def test_split_total_matches_direct_moment():
    fam = enumerate_family(1000)
    for a in (ONE, sieve_primary_primes(7)[1].element):
        ts = afe_term_split(1000, a=a, family=fam)
        direct = twisted_moment_direct(1000, a=a, family=fam)
        assert abs(ts.total - direct) < 1e-9 * (1 + abs(direct))


def test_S1_dominates_and_S2_diagnostic():
    ts = afe_term_split(1000)
    assert ts.S1 > abs(ts.S2) and ts.S1 > abs(ts.S3)
    assert abs(ts.S2) <= 10 * math.sqrt(1000)


# printed constants ------------------------------------------------------------------

def R_oracle():
    """R1, R2 re-derived at 60 digits from decimal strings."""
    with mpmath.workdps(60):
        k, kappa = mpmath.mpf(2), mpmath.mpf(1)
        a, beta, T = mpmath.mpf("1.0299"), mpmath.mpf("0.916"), mpmath.mpf("5.8025935515e-44")
        e = mpmath.e
        br = beta - mpmath.mpf(2) / 3 - 2 * a * (8 * k * kappa + 1) * T ** (1 - beta) / 3
        inner = k * e + mpmath.log(mpmath.cbrt(5 / (3 * a * a)) * e * e * k / 2) / (4 * a) + mpmath.log(T) / (4 * a) * br
        return float(e / T * inner), float(e * br / (4 * a * T))


def test_R_values_against_oracle():
    pc = reproduce_paper_constants()
    R1, R2 = R_oracle()
    assert pc.R1 == pytest.approx(R1, rel=1e-14)
    assert pc.R2 == pytest.approx(R2, rel=1e-14)


def test_printed_digits_R2_S2_loglog():
    pc = reproduce_paper_constants()
    assert matches_printed(pc.R2, "2.8043085602", 42)
    assert matches_printed(pc.S_k, "5.3316663123", 11)
    assert pc.S_k == pytest.approx(4 * 5**4 * math.factorial(4) * math.exp(16), rel=1e-15)
    assert abs(pc.loglog_bound - 101.248586291) < 1e-6
    assert pc.D == 1


def test_R1_printed_value_within_Theta_rounding():
    pc = reproduce_paper_constants()
    lo, hi = pc.R1_interval
    assert lo <= pc.R1 <= hi
    assert lo <= -4.7107876828e40 <= hi


def test_loglog_chain_definition():
    with mpmath.workdps(40):
        want = mpmath.log(mpmath.log(mpmath.mpf("2.6176409874e15")) + 2 * mpmath.e / mpmath.mpf("5.8025935515e-44"))
    assert loglog_chain(5.8025935515e-44) == pytest.approx(float(want), abs=1e-12)


def test_matches_printed():
    assert matches_printed(-1.23456e5, "-1.235", 5)
    assert not matches_printed(-1.23456e5, "-1.234", 5)
