import math
import random

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from cubic_lmoment.family import enumerate_family
from cubic_lmoment.lfunction import central_value
from cubic_lmoment.mollifier import (
    ArithmeticWeights,
    F_r,
    MollifierConfig,
    T_membership,
    constant_D_values,
    diagnostics_DS,
    exp_bound_margins,
    expansion_from_values,
    f_weight,
    int0_check,
    mollifier_M,
    mollifier_factor_expansion,
    nu_n,
    nu_n_formula,
    prime_sum_estimate_1,
    prime_sum_estimate_2,
    prime_sum_estimate_3,
    prime_sum_estimate_4,
    prime_sum_estimate_5,
    square_prime_sum,
    truncated_exp,
)
from cubic_lmoment.primes import prime_table

WIDE = MollifierConfig(k=1, kappa=1, alpha=2.0, beta=0.75, Theta=0.9, X=10**6)
EMPTY = MollifierConfig(k=2, kappa=1, alpha=1.2, beta=0.75, Theta=0.9, X=100)


@pytest.fixture(scope="module")
def fam():
    return enumerate_family(10**4)


# config ----------------------------------------------------------------------------

@pytest.mark.parametrize("X,hi", [(10**4, 34), (10**5, 51), (10**6, 76)])
def test_desk_intervals(X, hi):
    cfg = MollifierConfig.desk_mode(X)
    assert cfg.J == 0 and cfg.k0 == 4
    assert cfg.intervals == [(4, hi)]


def test_wide_config():
    assert WIDE.J == 1
    assert WIDE.intervals == [(4, 7), (7, 232)]
    assert WIDE.ells == [8, 4]


def test_config_invariants():
    for cfg in (WIDE, MollifierConfig.desk_mode(10**5)):
        assert all(l > 0 and l % 2 == 0 for l in cfg.ells)
        ts = cfg.thetas
        assert all(a < b for a, b in zip(ts, ts[1:]))
        bounds = [cfg.norm_bound(j) for j in range(-1, cfg.J + 1)]
        assert bounds == sorted(bounds)
        assert cfg.theta(-1) == pytest.approx(math.log(cfg.k0) / math.log(cfg.X))
        for j in range(cfg.J + 1):
            assert cfg.theta(j) == pytest.approx(math.e**j / math.log(math.log(cfg.X)) ** cfg.alpha)
            assert cfg.ell(j) == 2 * math.floor(cfg.theta(j) ** -cfg.beta)


def test_norm_bounds_are_exact_floors():
    for cfg in (WIDE, MollifierConfig.desk_mode(10**4)):
        for j in range(cfg.J + 1):
            with mpmath.workdps(50):
                want = int(mpmath.floor(mpmath.mpf(cfg.X) ** mpmath.mpf(cfg.theta(j))))
            assert cfg.norm_bound(j) == want


def test_json_round_trip():
    cfg = MollifierConfig.proof_parameters()
    assert MollifierConfig.from_json(cfg.to_json()) == cfg


def test_proof_parameters_validator():
    cfg = MollifierConfig.proof_parameters()
    flags = cfg.validate()
    assert set(flags) == {
        "alphabetacond", "Xcond", "eta0bound", "etaJcond", "thetacond1", "etajcond",
        "betacond", "ThetaBetacond", "thetacond4", "thetacond5", "ThetaCond1stmoment",
    }
    assert cfg.proof_conditions_hold()
    assert cfg.J < 0
    # the desk preset is not an admissible proof configuration
    assert not MollifierConfig.desk_mode(10**4).proof_conditions_hold()


def test_validator_detects_violation():
    bad = MollifierConfig(k=2.0, kappa=1.0, alpha=1.0, beta=0.916, Theta=5.8025935515e-44, X=10**6)
    assert not bad.validate()["alphabetacond"]


# truncated exponential ---------------------------------------------------------

def test_truncated_exp_examples():
    assert truncated_exp(3.7, 0) == 1
    assert truncated_exp(-1.0, 2) == 0.5
    assert truncated_exp(1.0, 20) == pytest.approx(math.e, rel=1e-15)


@given(st.floats(-20, 20), st.integers(0, 30))
def test_truncated_exp_matches_mpmath(x, ell):
    with mpmath.workdps(50):
        want = mpmath.fsum(mpmath.mpf(x) ** n / mpmath.factorial(n) for n in range(ell + 1))
    assert truncated_exp(x, ell) == pytest.approx(float(want), rel=1e-12, abs=1e-12 * math.exp(abs(x)))


def test_exp_bounds_on_grid():
    for ell in range(1, 7):
        for x in np.linspace(-10, 0, 101)[:-1]:
            assert exp_bound_margins(float(x), ell)[0] > 0
        assert exp_bound_margins(0.0, ell)[0] == 0
        for x in np.linspace(-10, 2 * ell / math.e**2, 101):
            assert exp_bound_margins(float(x), ell)[1] > 0
            assert truncated_exp(float(x), 2 * ell) > 0


# weights -----------------------------------------------------------------------

def test_nu_n_prime_powers_exhaustive():
    for m in range(9):
        for n in range(1, 5):
            assert nu_n([m], n) == pytest.approx(n**m / math.factorial(m), rel=1e-12)
            assert nu_n([m], n) == pytest.approx(nu_n_formula([m], n), rel=1e-12)


def test_nu_n_truncation():
    for exps in ([1, 2], [3], [2, 2, 1], [4, 1]):
        om = sum(exps)
        for n in (1, 2, 3):
            full = nu_n(exps, n)
            for ell in range(0, om + 3):
                part = nu_n(exps, n, ell)
                assert part <= full + 1e-15
                if ell >= om:
                    assert part == pytest.approx(full)
            assert nu_n(exps, n) == pytest.approx(nu_n_formula(exps, n))


def test_weights_namespace():
    W = ArithmeticWeights
    assert W.omega([2, 1]) == 3 and W.liouville([2, 1]) == -1 and W.liouville([]) == 1
    assert W.nu([2, 3]) == pytest.approx(1 / 12)
    cfg = MollifierConfig.desk_mode(10**4)
    assert W.f([7, 13], [2, 1], 0, cfg) == pytest.approx(f_weight(7, 0, cfg) ** 2 * f_weight(13, 0, cfg))


def test_f_weight():
    cfg = WIDE
    for j in range(cfg.J + 1):
        top = cfg.X ** cfg.theta(j)
        assert f_weight(top, j, cfg) == pytest.approx(0, abs=1e-12)
        assert f_weight(1.0, j, cfg) == 1.0
        grid = np.linspace(1.0, top, 500)
        vals = f_weight(grid, j, cfg)
        assert np.all(np.diff(vals) < 0) and np.all((vals >= -1e-12) & (vals <= 1))


# prime sums and M -------------------------------------------------------------------

def test_F_r_empty_and_conj(fam):
    paper = MollifierConfig.proof_parameters()
    for c in fam[:20]:
        assert F_r(c, 0, 0, paper) == 0
        assert mollifier_M(c, paper) == 1
        for r in range(WIDE.J + 1):
            for j in range(r, WIDE.J + 1):
                v = F_r(c, r, j, WIDE)
                assert abs(F_r(c.conjugate(), r, j, WIDE) - v.conjugate()) < 1e-12
                lo, hi = WIDE.interval(r)
                t = prime_table(hi)
                N = t.norms[t.count_upto(lo): t.count_upto(hi)].astype(float)
                assert abs(v) <= np.sum(N**-0.5) + 1e-12


def test_F_r_scalar(fam):
    c = fam[3]
    lo, hi = WIDE.interval(1)
    w = complex(-0.5, math.sqrt(3) / 2)
    total = 0j
    for pr in prime_table(hi).upto(hi):
        if lo < pr.norm <= hi:
            s = c.chi(pr.element)
            if s is not None:
                total += w**s * f_weight(pr.norm, 1, WIDE) / math.sqrt(pr.norm)
    assert abs(total - F_r(c, 1, 1, WIDE)) < 1e-12


def test_mollifier_conj(fam):
    for c in fam[:30]:
        assert abs(mollifier_M(c.conjugate(), WIDE) - mollifier_M(c, WIDE).conjugate()) < 1e-12


def test_product_form_equals_expansion_two_primes(fam):
    # I_0 of the wide config holds exactly the two primes of norm 7
    lo, hi = WIDE.interval(0)
    assert [p.norm for p in prime_table(hi).upto(hi) if lo < p.norm] == [7, 7]
    for c in fam[:40]:
        prod = truncated_exp(-F_r(c, 0, WIDE.J, WIDE) / WIDE.kappa, WIDE.ell(0))
        expn = mollifier_factor_expansion(c, 0, WIDE)
        assert abs(prod - expn) < 1e-10


def test_expansion_values_single_and_pair():
    rng = random.Random(9)
    for _ in range(50):
        z = [complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) for _ in range(rng.randint(1, 3))]
        ell = rng.randint(0, 8)
        kappa = rng.choice([1.0, 0.5, 2.0])
        assert abs(expansion_from_values(z, ell, kappa) - truncated_exp(-sum(z) / kappa, ell)) < 1e-10


# D, S, T ---------------------------------------------------------------------------

def test_diagnostics_empty_intervals(fam):
    assert EMPTY.J == 0 and EMPTY.interval(0)[1] <= EMPTY.interval(0)[0]
    ell = EMPTY.ell(0)
    for c in fam[:5]:
        assert F_r(c, 0, 0, EMPTY) == 0
        d = diagnostics_DS(c, 0, EMPTY)
        assert d.D == pytest.approx(1 + math.exp(-ell))
        assert d.S == pytest.approx(math.exp(EMPTY.k * square_prime_sum(c, 0, EMPTY).real))
        assert d.T_membership == [True]


def test_D_positive_and_T(fam):
    for c in fam[::20]:
        for j in range(WIDE.J + 1):
            d = diagnostics_DS(c, j, WIDE)
            assert d.D > 0 and d.S > 0
        T = T_membership(c, WIDE)
        for r, inside in enumerate(T):
            worst = max(F_r(c, r, jj, WIDE).real for jj in range(r, WIDE.J + 1))
            assert inside == (worst <= WIDE.ell(r) / (WIDE.k * math.e**2))


def test_int0_bound_on_sample(fam):
    rng = random.Random(4)
    cfgs = [MollifierConfig.desk_mode(10**4), MollifierConfig.desk_mode(10**5), WIDE]
    checked = 0
    for c in rng.sample(fam, 60):
        L = abs(central_value(c).value)
        for cfg in cfgs:
            chk = int0_check(c, L, cfg)
            assert chk.holds
            checked += chk.in_T0
    assert checked > 50


# prime-sum estimates ----------------------------------------------------------------

@pytest.mark.parametrize("k0", [3, 16])
def test_estimate_1(k0):
    s, tail = prime_sum_estimate_1(k0)
    assert s + tail < 1


def test_estimates_2_to_5():
    lhs, rhs = prime_sum_estimate_2(WIDE, 1, 1.5)
    assert lhs < rhs
    lhs, rhs = prime_sum_estimate_3(WIDE)
    assert lhs < rhs
    s, target, err = prime_sum_estimate_4(WIDE, 0)
    assert target == 1 and err < 1
    lhs, rhs = prime_sum_estimate_5(WIDE, 1)
    assert lhs < rhs


# D constants ---------------------------------------------------------------------------

def test_D_constants_below_one():
    for conv, n_max in (("x8", 9), ("k0", 9)):
        vals = constant_D_values(conv, n_max)
        assert all(v < 1 for v in vals)


def test_D_constant_first_value():
    assert f"{constant_D_values('x8', 1)[0]:.6f}" == "0.416533"
