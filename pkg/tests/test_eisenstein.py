import random

import pytest
from hypothesis import given, strategies as st

from cubic_lmoment.eisenstein import (
    LAMBDA,
    OMEGA,
    ONE,
    UNITS,
    EisensteinInt,
    as_primary,
    canonical_associate,
    cubic_symbol,
    cubic_symbol_prime,
    cubic_symbol_prime_array,
    cubic_symbol_reciprocity,
    gcd,
    norm,
    primary_associate,
    primary_elements,
    reduce_mod,
    residues_mod,
)
from cubic_lmoment.errors import NotPrime, NotPrimaryizable, ResidueSystemTooLarge, UndefinedGCD
from cubic_lmoment.primes import sieve_primary_primes

import numpy as np

ints = st.integers(-10**6, 10**6)
elements = st.builds(EisensteinInt, ints, ints)
nonzero = elements.filter(bool)


def power_oracle(alpha: EisensteinInt, pi: EisensteinInt):
    """alpha^((N-1)/3) reduced in Z[w] by repeated rounding division, then
    matched against 1, w, w^2."""
    if pi.divides(alpha):
        return None
    e = (pi.norm() - 1) // 3
    r, base = ONE, alpha % pi
    while e:
        if e & 1:
            r = (r * base) % pi
        base = (base * base) % pi
        e >>= 1
    for k, u in enumerate((ONE, OMEGA, OMEGA * OMEGA)):
        if pi.divides(r - u):
            return k
    raise AssertionError("power is not a cube root of unity")


def random_primary(rng, bound=60):
    while True:
        z = EisensteinInt(rng.randrange(-bound, bound), rng.randrange(-bound, bound))
        if z and z.norm() % 3:
            return primary_associate(z).value


# norm ---------------------------------------------------------------------

def test_norm_examples():
    assert norm(LAMBDA) == 3
    assert norm(EisensteinInt(0, 0)) == 0
    assert norm(EisensteinInt(1, 3)) == 7


def test_norm_seven_exhaustive():
    sols = {(a, b) for a in range(-3, 4) for b in range(-3, 4) if a * a - a * b + b * b == 7}
    assert (1, 3) in sols and len(sols) == 12


def test_norm_no_overflow_at_large_coordinates():
    z = EisensteinInt(2**62, -(2**62))
    assert z.norm() == 3 * 2**124


@given(elements, elements)
def test_norm_multiplicative(x, y):
    assert (x * y).norm() == x.norm() * y.norm()


@given(elements)
def test_norm_is_z_times_conj(z):
    p = z * z.conj()
    assert p.b == 0 and p.a == z.norm() >= 0


@given(elements, elements, elements)
def test_ring_axioms(x, y, z):
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x * y == y * x


# primary associates ------------------------------------------------------

def test_primary_examples():
    assert primary_associate(2) == (EisensteinInt(-2, 0), EisensteinInt(-1, 0))
    assert primary_associate(-2) == (EisensteinInt(-2, 0), ONE)
    v = primary_associate(EisensteinInt(3, 1)).value  # norm 7
    assert v.norm() == 7 and v.is_primary()


def test_primary_unique_among_associates():
    for z in (EisensteinInt(3, 1), EisensteinInt(5, 2), EisensteinInt(-4, 5)):
        assert sum((u * z).is_primary() for u in UNITS) == 1


def test_primary_errors():
    with pytest.raises(NotPrimaryizable):
        primary_associate(0)
    with pytest.raises(NotPrimaryizable):
        primary_associate(LAMBDA * 5)
    with pytest.raises(NotPrimaryizable):
        as_primary(2)


@given(nonzero.filter(lambda z: z.norm() % 3))
def test_primary_idempotent_and_reconstructs(z):
    v, u = primary_associate(z)
    assert v == u * z and v.is_primary()
    assert primary_associate(v) == (v, ONE)


# gcd ------------------------------------------------------------------------

def test_gcd_examples():
    z = EisensteinInt(4, 9)
    assert gcd(z, 1) == ONE
    assert gcd(z, z) == canonical_associate(z)
    g = gcd(EisensteinInt(1, 3), 7)
    assert g in {u * EisensteinInt(1, 3) for u in UNITS}
    assert (EisensteinInt(1, 3) * EisensteinInt(1, 3).conj()) == EisensteinInt(7, 0)


def test_gcd_canonical_when_three_divides():
    g = gcd(LAMBDA * 5, LAMBDA * 7)
    assert g == min(u * LAMBDA for u in UNITS)


def test_gcd_zero_zero():
    with pytest.raises(UndefinedGCD):
        gcd(0, 0)


@given(nonzero, nonzero)
def test_gcd_divides_both(x, y):
    g = gcd(x, y)
    assert g.divides(x) and g.divides(y)


@given(nonzero, nonzero, nonzero)
def test_gcd_common_factor(x, y, z):
    assert gcd(x * z, y * z).norm() == (z * gcd(x, y)).norm()


# residues -------------------------------------------------------------------

def test_residue_examples():
    assert residues_mod(ONE) == [EisensteinInt(0, 0)]
    assert len(residues_mod(EisensteinInt(-2, 0))) == 4


@pytest.mark.parametrize("n", [EisensteinInt(1, 3), EisensteinInt(-2, 0), EisensteinInt(4, 9), EisensteinInt(-5, -9), LAMBDA])
def test_residues_pairwise_incongruent(n):
    reps = residues_mod(n)
    assert len(reps) == n.norm()
    for i, x in enumerate(reps):
        for y in reps[i + 1:]:
            assert not n.divides(x - y)


def test_residue_cap():
    with pytest.raises(ResidueSystemTooLarge):
        residues_mod(EisensteinInt(1000, 3), cap=10**4)


@given(elements, nonzero)
def test_reduce_mod_is_congruent(z, n):
    r = reduce_mod(z, n)
    assert n.divides(z - r)


# cubic symbols ------------------------------------------------------------

def test_symbol_examples():
    pi = EisensteinInt(1, 3)
    assert cubic_symbol_prime(1, pi) == 0
    assert cubic_symbol_prime(pi, pi) is None
    assert cubic_symbol_prime(2, pi) == 2
    assert power_oracle(EisensteinInt(2, 0), pi) == 2


def test_symbol_not_prime():
    with pytest.raises(NotPrime):
        cubic_symbol_prime(2, EisensteinInt(4, 9) * EisensteinInt(1, 3))


def test_euler_criterion_against_power_oracle():
    rng = random.Random(7)
    for pr in sieve_primary_primes(3000):
        for _ in range(4):
            a = EisensteinInt(rng.randrange(-500, 500), rng.randrange(-500, 500))
            assert cubic_symbol_prime(a, pr.element) == power_oracle(a, pr.element)


def test_symbol_array_matches_scalar():
    rng = np.random.default_rng(3)
    xs = rng.integers(-1000, 1000, 300)
    ys = rng.integers(-1000, 1000, 300)
    for pr in sieve_primary_primes(400):
        e = cubic_symbol_prime_array(xs, ys, pr.element)
        for x, y, v in zip(xs, ys, e):
            s = cubic_symbol_prime(EisensteinInt(int(x), int(y)), pr.element)
            assert (v == -1 and s is None) or v == s


def test_symbol_values_are_roots_of_unity():
    for pr in sieve_primary_primes(500):
        for a in range(1, 20):
            s = cubic_symbol_prime(a, pr.element)
            assert s is None or s in (0, 1, 2)


def test_cubes_in_kernel():
    rng = random.Random(11)
    for _ in range(100):
        n = random_primary(rng)
        a = EisensteinInt(rng.randrange(-50, 50), rng.randrange(-50, 50))
        if gcd(a, n) == ONE:
            assert cubic_symbol(a**3, n) == 0


def test_symbol_multiplicative():
    rng = random.Random(5)
    for _ in range(100):
        n = random_primary(rng)
        a = EisensteinInt(rng.randrange(-99, 99), rng.randrange(-99, 99))
        b = EisensteinInt(rng.randrange(-99, 99), rng.randrange(-99, 99))
        sa, sb, sab = cubic_symbol(a, n), cubic_symbol(b, n), cubic_symbol(a * b, n)
        assert sab == (None if sa is None or sb is None else (sa + sb) % 3)


def test_reciprocity_500_pairs():
    rng = random.Random(13)
    done = 0
    while done < 500:
        m, n = random_primary(rng), random_primary(rng)
        if gcd(m, n) != ONE:
            continue
        assert cubic_symbol(m, n) == cubic_symbol(n, m)
        done += 1


def test_omega_supplement():
    for n in primary_elements(3000):
        if n == ONE:
            continue
        assert cubic_symbol(OMEGA, n) == ((n.norm() - 1) // 3) % 3


def test_reciprocity_route_matches_factorization_route():
    rng = random.Random(17)
    for n in primary_elements(10**4):
        for _ in range(20):
            a = EisensteinInt(rng.randrange(-10**4, 10**4), rng.randrange(-10**4, 10**4))
            assert cubic_symbol_reciprocity(a, n) == cubic_symbol(a, n)


@given(elements, st.sampled_from(list(primary_elements(500))))
def test_reciprocity_route_property(a, n):
    assert cubic_symbol_reciprocity(a, n) == cubic_symbol(a, n)
