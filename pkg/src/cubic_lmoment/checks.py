"""Invariant suite run by ``cubic-lmoment check``."""
from __future__ import annotations

import math
import random
from typing import Callable

from .eisenstein import (
    EisensteinInt,
    cubic_symbol,
    cubic_symbol_reciprocity,
    gcd,
    primary_elements,
    ONE,
)
from .family import enumerate_family, family_count, is_member
from .gauss import gauss_direct, gauss_fast, root_number, root_number_direct
from .lfunction import central_value
from .mollifier import MollifierConfig, exp_bound_margins, expansion_from_values, nu_n, nu_n_formula, truncated_exp
from .moments import euler_constants, reproduce_paper_constants
from .primes import ideal_count, li, pi_K

Check = tuple[str, bool, str]


def _reciprocity(n_pairs: int, norm_limit: int) -> Check:
    rng = random.Random(1)
    elems = list(primary_elements(norm_limit))
    bad = 0
    done = 0
    while done < n_pairs:
        m, n = rng.choice(elems), rng.choice(elems)
        if m == n or gcd(m, n) != ONE:
            continue
        done += 1
        bad += cubic_symbol_reciprocity(m, n) != cubic_symbol_reciprocity(n, m)
        bad += cubic_symbol_reciprocity(m, n) != cubic_symbol(m, n)
    return "cubic reciprocity", bad == 0, f"{n_pairs} pairs, {bad} mismatches"


def _gauss(norm_limit: int) -> Check:
    worst = 0.0
    for n in primary_elements(norm_limit):
        if n == ONE:
            continue
        for r in (EisensteinInt(1, 0), EisensteinInt(2, 5), EisensteinInt(-3, 1)):
            worst = max(worst, abs(gauss_fast(r, n).value - gauss_direct(r, n).value))
    return "gauss fast = direct", worst < 1e-9, f"max diff {worst:.2e}"


def _family(X: int) -> Check:
    fam = {(c.c1, c.c2) for c in enumerate_family(X)}
    elems = [e for e in primary_elements(X) if e != ONE]
    brute = set()
    for c1 in [ONE] + elems:
        for c2 in [ONE] + elems:
            if (c1 * c2).norm() <= X and is_member(c1, c2):
                brute.add((c1, c2))
    ok = fam == brute and family_count(X) == len(fam)
    return "family enumeration", ok, f"|F({X})| = {len(fam)}"


def _afe(n_chars: int) -> Check:
    worst = 0.0
    fam = enumerate_family(2000)[:n_chars]
    for c in fam:
        vals = [central_value(c, Y=Y).value for Y in (0.5, 1.0, 2.0)]
        ref = max(abs(vals[1]), 1e-3)
        worst = max(worst, max(abs(v - vals[1]) for v in vals) / ref)
        conj = central_value(c.conjugate()).value
        worst = max(worst, abs(conj - vals[1].conjugate()) / ref)
        worst = max(worst, abs(root_number(c) - root_number_direct(c)) / c.conductor_norm**0.5)
    return "AFE Y-invariance, conjugation, root number", worst < 1e-6, f"max rel diff {worst:.2e}"


def _analytic() -> Check:
    x = 10**5
    r1 = abs(pi_K(x) / li(x) - 1)
    r2 = abs(ideal_count(x) / x / (math.pi / (3 * math.sqrt(3))) - 1)
    return "prime ideal theorem, ideal count", r1 < 0.005 and r2 < 0.01, f"{r1:.2e}, {r2:.2e}"


def _mollifier_algebra() -> Check:
    ok = True
    for ell in range(1, 7):
        for i in range(100):
            ok &= exp_bound_margins(-10 + i / 10, ell)[0] > 0
        ok &= exp_bound_margins(0.0, ell)[0] == 0
        top = 2 * ell / math.e**2
        for i in range(101):
            ok &= exp_bound_margins(-10 + (top + 10) * i / 100, ell)[1] > 0
    for m in range(9):
        for n in range(1, 5):
            ok &= math.isclose(nu_n([m], n), nu_n_formula([m], n), rel_tol=1e-12)
    z = [0.3 - 0.2j, -0.1 + 0.4j]
    for ell in range(0, 7):
        ok &= abs(expansion_from_values(z, ell) - truncated_exp(-(z[0] + z[1]), ell)) < 1e-10
    return "truncated exponential and nu_n", bool(ok), ""


def _validator() -> Check:
    flags = MollifierConfig.proof_parameters().validate()
    flags.pop("Xcond")
    failed = [k for k, v in flags.items() if not v]
    return "parameter validator", not failed, ",".join(failed) or "all conditions hold"


def _sandwich() -> Check:
    ok = True
    for X in (10**4, 10**5):
        e = euler_constants(MollifierConfig.desk_mode(X))
        ok &= e.c0 < e.CX < e.c1
    return "c0 < C_X < c1", bool(ok), ""


def _constants() -> Check:
    pc = reproduce_paper_constants()
    ok = f"{pc.R2 / 1e42:.10f}" == "2.8043085602" and f"{pc.S_k / 1e11:.10f}" == "5.3316663123"
    ok &= abs(pc.loglog_bound - 101.248586291) < 1e-6
    lo, hi = pc.R1_interval
    ok &= lo <= -4.7107876828e40 <= hi
    return "printed constants", bool(ok), f"R1 = {pc.R1:.10e}"


def run_checks(fast: bool = False) -> list[Check]:
    suite: list[Callable[[], Check]] = [
        lambda: _reciprocity(100 if fast else 500, 2000),
        lambda: _gauss(300 if fast else 2000),
        lambda: _family(300 if fast else 2000),
        lambda: _afe(5 if fast else 50),
        _analytic,
        _mollifier_algebra,
        _validator,
        _sandwich,
        _constants,
    ]
    return [f() for f in suite]
