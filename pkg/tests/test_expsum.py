import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import e, primes_trial, tuples
from wglab.arith import MAJOR
from wglab.errors import DependencyError, InvalidArgument
from wglab.expsum import (
    arc_experiment,
    eval_minor_bounds,
    frac_product,
    grid_sums,
    h_sum,
    hypothesis_parameters,
    lambda_weighted_sum,
    parseval_count,
    refined_parameters,
    samples_to_rows,
    t_sum,
)
from wglab.hecke import hecke_for
from wglab.sieve import build_sieve


def lam_f(p):
    return hecke_for(1000).lambda_at(p)


def test_h_sum_examples():
    assert h_sum(10, 1, 0) == pytest.approx(4)
    assert h_sum(10, 1, 0.5) == pytest.approx(-2)
    assert h_sum(10, 2, 0.25) == pytest.approx(1 + 1j)
    assert h_sum(10, 1, Fraction(1, 2)) == pytest.approx(-2)


def test_t_sum_examples():
    assert t_sum(100, 1, 0.3) == pytest.approx(h_sum(100, 1, 0.3))
    assert t_sum(10, 1, 0, lam_f) == pytest.approx(sum(lam_f(p) for p in (2, 3, 5, 7)))
    assert t_sum(50, 1, 0.3, lambda p: 0.0) == 0
    with pytest.raises(DependencyError):
        t_sum(10, 1, 0.1, {2: 1.0, 3: 1.0})


def test_lambda_weighted_examples():
    assert lambda_weighted_sum(4, 1, 0) == pytest.approx(math.log(12))
    expect = 3 * math.log(2) - 2 * math.log(3) - math.log(5) - math.log(7)
    assert lambda_weighted_sum(10, 1, 0.5) == pytest.approx(expect)
    assert lambda_weighted_sum(2, 2, 0.7) == pytest.approx(math.log(2) * e(4 * 0.7))


def test_lambda_weighted_matches_direct():
    alpha = 0.123456789
    lam = build_sieve(3000).mangoldt()
    direct = sum(lam[n] * e(n * n * alpha) for n in range(1, 3001) if lam[n])
    assert lambda_weighted_sum(3000, 2, alpha) == pytest.approx(direct, abs=1e-8)


def test_phase_accuracy_for_large_products():
    n = np.array([99_999_989, 10**8 - 1, 12_345_678_901])
    alpha = 0.7071067811865476
    exact = [float((Fraction(int(m)) * Fraction(alpha)) % 1) for m in n]
    assert np.allclose(frac_product(n, alpha), exact, atol=1e-12)


@given(st.floats(min_value=0, max_value=1, allow_nan=False))
@settings(max_examples=100, deadline=None)
def test_triangle_and_conjugate(alpha):
    N = 2000
    pi_n = 303
    h = h_sum(N, 1, alpha)
    assert abs(h) <= pi_n + 1e-9
    assert h_sum(N, 1, (-alpha) % 1.0) == pytest.approx(h.conjugate(), abs=1e-9)


def test_grid_sums_match_pointwise():
    vals = grid_sums(500, 2, 37, lam_f)
    for j in (0, 5, 36):
        assert vals[j] == pytest.approx(t_sum(500, 2, Fraction(j, 37), lam_f), abs=1e-9)


@pytest.mark.parametrize("N", [101, 1001, 4000])
def test_mean_square(N):
    pi_n = len(primes_trial(N))
    for M in (2 * N + 1, 2 * N + 2, 3 * N):
        vals = grid_sums(N, 1, M)
        assert np.mean(np.abs(vals) ** 2) == pytest.approx(pi_n, rel=1e-12)


def test_major_arc_decay():
    ratios = []
    for N in (10**3, 10**4, 10**5):
        ratios.append(abs(h_sum(N, 1, Fraction(1, 4))) / build_sieve(N).pi(N))
    assert ratios[0] > ratios[1] > ratios[2]


def test_parseval_examples():
    ex, dft = parseval_count(9, 1, 3)
    assert ex == 4 and dft == pytest.approx(4, abs=1e-9)
    ex, dft = parseval_count(20, 2, 5)
    assert ex == 1 and dft == pytest.approx(1, abs=1e-9)
    ex, dft = parseval_count(9, 1, 3, lam_f)
    target = 2 * lam_f(2) + lam_f(5) + lam_f(3)
    assert ex == pytest.approx(target) and dft == pytest.approx(target, abs=1e-9)
    with pytest.raises(InvalidArgument):
        parseval_count(9, 1, 3, M=27)


def test_parseval_matches_tuples():
    for N in (15, 21, 33):
        w = sum(lam_f(t[0]) for t in tuples(N, 1, 3))
        ex, dft = parseval_count(N, 1, 3, lam_f)
        assert ex == pytest.approx(w) and abs(dft - w) < 1e-9


def test_bound_shapes():
    b = eval_minor_bounds(10**4, 1, 100, 0.0)
    expect = 1e4 * math.log(1e4) ** 3 * math.sqrt(1 / 100 + 10 ** (-8 / 5) + 1e-2)
    assert b.vinogradov == pytest.approx(expect)
    assert math.isnan(b.harman)
    b2 = eval_minor_bounds(10**4, 2, 7, 1e-9, eps1=0.01)
    bracket = 1 / 7 + 1e-2 + 7 / 1e8
    assert b2.vinogradov == pytest.approx(1e4**1.01 * bracket ** (1 / 4))
    assert b2.harman == pytest.approx(1e4 * math.log(1e4) * bracket ** (1 / 8))
    s = math.sqrt(7 * (1 + 1e-9 * 1e8))
    assert b2.ren == pytest.approx(2**1.5 * (100 * s + 1e4**0.8 + 1e4 / s) * math.log(1e4))
    with pytest.raises(InvalidArgument):
        eval_minor_bounds(10, 1, 1, 0.0)


def test_parameters():
    P, Q = hypothesis_parameters(10**6, 0.5, 1)
    assert P == int((10**6) ** (1 / 3)) and Q == 10**6 // P
    assert refined_parameters(10**6) == (100, 10**4)
    with pytest.raises(InvalidArgument):
        hypothesis_parameters(100, 1.0)


def test_arc_experiment():
    N = 10**4
    P, Q = hypothesis_parameters(N)
    samples = arc_experiment(N, 1, P, Q, 64)
    first = samples[0]
    assert first.arc.kind == MAJOR and (first.arc.q, first.arc.a) == (1, 0)
    assert first.h_abs == pytest.approx(build_sieve(N).pi(N))
    for s in samples:
        assert abs(s.value) <= first.h_abs + 1e-9
    rows = samples_to_rows(samples)
    assert list(rows[0]) == ["alpha", "re", "im", "abs", "arckind", "q", "a", "vino", "harman", "ren"]
    tags = {r["arckind"] for r in rows}
    assert tags <= {"major", "minor", "minor:n", "minor:m-n"}
    with pytest.raises(InvalidArgument):
        arc_experiment(N, 1, 10, 15, 64)
