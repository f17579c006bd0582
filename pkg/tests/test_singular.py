import math
from fractions import Fraction

import numpy as np
import pytest

from oracles import square_solutions_mod, twin_prime_direct
from wglab.errors import InvalidArgument
from wglab.singular import (
    QUINARY,
    TERNARY_INTEGRAL,
    TERNARY_LOG,
    density_deviation_bound,
    hl_binary,
    local_density,
    main_term,
    odd_prime_product,
    singular_series_quinary,
    singular_series_ternary,
    ternary_integral,
    ternary_integral_reference,
    twin_prime_constant,
    unit_square_counts,
)


def direct_ternary(N, cutoff):
    out = 1.0
    for p in range(3, cutoff + 1):
        if all(p % d for d in range(2, math.isqrt(p) + 1)):
            out *= 1 - 1 / (p - 1) ** 2 if N % p == 0 else 1 + 1 / (p - 1) ** 3
    return out * 2.0


def test_ternary_examples():
    with pytest.raises(InvalidArgument):
        singular_series_ternary(10)
    assert singular_series_ternary(10, allow_even=True).value == 0.0
    s9 = singular_series_ternary(9, 100)
    assert s9.value == pytest.approx(direct_ternary(9, 100), rel=1e-13)
    s = singular_series_ternary(10**5 + 3, 10**5)
    assert s.value > 0.5 and s.tail_bound < 1e-9
    with pytest.raises(InvalidArgument):
        singular_series_ternary(9, 50)


def test_ternary_factor_at_three():
    with_three = singular_series_ternary(9, 100).value
    without = singular_series_ternary(11 * 1, 100).value
    ratio = with_three / without
    expected = (1 - 1 / 4) / (1 + 1 / 8) * (1 + 1 / 1000) / (1 - 1 / 100)
    assert ratio == pytest.approx(expected, rel=1e-12)


def test_ternary_lower_bound_sampled():
    rng = np.random.default_rng(5)
    for N in rng.integers(1, 10**9, size=1000):
        N = int(N) | 1
        assert singular_series_ternary(N, 1000).value >= 0.5


def test_doubling_cutoff_is_consistent():
    for N in (1001, 99999, 123457):
        a = singular_series_ternary(N, 2000)
        b = singular_series_ternary(N, 4000)
        assert abs(b.value - a.value) <= a.tail_bound * a.value
        lo, hi = a.interval
        assert lo <= b.value <= hi
    qa = singular_series_quinary(29, 200)
    qb = singular_series_quinary(29, 400)
    assert abs(qb.value - qa.value) <= qa.tail_bound * qa.value


def test_large_prime_divisors_are_exact():
    # neither N has a prime factor below the cutoff, so only the large factors differ
    p = 1_000_003
    s = singular_series_ternary(p, 1000).value
    t = singular_series_ternary(1009 * 1013, 1000).value
    expected = (1 - 1 / (p - 1) ** 2) / ((1 - 1 / 1008**2) * (1 - 1 / 1012**2))
    assert s / t == pytest.approx(expected, rel=1e-14)


def test_twin_prime_constant():
    c2 = twin_prime_constant(10**4)
    assert c2.tail_bound < 1e-10
    assert c2.value == pytest.approx(0.6601618158468696, abs=1e-15)
    assert c2.value == pytest.approx(twin_prime_direct(10**6), rel=1e-9)


def test_hl_binary():
    assert odd_prime_product(30) == Fraction(8, 3)
    c2 = twin_prime_constant(10**4).value
    v = hl_binary(30, 10**4).value
    assert v == pytest.approx(2 * c2 * 30 / math.log(30) ** 2 * 8 / 3)
    assert hl_binary(64).value == pytest.approx(2 * c2 * 64 / math.log(64) ** 2)
    with pytest.raises(InvalidArgument):
        hl_binary(31)


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
def test_local_counts_by_enumeration(p):
    counts = unit_square_counts(p)
    for N in range(p):
        assert counts[N] == square_solutions_mod(p, N)
    assert sum(counts) == (p - 1) ** 5


def test_conservation_up_to_fifty():
    for p in (17, 19, 23, 29, 31, 37, 41, 43, 47):
        assert sum(unit_square_counts(p)) == (p - 1) ** 5
    c = unit_square_counts(23)
    assert c[0] != c[1]


def test_local_density_values():
    assert local_density(2, 29) == 8
    assert local_density(3, 29) == 3
    for p in (211, 401, 997):
        for N in (29, 53, 10**6 + 13):
            assert abs(float(local_density(p, N)) - 1) < 0.01
            assert abs(float(local_density(p, N)) - 1) <= density_deviation_bound(p)


def test_quinary_series():
    s = singular_series_quinary(29, 1000)
    assert s.value > 0.1 and 0 < s.tail_bound < 0.05
    with pytest.raises(InvalidArgument):
        singular_series_quinary(30)


@pytest.mark.parametrize("N", [101, 1001])
def test_ternary_integral_against_adaptive(N):
    assert ternary_integral(N) == pytest.approx(ternary_integral_reference(N), rel=1e-4)


def test_main_terms():
    N = 10**5 + 3
    g = singular_series_ternary(N, 10**5).value
    assert main_term(N, TERNARY_LOG) == pytest.approx(g * N * N / (2 * math.log(N) ** 3))
    assert main_term(10**5 + 1, TERNARY_INTEGRAL) > main_term(10**5 + 1, TERNARY_LOG)
    M = 10**6 + 13
    gq = singular_series_quinary(M, 1000).value
    assert main_term(M, QUINARY) == pytest.approx(gq * 0.41123351671205660 * M**1.5 / math.log(M) ** 5)
    with pytest.raises(InvalidArgument):
        main_term(99, TERNARY_LOG)
    with pytest.raises(InvalidArgument):
        main_term(10**6 + 5, QUINARY)
