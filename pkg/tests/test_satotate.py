import math

import numpy as np
import pytest
from scipy import integrate

from oracles import tuples
from wglab.errors import InvalidArgument
from wglab.hecke import hecke_for
from wglab.repcount import count_quinary_squares, count_ternary
from wglab.satotate import (
    FULL,
    MAJORANT,
    MINORANT,
    AngleInterval,
    a_term,
    coefficient_bound,
    count_angles,
    count_J_with_angle,
    default_delta,
    equidistribution_report,
    smoothed_count,
    st_measure,
    twisted_sum,
    twisted_sums,
    vaaler_smoothing,
)


def st_quad(lo, hi):
    return integrate.quad(lambda t: 2 / math.pi * math.sin(t) ** 2, lo, hi, epsabs=1e-14, epsrel=1e-13)[0]


def test_measure_examples():
    assert st_measure(FULL) == 1
    assert st_measure(AngleInterval(0, math.pi / 2)) == 0.5
    third = AngleInterval(math.pi / 3, 2 * math.pi / 3)
    assert st_measure(third) == pytest.approx(1 / 3 + math.sqrt(3) / (2 * math.pi), abs=1e-15)
    assert st_measure(third) == pytest.approx(st_quad(third.lo, third.hi), abs=1e-12)


def test_interval_validation():
    with pytest.raises(InvalidArgument):
        AngleInterval(1.0, 0.5)
    with pytest.raises(InvalidArgument):
        AngleInterval(-0.1, 1.0)
    with pytest.raises(InvalidArgument):
        AngleInterval(0.0, 4.0)


def test_count_angles():
    assert count_angles(100, FULL) == 25
    t2 = hecke_for(10).theta_at(2)
    assert count_angles(2, AngleInterval(t2, t2)) == 1
    share = count_angles(10**4, AngleInterval(0, math.pi / 2)) / 1229
    assert abs(share - 0.5) < 0.05


def test_twisted_examples():
    t = hecke_for(100)
    assert twisted_sum(9, 1, 3, 0) == 4
    assert twisted_sum(9, 1, 3, 1) == pytest.approx(2 * t.lambda_at(2) + t.lambda_at(5) + t.lambda_at(3))
    assert twisted_sum(200, 2, 5, 0) == count_quinary_squares(200)
    for N in (101, 555):
        d = twisted_sum(N, 1, 3, 2, "tensor") - twisted_sum(N, 1, 3, 2, "adjoint")
        assert round(d) == count_ternary(N)
    with pytest.raises(InvalidArgument):
        twisted_sum(9, 1, 2, 1)


def test_twisted_against_tuple_enumeration():
    t = hecke_for(200)
    for N, k, u in ((31, 1, 3), (61, 1, 3), (93, 2, 5), (165, 2, 5)):
        for j in (1, 3):
            brute = sum(float(np.sin((j + 1) * t.theta_at(p[0])) / np.sin(t.theta_at(p[0]))) for p in tuples(N, k, u))
            assert twisted_sum(N, k, u, j) == pytest.approx(brute, abs=1e-9)


def test_twisted_many_matches_single():
    Ns = [1001, 1003, 1005]
    many = twisted_sums(Ns, 1, 3, 2, "tensor")
    assert np.allclose(many, [twisted_sum(n, 1, 3, 2, "tensor") for n in Ns])


def test_count_with_angle():
    assert count_J_with_angle(1001, FULL) == count_ternary(1001)
    t2 = hecke_for(10).theta_at(2)
    assert count_J_with_angle(9, AngleInterval(t2, t2)) == 2
    assert count_J_with_angle(5, FULL) == 0


@pytest.fixture(scope="module", params=[MAJORANT, MINORANT])
def smoother(request):
    return vaaler_smoothing(AngleInterval(math.pi / 3, 2 * math.pi / 3), 0.05, 2, request.param)


def test_smoothing_sandwich(smoother):
    G = smoother
    th = np.linspace(0, math.pi, 100_001)
    vals = G(th)
    chi = ((th >= G.interval.lo) & (th <= G.interval.hi)).astype(float)
    assert np.all(vals >= -1e-12) and np.all(vals <= 1 + 1e-12)
    if G.side == MAJORANT:
        assert np.all(vals >= chi - 1e-12)
    else:
        assert np.all(vals <= chi + 1e-12)


def test_smoothing_flat_and_zero(smoother):
    G = smoother
    y = np.linspace(G.a + G.delta / 2, G.b - G.delta / 2, 1001)
    assert np.allclose(G.g(y), 1.0, atol=1e-12)
    out = np.linspace(G.b + G.delta / 2, 1 + G.a - G.delta / 2, 1001)
    assert np.allclose(G.g(out), 0.0, atol=1e-12)
    assert G(np.array([math.pi / 2]))[0] == pytest.approx(1.0, abs=1e-12)


def test_smoothing_coefficients(smoother):
    G = smoother
    n = np.arange(1, len(G.a_coeffs))
    assert np.all(np.abs(G.a_coeffs[1:]) <= coefficient_bound(n, G.base, G.delta, G.R))
    assert G.tail_bound < 1e-9
    assert np.allclose(G.cheb_coeffs[1:], G.a_coeffs[1 : G.n_max + 1] - G.a_coeffs[3 : G.n_max + 3])


def test_series_agree_with_closed_form(smoother):
    G = smoother
    th, closed, cos_series, cheb_series = G.grid(100_001)
    assert np.max(np.abs(closed - cos_series)) <= G.tail_bound + 1e-12
    assert np.max(np.abs(closed - cheb_series)) <= G.chebyshev_tail_bound + 1e-12
    pts = np.array([0.0, 0.3, 1.2, math.pi])
    assert np.allclose(G.series(pts), G(pts), atol=1e-9)
    assert np.allclose(G.chebyshev(pts), G(pts), atol=2e-9)


def test_mean_close_to_measure():
    I = FULL
    for delta in (0.05, 0.1, 0.2):
        G = vaaler_smoothing(AngleInterval(0.0, math.pi), delta, 2, MINORANT)
        assert abs(G.mean_st() - st_measure(I)) <= 10 * delta
    G = vaaler_smoothing(AngleInterval(math.pi / 3, 2 * math.pi / 3), 0.05, 2, MAJORANT)
    num = integrate.quad(lambda t: float(G(np.array([t]))[0]) * 2 / math.pi * math.sin(t) ** 2, 0, math.pi, limit=200)[0]
    assert G.mean_st() == pytest.approx(num, abs=1e-7)


def test_smoothing_rejects_bad_delta():
    I = AngleInterval(1.0, 1.2)
    with pytest.raises(InvalidArgument):
        vaaler_smoothing(I, 0.6)
    with pytest.raises(InvalidArgument):
        vaaler_smoothing(I, 0.2, side=MINORANT)


def test_default_delta_valid():
    for I in (FULL, AngleInterval(0, math.pi / 2), AngleInterval(math.pi / 3, 2 * math.pi / 3)):
        for side in (MAJORANT, MINORANT):
            d = default_delta(10**5, I, side)
            G = vaaler_smoothing(I, d, 2, side) if d > 0.01 else None
            assert 0 < d < 0.5
            if G is not None:
                assert G.tail_bound < 1e-9


def test_smoothed_count_interchange():
    G = vaaler_smoothing(AngleInterval(0, math.pi / 2), 0.1, 2, MAJORANT)
    direct, expanded = smoothed_count(3001, G)
    assert expanded == pytest.approx(direct, abs=G.chebyshev_tail_bound * count_ternary(3001) + 1e-6)
    assert direct >= count_J_with_angle(3001, AngleInterval(0, math.pi / 2))
    assert math.isfinite(a_term(3001, 0.1))


def test_equidistribution_report():
    rows = equidistribution_report([1001, 10001], FULL)
    assert all(r["discrepancy"] == pytest.approx(0, abs=1e-15) for r in rows)
    row = equidistribution_report([100_001], AngleInterval(0, math.pi / 2))[0]
    assert row["count_J_I"] <= row["count_J"]
