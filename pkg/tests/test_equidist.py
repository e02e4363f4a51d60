import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import discrepancy_1d_brute, discrepancy_2d_brute
from psthue.digits import PeriodicDigitModel
from psthue.equidist import (
    PointSet, StepFunction, box_deviation, discrepancy_1d, discrepancy_2d, etk_bound,
    frac_window_count, grid_discrepancy_2d, indicator_fourier_expansion, interval_deviation,
    koksma_hlawka_check, mean_square_discrepancy_estimate, star_discrepancy_1d,
)
from psthue.errors import DomainError, SizeError


def _dyadic(rng, n, dim=1, bits=6):
    # coordinates on a coarse dyadic grid so ties and shared coordinates occur
    shape = (n,) if dim == 1 else (n, 2)
    return rng.integers(0, 2**bits, size=shape) / 2.0**bits


def test_basic_values():
    assert discrepancy_1d(PointSet(1, np.arange(8) / 8)).value == 1 / 8
    assert discrepancy_1d(PointSet(1, np.array([0.0]))).value == 1.0
    assert discrepancy_1d(PointSet(1, np.full(5, 0.3))).value == 1.0
    assert discrepancy_2d(PointSet(2, np.array([[0.0, 0.0]]))).value == 1.0


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 31), min_size=1, max_size=25))
def test_1d_matches_brute_force(cells):
    x = np.array(cells) / 32.0
    assert discrepancy_1d(PointSet(1, x)).value == float(discrepancy_1d_brute(x))


def test_2d_matches_brute_force_on_lattice_and_random():
    g = np.arange(8) / 8
    lat = np.array([(i, j) for i in g for j in g])
    assert discrepancy_2d(PointSet(2, lat)).value == float(discrepancy_2d_brute(lat))
    rng = np.random.default_rng(11)
    for _ in range(8):
        P = _dyadic(rng, int(rng.integers(1, 15)), 2, bits=3)
        assert discrepancy_2d(PointSet(2, P)).value == float(discrepancy_2d_brute(P))


def test_witness_reproduces_value():
    rng = np.random.default_rng(5)
    x = rng.random(300)
    r = discrepancy_1d(PointSet(1, x))
    (a, b), closed = r.witness
    assert abs(interval_deviation(x, a, b, closed) - r.value) <= 1e-12
    P = rng.random((60, 2))
    r = discrepancy_2d(PointSet(2, P))
    xr, yr, closed = r.witness
    assert abs(box_deviation(P, xr, yr, closed) - r.value) <= 1e-12


def test_projection_monotone():
    rng = np.random.default_rng(7)
    P = rng.random((80, 2))
    d2 = discrepancy_2d(PointSet(2, P)).value
    assert d2 >= discrepancy_1d(PointSet(1, P[:, 0])).value
    assert d2 >= discrepancy_1d(PointSet(1, P[:, 1])).value


def test_star_discrepancy_relation():
    x = np.random.default_rng(2).random(100)
    d = discrepancy_1d(PointSet(1, x)).value
    ds = star_discrepancy_1d(x)
    assert ds <= d <= 2 * ds + 1e-15


def test_2d_size_guard():
    with pytest.raises(SizeError):
        discrepancy_2d(PointSet(2, np.zeros((5001, 2))))


def test_grid_bounds_enclose_exact():
    rng = np.random.default_rng(13)
    for _ in range(50):
        P = rng.random((int(rng.integers(1, 500)), 2))
        ps = PointSet(2, P)
        lo, hi = grid_discrepancy_2d(ps, 64)
        d = discrepancy_2d(ps).value
        assert lo - 1e-12 <= d <= hi + 1e-12
    lo, hi = grid_discrepancy_2d(PointSet(2, np.array([[0.3, 0.6]])), 16)
    assert lo <= 1 <= hi


def test_grid_bounds_tighten():
    P = np.random.default_rng(1).random((40, 2))
    d = discrepancy_2d(PointSet(2, P)).value
    gaps = [np.subtract(*grid_discrepancy_2d(PointSet(2, P), G)[::-1]) for G in (16, 64, 256)]
    assert gaps[0] > gaps[1] > gaps[2]
    lo, hi = grid_discrepancy_2d(PointSet(2, P), 256)
    assert lo <= d <= hi and hi - lo < 0.05


def test_etk_bracket_values():
    N = 32
    eq = PointSet(1, np.arange(N) / N)
    assert etk_bound(eq, 8) == pytest.approx(1 / 8, abs=1e-12)
    x = np.array([0.1, 0.35, 0.8])
    direct = 1 + 2 * abs(np.exp(2j * np.pi * x).mean())
    assert etk_bound(PointSet(1, x), 1) == pytest.approx(direct)
    single = PointSet(1, np.array([0.0]))
    assert etk_bound(single, 4) == pytest.approx(0.25 + 2 * sum(1 / h for h in range(1, 5)))
    single2 = PointSet(2, np.array([[0.0, 0.0]]))
    assert etk_bound(single2, 3) >= 1


def test_etk_with_constant_six():
    rng = np.random.default_rng(17)
    for _ in range(30):
        ps = PointSet(1, rng.random(int(rng.integers(1, 400))))
        d = discrepancy_1d(ps).value
        for H in (8, 64):
            assert d <= 6 * etk_bound(ps, H)


def test_fourier_full_interval_and_mean():
    f = indicator_fourier_expansion(0.0, 1.0, 16)
    assert all(abs(t) < 1e-15 for t in f.theta.values())
    g = indicator_fourier_expansion(0.2, 0.7, 32)
    xs = (np.arange(4096) + 0.5) / 4096
    assert g.evaluate(xs).mean() == pytest.approx(0.5 + g.theta0.real / g.H, abs=1e-12)
    assert all(abs(t) <= 1 for t in g.theta.values())
    with pytest.raises(DomainError):
        indicator_fourier_expansion(0.2, 0.7, 5)


def test_fourier_pointwise_error():
    H = 64
    f = indicator_fourier_expansion(0.0, 0.5, H)
    x = (np.arange(10**4) + 0.5) / 10**4
    ind = ((x >= 0) & (x <= 0.5)).astype(float)
    err = np.abs(ind - f.evaluate(x))
    assert err.max() < 0.51
    assert np.all(err <= f.error_majorant(x) + 1e-12)
    dist = np.minimum(np.abs(x - 0.5), np.minimum(x, 1 - x))
    far = dist >= 1 / H
    assert np.all(err[far] <= 2 / (H * dist[far]))


def test_frac_window_count():
    r = frac_window_count(3.0, 0.0, 500, 0, 7)
    assert r.count == 500
    r = frac_window_count(math.sqrt(2), 0.0, 10**4, 3, 10)
    assert abs(r.count - 1000) <= 2 * 10**4 * r.discrepancy
    assert r.residual <= 2
    assert frac_window_count(math.sqrt(3), 0.4, 999, 0, 1).count == 999
    rng = np.random.default_rng(4)
    for _ in range(100):
        T = int(rng.integers(1, 30))
        r = frac_window_count(float(rng.random() * 50), float(rng.random()), int(rng.integers(1, 2000)),
                              int(rng.integers(0, T)), T)
        assert r.residual <= 2


def test_koksma_hlawka_examples():
    const = StepFunction.create([0.0, 0.4, 1.0], [2.0, 2.0])
    ps = PointSet(1, np.random.default_rng(0).random(50))
    assert koksma_hlawka_check(const, ps).err < 1e-15
    model = PeriodicDigitModel.build(3)
    tm = StepFunction.create(np.arange(9) / 8, model.signs().astype(float))
    N = 64
    r = koksma_hlawka_check(tm, PointSet(1, np.arange(N) / N))
    assert r.err <= r.variation / N + 1e-15
    assert tm.integral() == 0.0


def test_koksma_hlawka_2d_product():
    rng = np.random.default_rng(9)
    for _ in range(20):
        f = StepFunction.create(np.r_[0, np.sort(rng.random(3)), 1], rng.normal(size=4))
        g = StepFunction.create(np.r_[0, np.sort(rng.random(2)), 1], rng.normal(size=3))
        h = StepFunction.product(f, g)
        pts = rng.random((int(rng.integers(5, 60)), 2))
        r = koksma_hlawka_check(h, PointSet(2, pts))
        assert r.err <= r.bound * (1 + 1e-9) + 1e-12
        # integral of a product is the product of integrals
        assert h.integral() == pytest.approx(f.integral() * g.integral())


def test_malformed_step_function():
    with pytest.raises(DomainError):
        StepFunction.create([0.0, 0.5, 0.4, 1.0], [1.0, 2.0, 3.0])
    with pytest.raises(DomainError):
        StepFunction.create([0.0, 1.0], [1.0, 2.0])


def test_mean_square_small_cases():
    r = mean_square_discrepancy_estimate(3, 500, 1)
    assert 0 < r.mean < 1
    a = mean_square_discrepancy_estimate(50, 1, 42)
    b = mean_square_discrepancy_estimate(50, 1, 42)
    assert (a.mean, a.ratio) == (b.mean, b.ratio)
    r3 = mean_square_discrepancy_estimate(10**3, 100, 3)
    r4 = mean_square_discrepancy_estimate(10**4, 100, 4)
    assert 0.25 <= r4.ratio / r3.ratio <= 4
    with pytest.raises(DomainError):
        mean_square_discrepancy_estimate(2, 10, 0)


def test_point_set_validation():
    with pytest.raises(DomainError):
        PointSet(1, np.array([1.0]))
    with pytest.raises(DomainError):
        PointSet(3, np.zeros((2, 3)))
    assert PointSet.from_values(np.array([-1e-20, 2.25])).points.tolist() == [0.0, 0.25]
