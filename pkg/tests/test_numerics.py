import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quadphase.exceptions import DomainError, IntegrationError
from quadphase.numerics import (
    Grid1D,
    bessel_i0,
    bessel_i1,
    bessel_ratio,
    integrate,
    log_bessel_i0,
    log_sum_exp_weighted,
)

mpmath.mp.dps = 40


def series_i0(k, terms=200):
    k = mpmath.mpf(k)
    return mpmath.fsum((k / 2) ** (2 * m) / mpmath.factorial(m) ** 2 for m in range(terms))


def series_i1(k, terms=200):
    k = mpmath.mpf(k)
    return mpmath.fsum((k / 2) ** (2 * m + 1) / (mpmath.factorial(m) * mpmath.factorial(m + 1)) for m in range(terms))


def test_series_oracle_reproduces_frozen_values():
    assert float(series_i0(1, 50)) == pytest.approx(1.2660658777520084, rel=1e-15)
    assert float(series_i0(10, 50)) == pytest.approx(2815.716628466254, rel=1e-15)
    assert float(series_i1(1, 50)) == pytest.approx(0.5651591039924851, rel=1e-15)
    assert float(series_i1(10, 50)) == pytest.approx(2670.988303701255, rel=1e-15)


@pytest.mark.parametrize(
    "func, kappa, expected",
    [
        (bessel_i0, 0.0, 1.0),
        (bessel_i0, 1.0, 1.2660658777520084),
        (bessel_i0, 10.0, 2815.716628466254),
        (bessel_i1, 0.0, 0.0),
        (bessel_i1, 1.0, 0.5651591039924851),
        (bessel_i1, 10.0, 2670.988303701255),
    ],
)
def test_bessel_examples(func, kappa, expected):
    assert func(kappa) == pytest.approx(expected, rel=1e-12, abs=0)


@pytest.mark.parametrize("kappa", [0.01, 0.5, 3.0, 14.9, 15.0, 15.1, 29.9, 30.0, 30.1, 45.0, 100.0, 333.3, 700.0])
def test_bessel_relative_error_against_extended_precision(kappa):
    assert bessel_i0(kappa) == pytest.approx(float(mpmath.besseli(0, kappa)), rel=1e-12)
    assert bessel_i1(kappa) == pytest.approx(float(mpmath.besseli(1, kappa)), rel=1e-12)


def test_bessel_dense_sweep_against_series():
    for kappa in np.linspace(0.05, 60.0, 200):
        assert bessel_i0(kappa) == pytest.approx(float(series_i0(kappa)), rel=1e-12)
        assert bessel_i1(kappa) == pytest.approx(float(series_i1(kappa)), rel=1e-12)


@pytest.mark.parametrize("kappa", [700.0, 1000.0, 1e4, 1e6])
def test_log_bessel_beyond_overflow(kappa):
    expected = float(mpmath.log(mpmath.besseli(0, kappa)))
    assert log_bessel_i0(kappa) == pytest.approx(expected, rel=1e-12)


def test_bessel_overflow_returns_inf():
    assert bessel_i0(1000.0) == math.inf


@pytest.mark.parametrize("bad", [-1e-9, -3.0, math.nan, math.inf])
def test_bessel_domain(bad):
    with pytest.raises(DomainError):
        bessel_i0(bad)
    with pytest.raises(DomainError):
        bessel_i1(bad)


def test_bessel_ordering_and_ratio_monotone():
    ks = np.arange(1, 501) * 0.1
    for k in ks:
        assert bessel_i0(k) >= 1.0
        assert bessel_i1(k) < bessel_i0(k)
    ratios = [bessel_ratio(k) for k in ks]
    assert all(b > a for a, b in zip(ratios, ratios[1:]))


@pytest.mark.parametrize("count", [3, 4, 7, 64, 101, 4096])
@pytest.mark.parametrize("periodic", [True, False])
def test_integrate_constant(count, periodic):
    grid = Grid1D(0.0, 2 * math.pi, count, periodic)
    assert integrate(lambda x: 1.0, grid) == pytest.approx(2 * math.pi, abs=1e-12)


@pytest.mark.parametrize("grid", [Grid1D.circle(0, 2 * math.pi, 64), Grid1D.closed(0, 2 * math.pi, 401), Grid1D.closed(0, 2 * math.pi, 1000)])
def test_integrate_sin_squared(grid):
    assert integrate(lambda x: np.sin(x) ** 2, grid) == pytest.approx(math.pi, abs=1e-10)


def test_integrate_gaussian_normalization():
    grid = Grid1D.closed(-8, 8, 2001)
    assert integrate(lambda x: np.exp(-x * x) / math.sqrt(math.pi), grid) == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize("odd_intervals", [False, True])
def test_simpson_fourth_order_convergence(odd_intervals):
    # exp(x) on [0, 1]: C-infinity, not periodic
    exact = math.e - 1.0
    counts = [21, 41, 81, 161]
    if odd_intervals:
        counts = [c + 1 for c in counts]
    errs = [abs(integrate(np.exp, Grid1D.closed(0, 1, c)) - exact) for c in counts]
    orders = [math.log(a / b) / math.log((c2 - 1) / (c1 - 1)) for a, b, c1, c2 in zip(errs, errs[1:], counts, counts[1:])]
    assert min(orders) > 3.8


def test_closed_weights_symmetric():
    for count in (5, 6, 2048, 2049):
        w = Grid1D.closed(0, math.pi, count).weights
        assert np.array_equal(w, w[::-1])
        assert np.all(w > 0)


def test_integrate_reports_offending_node():
    grid = Grid1D.closed(-1, 1, 5)
    with pytest.raises(IntegrationError) as info:
        integrate(lambda x: 1.0 / x, grid)
    assert info.value.node == 0.0


def test_grid_invariants():
    g = Grid1D.circle(0, 2 * math.pi, 16)
    assert g.nodes[0] == 0.0 and g.nodes[-1] < 2 * math.pi
    assert np.all(np.diff(g.nodes) > 0)
    c = Grid1D.closed(0, math.pi, 16)
    assert c.nodes[-1] == math.pi
    with pytest.raises(DomainError):
        Grid1D.closed(0, 1, 2)
    with pytest.raises(DomainError):
        Grid1D.closed(1, 0, 10)


@pytest.mark.parametrize(
    "values, weights, expected",
    [
        ([0.0, 0.0], [1.0, 1.0], math.log(2)),
        ([-1000.0, -1000.0], [0.5, 0.5], -1000.0),
        ([0.0, math.log(3)], [1.0, 1.0], math.log(4)),
    ],
)
def test_log_sum_exp_examples(values, weights, expected):
    assert log_sum_exp_weighted(values, weights) == pytest.approx(expected, abs=1e-12)


def test_log_sum_exp_extreme_negative():
    assert log_sum_exp_weighted([-1e6, -1e6 + math.log(2)], [1.0, 1.0]) == pytest.approx(-1e6 + math.log(3), abs=1e-9)


def test_log_sum_exp_empty():
    with pytest.raises(DomainError):
        log_sum_exp_weighted([], [])
    with pytest.raises(DomainError):
        log_sum_exp_weighted([1.0], [1.0, 2.0])


finite = st.floats(-50, 50, allow_nan=False)


@settings(max_examples=200, deadline=None)
@given(st.lists(finite, min_size=1, max_size=20), st.floats(-1e4, 1e4))
def test_log_sum_exp_shift_invariance(values, c):
    w = np.linspace(0.5, 2.0, len(values))
    shifted = log_sum_exp_weighted(np.array(values) + c, w)
    assert shifted == pytest.approx(log_sum_exp_weighted(values, w) + c, abs=1e-12 * max(1.0, abs(c)))


@settings(max_examples=100, deadline=None)
@given(st.floats(-5, 5), st.floats(-5, 5))
def test_integrate_linear(a, b):
    grid = Grid1D.closed(-2, 3, 301)
    f = lambda x: np.exp(-x * x)
    g = lambda x: np.cos(3 * x) + x ** 3
    lhs = integrate(lambda x: a * f(x) + b * g(x), grid)
    rhs = a * integrate(f, grid) + b * integrate(g, grid)
    assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-12)
