import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import stats

from models import NoiseScale, Range
from services import truncnorm_kernel as kernel
from utils.errors import DomainError, OutOfImageError

FIG1 = Range(22.0, 28.0)

centers = st.floats(min_value=-50, max_value=50, allow_nan=False, allow_infinity=False)
half_widths = st.floats(min_value=0.25, max_value=6.0)
sigmas = st.floats(min_value=0.2, max_value=5.0)
offsets = st.floats(min_value=-10.0, max_value=10.0)


def test_symmetric_range_gives_midpoint():
    assert kernel.eval_J(FIG1, 1.0, 25.0) == pytest.approx(25.0, abs=1e-12)
    assert kernel.eval_J(Range(-1.0, 1.0), 1.0, 0.0) == pytest.approx(0.0, abs=1e-15)


def test_far_above_range_decays_algebraically():
    gap = 28.0 - kernel.eval_J(FIG1, 1.0, 40.0)
    assert 0.07 < gap < 0.09


def test_variance_ratio_at_centre():
    c = 3.0
    expected = 1.0 - 2.0 * c * stats.norm.pdf(c) / (2.0 * stats.norm.cdf(c) - 1.0)
    assert kernel.eval_H(FIG1, 1.0, 25.0) == pytest.approx(expected, rel=1e-10)
    assert kernel.eval_H(FIG1, 1.0, 25.0) == pytest.approx(0.97334, abs=1e-5)


def test_wide_range_slope_near_one():
    t = 3.0
    assert kernel.eval_H(Range(t - 10.0, t + 10.0), 1.0, t) >= 0.999


def test_accepts_noise_scale_and_float():
    assert kernel.eval_J(FIG1, NoiseScale(1.5), 26.0) == kernel.eval_J(FIG1, 1.5, 26.0)


@pytest.mark.parametrize('d', [1e2, 1e4, 1e6])
def test_tail_rates(d):
    # J - bound ~ sigma^2/d and H ~ (sigma/d)^2
    terms = kernel.kernel_terms(FIG1, 1.0, 28.0 + d)
    assert (28.0 - terms.J) * d == pytest.approx(1.0, rel=1e-3)
    assert terms.H * d * d == pytest.approx(1.0, rel=1e-3)
    below = kernel.kernel_terms(FIG1, 1.0, 22.0 - d)
    assert (below.J - 22.0) * d == pytest.approx(1.0, rel=1e-3)


def test_boundary_derivatives_symmetric_and_match_differences():
    terms = kernel.kernel_terms(FIG1, 1.0, 25.0)
    assert terms.dJ_dupper == pytest.approx(terms.dJ_dlower, rel=1e-12)
    h = 1e-5
    fd = (kernel.eval_J(Range(22.0, 28.0 + h), 1.0, 25.0) - kernel.eval_J(Range(22.0, 28.0 - h), 1.0, 25.0)) / (2 * h)
    assert fd == pytest.approx(terms.dJ_dupper, rel=1e-6)


def test_upper_derivative_negligible_far_below():
    assert 0.0 <= kernel.dJ_dupper(FIG1, 1.0, -60.0) < 1e-12


def test_one_minus_h_is_complement():
    t = np.linspace(15.0, 35.0, 41)
    total = kernel.eval_H(FIG1, 1.0, t) + kernel.eval_one_minus_H(FIG1, 1.0, t)
    np.testing.assert_allclose(total, 1.0, atol=1e-12)
    # strictly positive where H rounds to 1
    assert kernel.eval_one_minus_H(Range(-15.0, 15.0), 1.0, 0.0) > 0.0


def test_vectorised_matches_scalar():
    t = np.array([-100.0, 20.0, 25.0, 27.5, 31.0, 1e5])
    J = kernel.eval_J(FIG1, 1.0, t)
    assert J.shape == t.shape
    for ti, Ji in zip(t, J):
        assert kernel.eval_J(FIG1, 1.0, ti) == pytest.approx(Ji, rel=1e-14)


def test_tail_fractions_match_mills_ratio():
    x = 10.0
    t1, _ = kernel.tail_fractions(x)
    mills = stats.norm.sf(x) / stats.norm.pdf(x)
    assert 1.0 / (x + t1) == pytest.approx(mills, rel=1e-12)


@pytest.mark.parametrize('lo, hi', [(-1.0, 2.0), (0.5, 3.0), (-3.0, -0.5), (2.0, 2.5)])
def test_log_normal_mass_body(lo, hi):
    expected = math.log(stats.norm.cdf(hi) - stats.norm.cdf(lo))
    assert kernel.log_normal_mass(lo, hi) == pytest.approx(expected, rel=1e-10)


def test_log_normal_mass_deep_tail():
    assert kernel.log_normal_mass(40.0, 60.0) == pytest.approx(stats.norm.logsf(40.0), rel=1e-12)
    assert kernel.log_normal_mass(-60.0, -40.0) == pytest.approx(stats.norm.logcdf(-40.0), rel=1e-12)


# ── Errors ───────────────────────────────────────────────────────────────────

def test_degenerate_range_rejected():
    with pytest.raises(DomainError):
        kernel.eval_J(Range(0.0, 1e-12), 1.0, 0.0)
    with pytest.raises(DomainError):
        Range(1.0, 1.0)


def test_non_finite_location_rejected():
    with pytest.raises(DomainError):
        kernel.eval_J(FIG1, 1.0, float('nan'))
    with pytest.raises(DomainError):
        kernel.eval_H(FIG1, 1.0, np.array([0.0, np.inf]))


def test_non_positive_noise_rejected():
    with pytest.raises(DomainError):
        kernel.eval_J(FIG1, 0.0, 25.0)


# ── Inverse ──────────────────────────────────────────────────────────────────

def test_invert_midpoint():
    assert kernel.invert_J(FIG1, 1.0, 25.0) == pytest.approx(25.0, abs=1e-9)


def test_invert_near_bound():
    t = kernel.invert_J(FIG1, 1.0, 27.9999)
    assert t > 1000.0
    assert abs(kernel.eval_J(FIG1, 1.0, t) - 27.9999) <= 1e-9


@pytest.mark.parametrize('p', [28.0, 22.0, 30.0, 10.0])
def test_invert_outside_image(p):
    with pytest.raises(OutOfImageError):
        kernel.invert_J(FIG1, 1.0, p)


# ── Properties ───────────────────────────────────────────────────────────────

@given(centers, half_widths, sigmas, offsets)
@settings(max_examples=200, deadline=None)
def test_bounds_and_slope(center, half, sigma, offset):
    range_ = Range.centered(center, half * sigma)
    terms = kernel.kernel_terms(range_, sigma, center + offset * sigma)
    assert range_.v_lo < terms.J < range_.v_hi
    assert 0.0 < terms.H < 1.0
    assert terms.dJ_dupper > 0.0 and terms.dJ_dlower > 0.0


@given(centers, half_widths, sigmas, offsets)
@settings(max_examples=200, deadline=None)
def test_slope_is_derivative(center, half, sigma, offset):
    range_ = Range.centered(center, half * sigma)
    t = center + offset * sigma
    h = 1e-3 * sigma
    f = lambda s: kernel.eval_J(range_, sigma, s)
    fd = (-f(t + 2 * h) + 8 * f(t + h) - 8 * f(t - h) + f(t - 2 * h)) / (12 * h)
    assert fd == pytest.approx(kernel.eval_H(range_, sigma, t), rel=1e-6)


@given(centers, half_widths, sigmas, offsets, st.floats(min_value=-20, max_value=20))
@settings(max_examples=200, deadline=None)
def test_translation(center, half, sigma, offset, c):
    range_ = Range.centered(center, half * sigma)
    t = center + offset * sigma
    base = kernel.kernel_terms(range_, sigma, t)
    moved = kernel.kernel_terms(range_.shifted(c), sigma, t + c)
    assert moved.J - c == pytest.approx(base.J, abs=1e-9 * (1 + abs(c) + abs(base.J)))
    assert moved.H == pytest.approx(base.H, abs=1e-9)


@given(centers, half_widths, sigmas, offsets)
@settings(max_examples=200, deadline=None)
def test_reflection(center, half, sigma, offset):
    range_ = Range.centered(center, half * sigma)
    t = center + offset * sigma
    assert kernel.eval_H(range_.mirrored(), sigma, -t) == pytest.approx(kernel.eval_H(range_, sigma, t), abs=1e-12)
    assert kernel.eval_J(range_.mirrored(), sigma, -t) == pytest.approx(-kernel.eval_J(range_, sigma, t), abs=1e-9)


@given(centers, half_widths, sigmas, st.floats(min_value=-8.0, max_value=8.0))
@settings(max_examples=200, deadline=None)
def test_inverse_round_trip(center, half, sigma, offset):
    range_ = Range.centered(center, half * sigma)
    t = center + offset * sigma
    assert kernel.invert_J(range_, sigma, kernel.eval_J(range_, sigma, t)) == pytest.approx(t, abs=1e-9)


@given(st.floats(min_value=-30, max_value=30), st.floats(min_value=0.1, max_value=5))
@settings(max_examples=100, deadline=None)
def test_monotone_in_location(t, step):
    assert kernel.eval_J(FIG1, 1.0, t + step) > kernel.eval_J(FIG1, 1.0, t)


# ── Narrow ranges ────────────────────────────────────────────────────────────

@given(st.floats(min_value=-8.0, max_value=-2.0), st.floats(min_value=-50.0, max_value=50.0))
@settings(max_examples=300, deadline=None)
def test_narrow_range_bounds(log_length, t):
    length = 10.0 ** log_length
    terms = kernel.kernel_terms(Range(0.0, length), 1.0, t)
    assert 0.0 < terms.J < length
    assert 0.0 < terms.H < 1.0
    # nearly uniform inside a short range
    assert terms.H == pytest.approx(length ** 2 / 12.0, rel=0.05)
    assert terms.dJ_dlower > 0.0 and terms.dJ_dupper > 0.0


@pytest.mark.parametrize('length, t', [(1e-6, 2.0), (1e-6, 0.0), (1e-8, 0.0), (1e-8, 5e-9)])
def test_narrow_range_variance(length, t):
    terms = kernel.kernel_terms(Range(0.0, length), 1.0, t)
    assert terms.H == pytest.approx(length ** 2 / 12.0, rel=1e-9)
    assert terms.J == pytest.approx(length / 2.0, rel=1e-6)
    assert terms.dJ_dlower + terms.dJ_dupper == pytest.approx(1.0, rel=1e-9)


@pytest.mark.parametrize('t', [-1.0, 0.0, 0.3, 1.5])
def test_narrow_series_meets_exact_branches(t):
    range_ = Range(0.0, 5e-3)
    series = kernel.kernel_terms(range_, 1.0, t)
    exact = kernel.kernel_terms(range_, 1.0, t, narrow_width=0.0)
    assert series.J == pytest.approx(exact.J, abs=1e-11)
    assert series.H == pytest.approx(exact.H, rel=1e-6)
    assert series.dJ_dlower == pytest.approx(exact.dJ_dlower, rel=1e-8)
    assert series.dJ_dupper == pytest.approx(exact.dJ_dupper, rel=1e-8)


def test_invert_on_narrow_range():
    range_ = Range(0.0, 1e-6)
    t = kernel.invert_J(range_, 1.0, 0.6e-6)
    assert abs(kernel.eval_J(range_, 1.0, t) - 0.6e-6) <= 1e-13
