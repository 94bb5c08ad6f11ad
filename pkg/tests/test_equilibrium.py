import pytest
from hypothesis import given, settings, strategies as st

from models import MarketParams, MarketState, Range
from services import equilibrium
from services.premium import b0_closed_form, b0_printed_form
from services.statics import state_for_index
from utils.errors import DomainError, OutOfImageError


def test_figure_coefficients(coef_star):
    assert coef_star.tau == pytest.approx(0.82463, abs=1e-5)
    assert coef_star.alpha == pytest.approx(6.18472, abs=1e-5)
    assert coef_star.beta == pytest.approx(-149.532, abs=2e-3)
    assert coef_star.B0 == pytest.approx(-128.916, abs=2e-3)
    assert coef_star.sigma_X2 == pytest.approx(195.33, abs=1e-2)
    assert coef_star.omega1 + coef_star.omega2 == pytest.approx(1.0, abs=1e-15)


def test_small_market_coefficients(small_params):
    coef = equilibrium.solve_coefficients(small_params)
    assert coef.tau == pytest.approx(6 / 7, rel=1e-14)
    assert coef.alpha == pytest.approx(6 / 7, rel=1e-14)
    assert coef.beta == pytest.approx(2 / 7, rel=1e-12)
    assert coef.omega1 == pytest.approx(1 / 3, rel=1e-14)
    assert coef.sigma_eta2 == pytest.approx(4 / 3, rel=1e-14)
    assert coef.B0 == pytest.approx(62 / 7, rel=1e-13)
    assert coef.theta == pytest.approx(-8 / 7, rel=1e-12)


def test_posterior_variance_below_prior(small_params):
    coef = equilibrium.solve_coefficients(small_params)
    assert equilibrium.posterior_variance(coef) == pytest.approx(4 / 3, rel=1e-14)
    assert equilibrium.posterior_variance(coef) < small_params.sigma_eps2 + small_params.sigma_u2
    assert equilibrium.posterior_variance(coef) > small_params.sigma_eps2


def test_clearing_system_solved(p_star, coef_star, small_params):
    for residual in equilibrium.clearing_system_residuals(p_star, coef_star):
        assert residual == pytest.approx(0.0, abs=1e-10)
    coef = equilibrium.solve_coefficients(small_params)
    for residual in equilibrium.clearing_system_residuals(small_params, coef):
        assert residual == pytest.approx(0.0, abs=1e-12)


def test_b0_closed_form(p_star, coef_star):
    assert b0_closed_form(p_star, coef_star) == pytest.approx(coef_star.B0, abs=1e-10)
    assert coef_star.theta == pytest.approx(coef_star.B0 - p_star.mu0, abs=1e-12)


def test_printed_form_differs_only_off_unit_risk_aversion(p_star):
    assert abs(b0_printed_form(p_star).gap) > 1e-3
    unit = MarketParams(gamma=1.0, mu0=25.0, sigma_u2=6.0, sigma_eps2=1.0, sigma_y2=5.0, x_I=0.4, Z=25.0)
    diag = b0_printed_form(unit)
    assert diag.gap == pytest.approx(0.0, abs=1e-9)


def test_zero_supply_puts_b0_at_mean():
    params = MarketParams(gamma=2.0, mu0=12.0, sigma_u2=3.0, sigma_eps2=1.5, sigma_y2=2.0, x_I=0.3, Z=0.0)
    coef = equilibrium.solve_coefficients(params)
    assert coef.B0 == pytest.approx(12.0, abs=1e-12)


@pytest.mark.parametrize('kwargs', [
    {'x_I': 1.0}, {'x_I': 0.0}, {'gamma': 0.0}, {'sigma_u2': -1.0}, {'mu0': float('nan')},
])
def test_invalid_parameters(kwargs):
    base = dict(gamma=3.0, mu0=25.0, sigma_u2=6.0, sigma_eps2=1.0, sigma_y2=5.0, x_I=0.4, Z=25.0)
    base.update(kwargs)
    with pytest.raises(DomainError):
        MarketParams(**base)


# ── Prices ───────────────────────────────────────────────────────────────────

def test_price_at_range_centre(p_star, coef_star, fig1_range):
    state = state_for_index(coef_star, 25.0)
    assert equilibrium.price_baseline(coef_star, state) == pytest.approx(25.0, abs=1e-12)
    assert equilibrium.price_with_range(coef_star, fig1_range, p_star.sigma_eps, state) == pytest.approx(25.0, abs=1e-10)


def test_price_pinned_near_lower_bound_far_below(p_star, coef_star, fig1_range):
    state = MarketState(u_tilde=0.0, y_tilde=3.0)
    x = coef_star.signal_index(state)
    assert x < 0.0
    price = equilibrium.price_with_range(coef_star, fig1_range, p_star.sigma_eps, state)
    assert 0.0 < price - 22.0 < 1.0 / (22.0 - x) * 1.001


def test_informed_demand_price_form_matches_state_form(p_star, coef_star, fig1_range):
    state = state_for_index(coef_star, 26.3, y_tilde=1.5)
    price = equilibrium.price_with_range(coef_star, fig1_range, p_star.sigma_eps, state)
    by_state = equilibrium.informed_demand(coef_star, fig1_range, p_star.sigma_eps2, p_star.gamma, state)
    by_price = equilibrium.informed_demand_at_price(fig1_range, p_star.sigma_eps2, p_star.gamma, price, state.u_tilde)
    assert by_price == pytest.approx(by_state, rel=1e-8)


def test_uninformed_demand_needs_price_inside_range(p_star, coef_star, fig1_range):
    with pytest.raises(OutOfImageError):
        equilibrium.uninformed_demand(coef_star, fig1_range, p_star.sigma_eps, p_star.gamma, p_star.mu0, 30.0)


def test_posterior_forms_agree_at_midpoint(p_star, coef_star, fig1_range):
    price = fig1_range.midpoint
    linear = equilibrium.uninformed_demand(coef_star, fig1_range, p_star.sigma_eps, p_star.gamma, p_star.mu0, price)
    posterior = equilibrium.uninformed_demand_posterior(coef_star, fig1_range, p_star, price)
    assert posterior == pytest.approx(linear, rel=1e-9, abs=1e-9)


def test_baseline_market_clears(p_star, coef_star):
    for state in (MarketState(0.0, 0.0), MarketState(6.0, 10.0), MarketState(-40.0, 3.0)):
        assert equilibrium.baseline_clearing_residual(p_star, coef_star, state) == pytest.approx(0.0, abs=1e-9)


@given(st.floats(min_value=-10.0, max_value=10.0), st.floats(min_value=-5.0, max_value=5.0))
@settings(max_examples=100, deadline=None)
def test_range_market_clears(offset, y_tilde):
    params = MarketParams(gamma=3.0, mu0=25.0, sigma_u2=6.0, sigma_eps2=1.0, sigma_y2=5.0, x_I=0.4, Z=25.0)
    coef = equilibrium.solve_coefficients(params)
    range_ = Range(22.0, 28.0)
    state = state_for_index(coef, 25.0 + offset, y_tilde)
    residual = equilibrium.clearing_residual(params, coef, range_, state)
    assert residual == pytest.approx(0.0, abs=1e-7)
