from dataclasses import replace

import numpy as np
import pytest

from models import GridSearchSpec, Range
from services import equilibrium
from services import utility_oracle as oracle
from utils.errors import BracketError, OutOfImageError


def test_argmax_of_parabola():
    spec = GridSearchSpec(-10.0, 10.0, n_points=201, refine_rounds=3)
    theta = oracle.argmax_utility(lambda th: -(th - 1.234) ** 2, spec)
    assert abs(theta - 1.234) <= 2 * spec.resolution


def test_argmax_on_edge_raises():
    with pytest.raises(BracketError):
        oracle.argmax_utility(lambda th: th, GridSearchSpec(-1.0, 1.0))


def test_utility_is_negative(p_star, fig1_range):
    u = oracle.utility_informed(np.array([-5.0, 0.0, 5.0]), 25.0, 25.5, fig1_range, p_star)
    assert np.all(u < 0.0)


def test_large_positions_stay_finite(p_star, fig1_range):
    value = oracle.log_neg_utility_informed(1e4, 25.0, 25.5, fig1_range, p_star)
    assert np.isfinite(value)


def test_price_outside_range(p_star, fig1_range):
    with pytest.raises(OutOfImageError):
        oracle.utility_informed(0.0, 28.5, 25.0, fig1_range, p_star)


def test_marginal_factor_changes_sign_at_demand(p_star, fig1_range):
    price, u_tilde = 25.4, 26.0
    theta = equilibrium.informed_demand_at_price(fig1_range, p_star.sigma_eps2, p_star.gamma, price, u_tilde)
    assert oracle.marginal_factor(theta - 0.1, price, u_tilde, fig1_range, p_star) > 0.0
    assert oracle.marginal_factor(theta + 0.1, price, u_tilde, fig1_range, p_star) < 0.0
    assert oracle.marginal_factor(theta, price, u_tilde, fig1_range, p_star) == pytest.approx(0.0, abs=1e-9)


@pytest.mark.parametrize('price, u_tilde', [(25.0, 25.0), (23.1, 24.0), (27.2, 29.5), (22.4, 18.0)])
def test_informed_oracle_matches_closed_form(p_star, fig1_range, price, u_tilde):
    closed = equilibrium.informed_demand_at_price(fig1_range, p_star.sigma_eps2, p_star.gamma, price, u_tilde)
    brute = oracle.oracle_informed_demand(price, u_tilde, fig1_range, p_star)
    assert brute == pytest.approx(closed, abs=1e-4 * (1 + abs(closed)))


@pytest.mark.parametrize('price', [23.5, 25.0, 26.8])
def test_uninformed_oracle_matches_posterior_form(p_star, coef_star, fig1_range, price):
    closed = equilibrium.uninformed_demand_posterior(coef_star, fig1_range, p_star, price)
    brute = oracle.oracle_uninformed_demand(price, fig1_range, coef_star, p_star)
    assert brute == pytest.approx(closed, abs=1e-4 * (1 + abs(closed)))


def test_uninformed_oracle_matches_linear_form_at_midpoint(p_star, coef_star):
    range_ = Range(20.0, 30.0)
    price = range_.midpoint
    closed = equilibrium.uninformed_demand(coef_star, range_, p_star.sigma_eps, p_star.gamma, p_star.mu0, price)
    brute = oracle.oracle_uninformed_demand(price, range_, coef_star, p_star)
    assert brute == pytest.approx(closed, abs=1e-4 * (1 + abs(closed)))


def test_no_position_has_unit_disutility(p_star, coef_star, fig1_range):
    assert oracle.utility_informed(0.0, 25.0, 26.0, fig1_range, p_star) == -1.0
    assert oracle.utility_uninformed(0.0, 25.0, fig1_range, coef_star, p_star) == -1.0


def test_no_position_carries_endowment_factor(p_star, coef_star, fig1_range):
    rich = replace(p_star, D0=2.0)
    expected = -np.exp(-p_star.gamma * 2.0)
    assert oracle.utility_informed(0.0, 25.0, 26.0, fig1_range, rich) == pytest.approx(expected, rel=1e-14)
    assert oracle.utility_uninformed(0.0, 25.0, fig1_range, coef_star, rich) == pytest.approx(expected, rel=1e-14)


def test_uninformed_utility_is_single_peaked(p_star, coef_star, fig1_range):
    price = 25.4
    peak = equilibrium.uninformed_demand_posterior(coef_star, fig1_range, p_star, price)
    left = oracle.utility_uninformed(np.linspace(peak - 5.0, peak - 0.05, 40), price, fig1_range, coef_star, p_star)
    right = oracle.utility_uninformed(np.linspace(peak + 0.05, peak + 5.0, 40), price, fig1_range, coef_star, p_star)
    at_peak = oracle.utility_uninformed(peak, price, fig1_range, coef_star, p_star)
    assert np.all(np.diff(left) > 0.0)
    assert np.all(np.diff(right) < 0.0)
    assert at_peak > left[-1] and at_peak > right[0]


@pytest.mark.parametrize('D0', [-3.0, 2.0])
def test_endowment_scales_utility(p_star, coef_star, fig1_range, D0):
    shifted = replace(p_star, D0=D0)
    theta = np.linspace(-4.0, 4.0, 9)
    factor = np.exp(-p_star.gamma * D0)
    np.testing.assert_allclose(oracle.utility_uninformed(theta, 24.0, fig1_range, coef_star, shifted),
                               factor * oracle.utility_uninformed(theta, 24.0, fig1_range, coef_star, p_star),
                               rtol=1e-12)
    np.testing.assert_allclose(oracle.utility_informed(theta, 24.0, 25.0, fig1_range, shifted),
                               factor * oracle.utility_informed(theta, 24.0, 25.0, fig1_range, p_star),
                               rtol=1e-12)


@pytest.mark.parametrize('D0', [-3.0, 2.0])
def test_endowment_leaves_demands_unchanged(p_star, coef_star, fig1_range, D0):
    shifted = replace(p_star, D0=D0)
    base = oracle.oracle_uninformed_demand(26.1, fig1_range, coef_star, p_star)
    moved = oracle.oracle_uninformed_demand(26.1, fig1_range, coef_star, shifted)
    assert moved == pytest.approx(base, abs=1e-6 * (1 + abs(base)))
    base = oracle.oracle_informed_demand(26.1, 27.0, fig1_range, p_star)
    moved = oracle.oracle_informed_demand(26.1, 27.0, fig1_range, shifted)
    assert moved == pytest.approx(base, abs=1e-6 * (1 + abs(base)))
