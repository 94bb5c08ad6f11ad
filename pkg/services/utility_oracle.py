"""
Conditional expected CARA utilities of both trader types and a
grid-refinement maximiser.

Closed-form demands are checked against the brute-force argmax of these
curves. Utilities are assembled in log space: log(-U) is a quadratic in
theta plus a difference of two log normal masses, so large positions never
overflow or underflow.
"""

import logging

import numpy as np

from config import Config
from models import GridSearchSpec
from services import equilibrium
from services import truncnorm_kernel as kernel
from utils.errors import BracketError, OutOfImageError

logger = logging.getLogger(__name__)


def _check_price(price, range_):
    if not range_.v_lo < price < range_.v_hi:
        raise OutOfImageError(f'price {price!r} outside ({range_.v_lo!r}, {range_.v_hi!r})')


def _log_neg_utility(theta, price, mean, variance, range_, gamma, D0):
    """log(-U) for wealth D0 + theta*(v - p), v ~ N(mean, variance) truncated to range_."""
    theta = np.asarray(theta, dtype=float)
    sigma = np.sqrt(variance)
    shift = gamma * variance * theta
    log_shifted = kernel.log_normal_mass((range_.v_lo + shift - mean) / sigma,
                                         (range_.v_hi + shift - mean) / sigma)
    log_base = kernel.log_normal_mass((range_.v_lo - mean) / sigma, (range_.v_hi - mean) / sigma)
    return (-gamma * D0 + gamma * (price - mean) * theta
            + 0.5 * gamma ** 2 * variance * theta ** 2 + log_shifted - log_base)


def log_neg_utility_informed(theta, price, u_tilde, range_, params):
    _check_price(price, range_)
    return _log_neg_utility(theta, price, u_tilde, params.sigma_eps2, range_, params.gamma, params.D0)


def log_neg_utility_uninformed(theta, price, range_, coef, params):
    _check_price(price, range_)
    x = kernel.invert_J(range_, params.sigma_eps, price)
    mu_eta = equilibrium.posterior_mean(coef, params, x)
    sigma_eta2 = equilibrium.posterior_variance(coef)
    return _log_neg_utility(theta, price, mu_eta, sigma_eta2, range_, params.gamma, params.D0)


def utility_informed(theta, price, u_tilde, range_, params):
    """
    Expected utility of an informed trader holding theta at price p, given
    u = u_tilde and v in the disclosed range. Strictly negative.
    """
    return -np.exp(log_neg_utility_informed(theta, price, u_tilde, range_, params))


def utility_uninformed(theta, price, range_, coef, params):
    """
    Expected utility of an uninformed trader holding theta at price p, with
    the posterior N(mu_eta, sigma_eta^2) inferred from p and truncated to the range.
    Includes the exp(-gamma*D0) endowment factor.
    """
    return -np.exp(log_neg_utility_uninformed(theta, price, range_, coef, params))


def marginal_factor(theta, price, u_tilde, range_, params):
    """L(theta) = J(u - gamma*sigma_eps^2*theta) - p; positive below the optimum, negative above."""
    t = u_tilde - params.gamma * params.sigma_eps2 * np.asarray(theta, dtype=float)
    return kernel.eval_J(range_, params.sigma_eps, t) - price


def argmax_utility(f, spec):
    """
    Maximise a unimodal curve by grid search with bracket refinement.

    Args:
        f: vectorised callable theta -> objective
        spec: GridSearchSpec

    Returns:
        theta at the refined grid maximum

    Raises:
        BracketError: the maximum sits on the initial bracket edge
    """
    lo, hi = spec.theta_min, spec.theta_max
    for round_ in range(spec.refine_rounds + 1):
        grid = np.linspace(lo, hi, spec.n_points)
        values = np.asarray(f(grid), dtype=float)
        i = int(np.argmax(values))
        if round_ == 0 and i in (0, spec.n_points - 1):
            raise BracketError(f'argmax at bracket edge {grid[i]!r} of [{lo!r}, {hi!r}]')
        i = min(max(i, 1), spec.n_points - 2)
        lo, hi = grid[i - 1], grid[i + 1]
    return float(grid[i])


def default_bracket(center, n_points=None, refine_rounds=None, scale=1.0):
    half = 10.0 * scale * (1.0 + abs(center))
    return GridSearchSpec(
        theta_min=center - half,
        theta_max=center + half,
        n_points=Config.GRID_POINTS if n_points is None else n_points,
        refine_rounds=Config.GRID_REFINE_ROUNDS if refine_rounds is None else refine_rounds,
    )


def maximize_demand(objective, center, n_points=None, refine_rounds=None):
    """argmax_utility over the default bracket around center, widened once on an edge hit."""
    try:
        return argmax_utility(objective, default_bracket(center, n_points, refine_rounds))
    except BracketError:
        logger.debug(f'Bracket around {center!r} too small, widening')
        return argmax_utility(objective, default_bracket(center, n_points, refine_rounds, scale=10.0))


def oracle_informed_demand(price, u_tilde, range_, params, **grid):
    """Brute-force informed demand, centred on the no-disclosure closed form."""
    center = (u_tilde - price) / (params.gamma * params.sigma_eps2)
    return maximize_demand(
        lambda th: -log_neg_utility_informed(th, price, u_tilde, range_, params), center, **grid)


def oracle_uninformed_demand(price, range_, coef, params, **grid):
    x = kernel.invert_J(range_, params.sigma_eps, price)
    mu_eta = equilibrium.posterior_mean(coef, params, x)
    center = (mu_eta - price) / (params.gamma * equilibrium.posterior_variance(coef))
    return maximize_demand(
        lambda th: -log_neg_utility_uninformed(th, price, range_, coef, params), center, **grid)
