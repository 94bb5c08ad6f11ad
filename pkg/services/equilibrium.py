"""
Equilibrium of the disclosed-range market.

Coefficients of the quasi-linear price map X = tau*u + alpha*y + beta, the
range price p1 = J(X), the no-disclosure price p0 = X, and the closed-form
demands of both trader populations.
"""

import logging

from models import EquilibriumCoefficients, NoiseScale
from services import truncnorm_kernel as kernel

logger = logging.getLogger(__name__)


def solve_coefficients(params):
    """
    Closed-form solution of the three clearing equations for (tau, alpha, beta).

    Args:
        params: MarketParams

    Returns:
        EquilibriumCoefficients with omega1, omega2, sigma_eta2, B0, sigma_X2
        and theta = B0 - mu0 filled in
    """
    g, s_e2, s_u2, s_y2 = params.gamma, params.sigma_eps2, params.sigma_u2, params.sigma_y2
    x_I, x_U = params.x_I, params.x_U

    tau = 1.0 - x_U / (1.0 + x_I ** 2 * s_u2 / (g ** 2 * s_e2 ** 2 * s_y2) + x_I * s_u2 / s_e2)
    alpha = g * s_e2 * tau / x_I
    signal_var = tau ** 2 * s_u2 + alpha ** 2 * s_y2
    omega1 = alpha ** 2 * s_y2 / signal_var
    omega2 = tau ** 2 * s_u2 / signal_var
    sigma_eta2 = s_e2 + omega1 * s_u2

    uninformed_weight = x_U / (g * sigma_eta2)
    informed_weight = x_I / (g * s_e2)
    beta = (uninformed_weight * omega1 * params.mu0 - params.Z) / (uninformed_weight + informed_weight)

    B0 = beta + params.mu0 * tau
    coef = EquilibriumCoefficients(
        tau=tau,
        alpha=alpha,
        beta=beta,
        omega1=omega1,
        omega2=omega2,
        sigma_eta2=sigma_eta2,
        B0=B0,
        sigma_X2=signal_var,
        theta=B0 - params.mu0,
    )
    logger.debug(f'Solved coefficients: tau={tau!r} alpha={alpha!r} beta={beta!r}')
    return coef


def clearing_system_residuals(params, coef):
    """Residuals of the signal, noise and constant clearing equations."""
    g, s_e2 = params.gamma, params.sigma_eps2
    x_I, x_U = params.x_I, params.x_U
    tau, alpha, beta = coef.tau, coef.alpha, coef.beta
    slope = coef.omega2 / tau - 1.0
    informed = x_I / (g * s_e2)
    uninformed = x_U / (g * coef.sigma_eta2)
    return (
        informed * (1.0 - tau) + tau * uninformed * slope,
        -alpha * informed + alpha * uninformed * slope + 1.0,
        -beta * informed + uninformed * (coef.omega1 * params.mu0 - beta) - params.Z,
    )


def price_with_range(coef, range_, sigma_eps, state):
    """p1 = J_[v_lo, v_hi](tau*u + alpha*y + beta)."""
    return kernel.eval_J(range_, sigma_eps, coef.signal_index(state))


def price_baseline(coef, state):
    return coef.signal_index(state)


def informed_demand(coef, range_, sigma_eps2, gamma, state):
    """
    Informed demand in state form: ((1 - tau)u - alpha*y - beta) / (gamma*sigma_eps^2).

    The range does not enter: J^-1(p1) is the signal index itself.
    """
    return ((1.0 - coef.tau) * state.u_tilde - coef.alpha * state.y_tilde - coef.beta) / (gamma * sigma_eps2)


def informed_demand_at_price(range_, sigma_eps2, gamma, price, u_tilde):
    """Informed demand in price form: (u - J^-1(p)) / (gamma*sigma_eps^2)."""
    noise = NoiseScale.from_variance(sigma_eps2)
    return (u_tilde - kernel.invert_J(range_, noise, price)) / (gamma * sigma_eps2)


def posterior_mean(coef, params, x):
    """mu_eta = omega1*mu0 + omega2*(x - beta)/tau, x being the recovered signal index."""
    return coef.omega1 * params.mu0 + coef.omega2 * (x - coef.beta) / coef.tau


def posterior_variance(coef):
    """Var[v | p0] of an uninformed trader: sigma_eps^2 + omega1*sigma_u^2."""
    return coef.sigma_eta2


def uninformed_demand(coef, range_, sigma_eps, gamma, mu0, price):
    """
    Uninformed demand at a range price:

        (omega1*mu0 - omega2*beta/tau + (omega2/tau - 1) * J^-1(p)) / (gamma*sigma_eta^2)

    Raises:
        OutOfImageError: price outside (v_lo, v_hi)
    """
    x = kernel.invert_J(range_, sigma_eps, price)
    numerator = (coef.omega1 * mu0 - coef.omega2 * coef.beta / coef.tau
                 + (coef.omega2 / coef.tau - 1.0) * x)
    return numerator / (gamma * posterior_variance(coef))


def uninformed_demand_posterior(coef, range_, params, price):
    """
    Exact maximiser of the uninformed utility with truncation at the posterior scale:
    (mu_eta - J_eta^-1(p)) / (gamma*sigma_eta^2), J_eta being J at sigma_eta.

    Agrees with uninformed_demand wherever J_eta^-1(p) = J^-1(p), e.g. p at the range midpoint.
    """
    x = kernel.invert_J(range_, params.sigma_eps, price)
    mu_eta = posterior_mean(coef, params, x)
    x_eta = kernel.invert_J(range_, coef.sigma_eta, price)
    return (mu_eta - x_eta) / (params.gamma * posterior_variance(coef))


def baseline_demands(coef, params, state):
    """
    Demands of the no-disclosure market at p0.

    Returns:
        (theta_I, theta_U)
    """
    price = price_baseline(coef, state)
    theta_I = (state.u_tilde - price) / (params.gamma * params.sigma_eps2)
    theta_U = (posterior_mean(coef, params, price) - price) / (params.gamma * posterior_variance(coef))
    return theta_I, theta_U


def clearing_residual(params, coef, range_, state):
    """x_I*theta_I + x_U*theta_U + y - Z at the range price implied by state."""
    price = price_with_range(coef, range_, params.sigma_eps, state)
    theta_I = informed_demand(coef, range_, params.sigma_eps2, params.gamma, state)
    theta_U = uninformed_demand(coef, range_, params.sigma_eps, params.gamma, params.mu0, price)
    return params.x_I * theta_I + params.x_U * theta_U + state.y_tilde - params.Z


def baseline_clearing_residual(params, coef, state):
    theta_I, theta_U = baseline_demands(coef, params, state)
    return params.x_I * theta_I + params.x_U * theta_U + state.y_tilde - params.Z

