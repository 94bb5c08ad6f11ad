"""
Experiment runners behind the CLI and the API.

Each runner takes a Scenario and returns either a Table (curves, sweeps)
or a plain dict (equilibrium, premium report), ready for utils.output.
"""

from collections import namedtuple
from dataclasses import replace
import logging

import numpy as np

from models import MarketState
from services import equilibrium, premium, statics
from services import truncnorm_kernel as kernel
from services.scenario import require_range
from utils.errors import ConfigurationError
from utils.output import Table

logger = logging.getLogger(__name__)

MARKET_FIELDS = ('gamma', 'mu0', 'sigma_u2', 'sigma_eps2', 'sigma_y2', 'x_I', 'Z', 'D0')
RANGE_FIELDS = ('v_lo', 'v_hi')
STATE_FIELDS = ('u_tilde', 'y_tilde')


# ── Equilibrium ──────────────────────────────────────────────────────────────

def run_equilibrium(scenario):
    """Coefficients, B0 identities and clearing residuals as one flat record."""
    params = scenario.params
    coef = equilibrium.solve_coefficients(params)
    record = coef.to_dict()
    record['x_U'] = params.x_U
    record['B0_closed_form'] = premium.b0_closed_form(params, coef)
    printed = premium.b0_printed_form(params)
    record['B0_printed_form'] = printed.printed
    record['B0_printed_gap'] = printed.gap
    for i, r in enumerate(equilibrium.clearing_system_residuals(params, coef), start=1):
        record[f'clearing_residual_{i}'] = r
    logger.info(f'Equilibrium: tau={coef.tau!r} alpha={coef.alpha!r} beta={coef.beta!r} B0={coef.B0!r}')
    return record


# ── Curves ───────────────────────────────────────────────────────────────────

def sweep_grid(scenario, coef):
    """
    Sweep values and the matching signal indices X for a curve command.

    Without explicit start/stop the grid is centred on the state that puts
    X at the range midpoint and spans v_m +- 10 sigma_eps in X.

    Returns:
        (values, X) arrays
    """
    range_ = require_range(scenario, 'curve')
    sweep = scenario.sweep
    sigma = scenario.params.sigma_eps
    if sweep.axis == 'u':
        slope, rest = coef.tau, coef.alpha * sweep.fixed_y + coef.beta
    else:
        slope, rest = coef.alpha, coef.tau * sweep.fixed_u + coef.beta

    if sweep.start is None:
        center = (range_.midpoint - rest) / slope
        half = 10.0 * sigma / slope
        start, stop = center - half, center + half
    else:
        start, stop = sweep.start, sweep.stop
    values = np.linspace(start, stop, sweep.steps)
    return values, slope * values + rest


def _axis_slope(coef, axis):
    return coef.tau if axis == 'u' else coef.alpha


def run_price_curve(scenario):
    """p0, p1 and their sensitivities to the swept state variable."""
    range_ = require_range(scenario, 'price-curve')
    coef = equilibrium.solve_coefficients(scenario.params)
    values, X = sweep_grid(scenario, coef)
    terms = kernel.kernel_terms(range_, scenario.params.noise, X)
    slope = _axis_slope(coef, scenario.sweep.axis)
    table = Table.from_columns(
        sweep_value=values,
        price_baseline=X,
        price_range=terms.J,
        sens_baseline=np.full_like(values, slope),
        sens_range=slope * terms.H,
    )
    logger.info(f'Price curve over {scenario.sweep.axis}: {len(table)} rows')
    return table.check_finite()


def run_liquidity_curve(scenario):
    range_ = require_range(scenario, 'liquidity-curve')
    coef = equilibrium.solve_coefficients(scenario.params)
    values, X = sweep_grid(scenario, coef)
    H = kernel.eval_H(range_, scenario.params.noise, X)
    table = Table.from_columns(
        sweep_value=values,
        liquidity_baseline=np.full_like(values, statics.liquidity_baseline(coef)),
        liquidity_range=1.0 / (coef.alpha * H),
    )
    logger.info(f'Liquidity curve over {scenario.sweep.axis}: {len(table)} rows')
    return table.check_finite()


# ── Premium ──────────────────────────────────────────────────────────────────

def run_premium_report(scenario, zero_tol=None, neutral_tol=None):
    """
    Premium0, Premium1, their difference and its classification, the B0
    sign table and the premium sensitivities. A quadrature flag is carried
    in report['flags'].
    """
    range_ = require_range(scenario, 'premium')
    params = scenario.params
    coef = equilibrium.solve_coefficients(params)
    report = premium.delta_premium(coef, range_, params.noise, params.mu0, scenario.quad, zero_tol)
    sensitivities = premium.premium_sensitivities(coef, range_, params.noise, params.mu0, scenario.quad)
    signs = premium.B0_comparative_statics(params)

    out = report.to_dict()
    out['midpoint_class'] = premium.classify_by_midpoint(range_, coef, neutral_tol).value
    out['theta'] = coef.theta
    out['distances'] = premium.premium_distances(range_, params.mu0).to_dict()
    out['sensitivities'] = sensitivities.to_dict()
    out['b0_diagnostic'] = premium.b0_printed_form(params).to_dict()
    out['b0_signs'] = {
        s.parameter: {'derivative': s.derivative, 'expected_sign': s.expected_sign,
                      'sign': s.sign, 'matches': s.matches}
        for s in signs
    }
    logger.info(f'Premium report: delta={report.delta!r} ({report.sign_class.value})')
    return out


# ── Generic sweep ────────────────────────────────────────────────────────────

SweepPoint = namedtuple('SweepPoint', ['params', 'coef', 'range_', 'state', 'quad'])


def _needs_range(fn):
    fn.needs_range = True
    return fn


@_needs_range
def _price_range(pt):
    return equilibrium.price_with_range(pt.coef, pt.range_, pt.params.noise, pt.state)


@_needs_range
def _sens_range(pt):
    return statics.sensitivity_to_signal_range(pt.coef, pt.range_, pt.params.noise, pt.state)


@_needs_range
def _sens_upper(pt):
    return statics.sensitivity_to_upper(pt.coef, pt.range_, pt.params.noise, pt.state)


@_needs_range
def _sens_lower(pt):
    return statics.sensitivity_to_lower(pt.coef, pt.range_, pt.params.noise, pt.state)


@_needs_range
def _range_react(pt):
    return statics.sensitivity_to_range_move(pt.coef, pt.range_, pt.params.noise, pt.state)


@_needs_range
def _liquidity_range(pt):
    return statics.liquidity_range(pt.coef, pt.range_, pt.params.noise, pt.state)


def _premium_report(pt):
    return premium.delta_premium(pt.coef, pt.range_, pt.params.noise, pt.params.mu0, pt.quad)


@_needs_range
def _premium1(pt):
    return _premium_report(pt).premium1


@_needs_range
def _delta_premium(pt):
    return _premium_report(pt).delta


QUANTITIES = {
    'tau': lambda pt: pt.coef.tau,
    'alpha': lambda pt: pt.coef.alpha,
    'beta': lambda pt: pt.coef.beta,
    'B0': lambda pt: pt.coef.B0,
    'theta': lambda pt: pt.coef.theta,
    'sigma_X2': lambda pt: pt.coef.sigma_X2,
    'price_baseline': lambda pt: equilibrium.price_baseline(pt.coef, pt.state),
    'price_range': _price_range,
    'sens_baseline': lambda pt: statics.sensitivity_to_signal_baseline(pt.coef),
    'sens_range': _sens_range,
    'sens_upper': _sens_upper,
    'sens_lower': _sens_lower,
    'range_react': _range_react,
    'liquidity_baseline': lambda pt: statics.liquidity_baseline(pt.coef),
    'liquidity_range': _liquidity_range,
    'premium0': lambda pt: premium.premium_baseline(pt.coef, pt.params.mu0),
    'premium1': _premium1,
    'delta_premium': _delta_premium,
}

SWEEP_PARAMS = MARKET_FIELDS + RANGE_FIELDS + STATE_FIELDS


def _point(scenario, param, value):
    params, range_ = scenario.params, scenario.range
    state = MarketState(scenario.sweep.fixed_u, scenario.sweep.fixed_y)
    if param in MARKET_FIELDS:
        params = replace(params, **{param: value})
    elif param in RANGE_FIELDS:
        if range_ is None:
            raise ConfigurationError(f"sweeping '{param}' needs a disclosed range")
        range_ = replace(range_, **{param: value})
    else:
        state = replace(state, **{param: value})
    return SweepPoint(params, equilibrium.solve_coefficients(params), range_, state, scenario.quad)


def run_sweep(scenario, param, start, stop, steps, quantity):
    """
    One derived quantity over a grid of one market parameter, range bound or
    state component. The other inputs come from the scenario, with the state
    fixed at (sweep.fixed_u, sweep.fixed_y).

    Raises:
        ConfigurationError: unknown parameter or quantity, bad grid, or a
            range-dependent quantity without a range
    """
    if param not in SWEEP_PARAMS:
        raise ConfigurationError(f"unknown sweep parameter '{param}'; choose from {', '.join(SWEEP_PARAMS)}")
    if quantity not in QUANTITIES:
        raise ConfigurationError(f"unknown quantity '{quantity}'; choose from {', '.join(QUANTITIES)}")
    if steps < 2:
        raise ConfigurationError(f'sweep steps must be at least 2, got {steps!r}')
    fn = QUANTITIES[quantity]
    if getattr(fn, 'needs_range', False) and scenario.range is None:
        raise ConfigurationError(f"quantity '{quantity}' needs a disclosed range")

    values = np.linspace(start, stop, steps)
    results = [fn(_point(scenario, param, float(v))) for v in values]
    logger.info(f'Sweep of {quantity} over {param}: {steps} points')
    return Table(('sweep_value', quantity), zip(values, results)).check_finite()
