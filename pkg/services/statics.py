"""
Comparative statics of the range price: sensitivities to the private
signal, to each bound and to a move of the whole range, market liquidity,
and probes of their limits as the range moves away or grows rough.
"""

import logging

import numpy as np

from config import Config
from models import Distances, DominantDriver, MarketState, ProbeReport, Range
from services import truncnorm_kernel as kernel

logger = logging.getLogger(__name__)


def sensitivity_to_signal_baseline(coef):
    return coef.tau


def sensitivity_to_signal_range(coef, range_, sigma_eps, state):
    """u_React1 = tau * H(X)."""
    return coef.tau * kernel.eval_H(range_, sigma_eps, coef.signal_index(state))


def sensitivity_to_noise_baseline(coef):
    return coef.alpha


def sensitivity_to_noise_range(coef, range_, sigma_eps, state):
    return coef.alpha * kernel.eval_H(range_, sigma_eps, coef.signal_index(state))


def sensitivity_to_upper(coef, range_, sigma_eps, state):
    return kernel.dJ_dupper(range_, sigma_eps, coef.signal_index(state))


def sensitivity_to_lower(coef, range_, sigma_eps, state):
    return kernel.dJ_dlower(range_, sigma_eps, coef.signal_index(state))


def sensitivity_to_range_move(coef, range_, sigma_eps, state):
    """Range_React1 = 1 - H(X), the price response to shifting both bounds together."""
    return kernel.eval_one_minus_H(range_, sigma_eps, coef.signal_index(state))


def liquidity_baseline(coef):
    return 1.0 / coef.alpha


def liquidity_range(coef, range_, sigma_eps, state):
    return 1.0 / (coef.alpha * kernel.eval_H(range_, sigma_eps, coef.signal_index(state)))


def classify_dominant_driver(coef, range_, sigma_eps, state, tol=None):
    """
    Compare H(X) with 1/(1 + tau): below it the range move outweighs the signal.
    """
    tol = Config.TIE_TOL if tol is None else tol
    gap = kernel.eval_H(range_, sigma_eps, coef.signal_index(state)) - 1.0 / (1.0 + coef.tau)
    if abs(gap) <= tol:
        return DominantDriver.TIE
    return DominantDriver.RANGE_DOMINATES if gap < 0 else DominantDriver.SIGNAL_DOMINATES


def distances(coef, range_, state):
    """Distances of X-hat = tau*u + alpha*y from the range and from each bound."""
    x_hat = coef.centered_index(state)
    if x_hat > range_.v_hi:
        d = x_hat - range_.v_hi
    elif x_hat < range_.v_lo:
        d = range_.v_lo - x_hat
    else:
        d = 0.0
    return Distances(d=d, d_upper=abs(range_.v_hi - x_hat), d_lower=abs(x_hat - range_.v_lo))


def state_for_index(coef, x, y_tilde=0.0):
    """State at the given noise volume whose signal index equals x."""
    return MarketState(u_tilde=(x - coef.alpha * y_tilde - coef.beta) / coef.tau, y_tilde=y_tilde)


# ── Limit probes ─────────────────────────────────────────────────────────────

def limit_probe(sequence, quantity, limit, target=None, name='probe'):
    """
    Evaluate quantity along a monotone probe sequence and check that the
    deviation from limit shrinks step by step and ends below target.

    A residual already at or below target may stay flat; anything else that
    fails to shrink marks the probe non-monotone. Failure is report content.
    """
    target = Config.PROBE_TARGET if target is None else target
    points = tuple(float(s) for s in sequence)
    diffs = np.diff(points)
    if len(points) < 2 or not (np.all(diffs > 0) or np.all(diffs < 0)):
        return ProbeReport(name, points, (), limit, (), target, False, False,
                           skipped='probe sequence must be strictly monotone with two or more points')
    values = tuple(float(quantity(s)) for s in points)
    residuals = tuple(abs(v - limit) for v in values)
    monotone = all(r1 < r0 or r1 <= target for r0, r1 in zip(residuals, residuals[1:]))
    converged = residuals[-1] < target
    if not (monotone and converged):
        logger.warning(f'Probe {name} did not converge: residuals {residuals}')
    return ProbeReport(name, points, values, float(limit), residuals, target, monotone, converged)


def signal_sensitivity_distance_probe(coef, range_, sigma_eps, distances_=None, target=None):
    """u_React1 -> 0 as X moves above the range."""
    sigma = kernel.as_sigma(sigma_eps)
    distances_ = Config.PROBE_FAR_DISTANCES if distances_ is None else distances_
    return limit_probe(
        distances_,
        lambda k: sensitivity_to_signal_range(coef, range_, sigma, state_for_index(coef, range_.v_hi + k * sigma)),
        0.0, target, name='signal_sensitivity_far')


def signal_sensitivity_width_probe(coef, x, sigma_eps, widths=None, target=None):
    """u_React1 -> tau as a range centred on X widens."""
    sigma = kernel.as_sigma(sigma_eps)
    widths = Config.PROBE_WIDTHS if widths is None else widths
    state = state_for_index(coef, x)
    return limit_probe(
        widths,
        lambda w: sensitivity_to_signal_range(coef, Range.centered(x, 0.5 * w * sigma), sigma, state),
        coef.tau, target, name='signal_sensitivity_rough')


def range_move_width_probe(coef, x, sigma_eps, widths=None, target=None):
    """Range_React1 -> 0 as a range centred on X widens."""
    sigma = kernel.as_sigma(sigma_eps)
    widths = Config.PROBE_WIDTHS if widths is None else widths
    state = state_for_index(coef, x)
    return limit_probe(
        widths,
        lambda w: sensitivity_to_range_move(coef, Range.centered(x, 0.5 * w * sigma), sigma, state),
        0.0, target, name='range_move_rough')


def range_move_distance_probe(coef, range_, sigma_eps, distances_=None, target=None):
    """Range_React1 -> 1 as X moves below the range."""
    sigma = kernel.as_sigma(sigma_eps)
    distances_ = Config.PROBE_FAR_DISTANCES if distances_ is None else distances_
    return limit_probe(
        distances_,
        lambda k: sensitivity_to_range_move(coef, range_, sigma, state_for_index(coef, range_.v_lo - k * sigma)),
        1.0, target, name='range_move_far')


def upper_bound_probe(coef, range_, sigma_eps, distances_=None, target=None):
    """Sensitivity to the upper bound -> 0 as the upper bound moves away above X."""
    sigma = kernel.as_sigma(sigma_eps)
    distances_ = Config.PROBE_DISTANCES if distances_ is None else distances_
    x = range_.v_lo + 0.5 * sigma
    state = state_for_index(coef, x)
    return limit_probe(
        distances_,
        lambda k: sensitivity_to_upper(coef, Range(range_.v_lo, x + k * sigma), sigma, state),
        0.0, target, name='upper_bound_far')


def lower_bound_probe(coef, range_, sigma_eps, distances_=None, target=None):
    """Sensitivity to the lower bound -> 0 as the lower bound moves away below X."""
    sigma = kernel.as_sigma(sigma_eps)
    distances_ = Config.PROBE_DISTANCES if distances_ is None else distances_
    x = range_.v_hi - 0.5 * sigma
    state = state_for_index(coef, x)
    return limit_probe(
        distances_,
        lambda k: sensitivity_to_lower(coef, Range(x - k * sigma, range_.v_hi), sigma, state),
        0.0, target, name='lower_bound_far')


def inverse_liquidity_probe(coef, range_, sigma_eps, distances_=None, target=None):
    """1 / Liquidity1 -> 0 as X moves above the range, i.e. liquidity diverges."""
    sigma = kernel.as_sigma(sigma_eps)
    distances_ = Config.PROBE_FAR_DISTANCES if distances_ is None else distances_
    return limit_probe(
        distances_,
        lambda k: 1.0 / liquidity_range(coef, range_, sigma, state_for_index(coef, range_.v_hi + k * sigma)),
        0.0, target, name='inverse_liquidity_far')
