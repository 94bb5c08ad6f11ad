"""
Asset premium with and without range disclosure.

Premium0 = mu0 - B0 in closed form; Premium1 = mu0 - E[J(X)] with
X ~ N(B0, sigma_X^2), taken either by Gauss-Hermite quadrature or by
seeded Monte Carlo. Monte Carlo draws come from one independent stream per
chunk (SeedSequence spawn key = chunk index), so the estimate depends only
on (seed, samples, chunk size) and not on evaluation order.
"""

from dataclasses import replace
from functools import lru_cache
import logging
import math

import numpy as np
from scipy import special

from config import Config
from models import (B0Diagnostic, B0Sensitivity, MidpointClass, PremiumDistances,
                    PremiumReport, PremiumSensitivities, ProbeReport, QuadratureMethod, Range,
                    SignClass)
from services import truncnorm_kernel as kernel
from services.equilibrium import solve_coefficients
from services.statics import limit_probe

logger = logging.getLogger(__name__)

# Expected signs of dB0/d(parameter)
B0_EXPECTED_SIGNS = {
    'sigma_eps2': -1,
    'sigma_y2': -1,
    'sigma_u2': -1,
    'Z': -1,
    'x_I': +1,
    'mu0': +1,
}

SE_FLAG = 'mc_standard_error_above_target'


# ── Expectations over X ──────────────────────────────────────────────────────

@lru_cache(maxsize=16)
def standard_normal_rule(n):
    """Gauss-Hermite nodes z and weights w with sum(w * f(z)) ~ E[f(Z)], Z ~ N(0, 1)."""
    x, w = special.roots_hermite(n)
    return math.sqrt(2.0) * x, w / math.sqrt(math.pi)


def effective_nodes(quad, sigma_X, sigma_eps, max_nodes=None, spacing=None):
    """
    Node count for a Gauss-Hermite rule over N(B0, sigma_X^2).

    With scaling on, the count grows until the node spacing near the centre
    is at most `spacing` * sigma_eps, the scale on which J bends.
    """
    if not quad.scale_nodes:
        return quad.nodes_or_samples
    max_nodes = Config.GH_MAX_NODES if max_nodes is None else max_nodes
    spacing = (Config.GH_NODE_SPACING if spacing is None else spacing) * kernel.as_sigma(sigma_eps)
    needed = math.ceil(0.5 * (math.pi * sigma_X / spacing) ** 2)
    return int(min(max(quad.nodes_or_samples, needed), max(max_nodes, quad.nodes_or_samples)))


def expectation(fn, coef, sigma_eps, quad, chunk=None):
    """
    E[fn(X)] for X ~ N(B0, sigma_X^2).

    Args:
        fn: vectorised callable returning shape (n,) or (k, n) for n points
        coef: EquilibriumCoefficients (B0, sigma_X2)
        sigma_eps: noise scale, used for node scaling
        quad: QuadratureSpec

    Returns:
        (mean, standard_error, n_used); mean and standard_error have fn's leading shape
    """
    if quad.method is QuadratureMethod.GAUSS_HERMITE:
        n = effective_nodes(quad, coef.sigma_X, sigma_eps)
        z, w = standard_normal_rule(n)
        values = np.asarray(fn(coef.B0 + coef.sigma_X * z))
        mean = values @ w
        logger.debug(f'Gauss-Hermite expectation with {n} nodes')
        return mean, np.zeros_like(mean), n

    chunk = Config.MC_CHUNK if chunk is None else chunk
    # With antithetic pairs each draw z is used as z and -z and the pair mean is one unit.
    draws = math.ceil(quad.nodes_or_samples / 2) if quad.antithetic else quad.nodes_or_samples
    shift = total = total_sq = None
    done = 0
    for index in range(math.ceil(draws / chunk)):
        size = min(chunk, draws - done)
        rng = np.random.default_rng(np.random.SeedSequence(quad.seed, spawn_key=(index,)))
        z = rng.standard_normal(size)
        if quad.antithetic:
            values = np.asarray(fn(coef.B0 + coef.sigma_X * np.concatenate([z, -z])))
            values = 0.5 * (values[..., :size] + values[..., size:])
        else:
            values = np.asarray(fn(coef.B0 + coef.sigma_X * z))
        if shift is None:
            shift = values.mean(axis=-1, keepdims=True)
        values = values - shift
        part, part_sq = values.sum(axis=-1), (values * values).sum(axis=-1)
        total = part if total is None else total + part
        total_sq = part_sq if total_sq is None else total_sq + part_sq
        done += size
    centred = total / draws
    variance = np.maximum(total_sq / draws - centred * centred, 0.0) * draws / (draws - 1)
    mean = shift[..., 0] + centred
    n = 2 * draws if quad.antithetic else draws
    logger.debug(f'Monte Carlo expectation with {n} samples in {math.ceil(draws / chunk)} streams')
    return mean, np.sqrt(variance / draws), n


# ── Premium ──────────────────────────────────────────────────────────────────

def premium_baseline(coef, mu0):
    """(1 - tau)*mu0 - beta, which equals mu0 - B0."""
    return (1.0 - coef.tau) * mu0 - coef.beta


def _sign_class(delta, standard_error, zero_tol):
    band = max(zero_tol, 3.0 * standard_error)
    if abs(delta) <= band:
        return SignClass.ZERO
    return SignClass.POSITIVE if delta > 0 else SignClass.NEGATIVE


def premium_with_range(coef, range_, sigma_eps, mu0, quad, zero_tol=None):
    """
    Premium1 = mu0 - E[J(X)] and its difference from Premium0.

    Returns:
        PremiumReport; a Monte Carlo standard error above quad.target_se is
        flagged in the report rather than raised
    """
    zero_tol = Config.ZERO_PREMIUM_TOL if zero_tol is None else zero_tol
    expected_price, se, n = expectation(lambda x: kernel.eval_J(range_, sigma_eps, x), coef, sigma_eps, quad)
    premium0 = premium_baseline(coef, mu0)
    premium1 = mu0 - float(expected_price)
    se = float(se)
    delta = premium1 - premium0

    flags = ()
    if quad.method is QuadratureMethod.MONTE_CARLO and se > quad.target_se:
        logger.warning(f'Monte Carlo standard error {se!r} above target {quad.target_se!r} with {n} samples')
        flags = (SE_FLAG,)

    return PremiumReport(
        premium0=premium0,
        premium1=premium1,
        delta=delta,
        standard_error=se,
        sign_class=_sign_class(delta, se, zero_tol),
        B0=coef.B0,
        method=quad.method,
        nodes_or_samples=n,
        flags=flags,
    )


def delta_premium(coef, range_, sigma_eps, mu0, quad, zero_tol=None):
    """Premium1 - Premium0 with both premiums, its standard error and sign class."""
    return premium_with_range(coef, range_, sigma_eps, mu0, quad, zero_tol)


def classify_by_midpoint(range_, coef, tol=None):
    """Disclosure raises the premium below B0, reduces it above, leaves it unchanged at B0."""
    tol = Config.NEUTRAL_TOL if tol is None else tol
    gap = range_.midpoint - coef.B0
    if abs(gap) <= tol:
        return MidpointClass.NEUTRAL
    return MidpointClass.REDUCES if gap > 0 else MidpointClass.RAISES


def premium_distances(range_, mu0):
    if mu0 > range_.v_hi:
        D = mu0 - range_.v_hi
    elif mu0 < range_.v_lo:
        D = range_.v_lo - mu0
    else:
        D = 0.0
    return PremiumDistances(D=D, D_upper=abs(range_.v_hi - mu0), D_lower=abs(mu0 - range_.v_lo))


# ── B0 benchmark ─────────────────────────────────────────────────────────────

def compute_B0(params):
    return solve_coefficients(params).B0


def b0_printed_form(params):
    """
    Compare B0 = beta + mu0*tau with the published expanded closed form,
    whose last denominator term carries gamma^3 where the coefficient
    solution gives gamma^2.
    """
    g, s_e2, s_u2, s_y2 = params.gamma, params.sigma_eps2, params.sigma_u2, params.sigma_y2
    printed = (params.mu0 - params.Z * g * s_e2
               - params.Z * g ** 3 * params.x_U * s_u2 * s_e2 ** 2 * s_y2
               / (g ** 2 * s_e2 ** 2 * s_y2 + params.x_I ** 2 * s_u2 + g ** 3 * params.x_I * s_u2 * s_e2 * s_y2))
    defined = compute_B0(params)
    return B0Diagnostic(defined=defined, printed=printed, gap=printed - defined)


def b0_closed_form(params, coef=None):
    """B0 = mu0 - Z*gamma*(sigma_eps^2 + (1 - tau)*sigma_u^2)."""
    coef = solve_coefficients(params) if coef is None else coef
    return params.mu0 - params.Z * params.gamma * (params.sigma_eps2 + (1.0 - coef.tau) * params.sigma_u2)


def B0_comparative_statics(params):
    """Central finite differences of B0 in each parameter, with the expected signs."""
    table = []
    for name, expected in B0_EXPECTED_SIGNS.items():
        value = getattr(params, name)
        h = np.cbrt(np.finfo(float).eps) * max(1.0, abs(value))
        if name == 'x_I':
            h = min(h, 0.5 * value, 0.5 * (1.0 - value))
        up = compute_B0(replace(params, **{name: value + h}))
        down = compute_B0(replace(params, **{name: value - h}))
        table.append(B0Sensitivity(parameter=name, derivative=(up - down) / (2.0 * h), expected_sign=expected))
    return table



# ── Sensitivities and limit probes ───────────────────────────────────────────

def premium_sensitivities(coef, range_, sigma_eps, mu0, quad):
    """
    Sensitivities of Premium1 to the bounds, to a move of the whole range,
    and to mu0 through the expected price (B0 - mu0 held fixed).
    mu0 enters only through coef.B0.
    """
    def terms(x):
        k = kernel.kernel_terms(range_, sigma_eps, x)
        return np.vstack([k.dJ_dupper, k.dJ_dlower, k.dJ_dlower + k.dJ_dupper, k.H])

    mean, _, _ = expectation(terms, coef, sigma_eps, quad)
    return PremiumSensitivities(
        d_dupper=-float(mean[0]),
        d_dlower=-float(mean[1]),
        d_dmidpoint=-float(mean[2]),
        d_dmu0=-float(mean[3]),
    )



def _premium_probe_points(coef, mu0, offset, distances_):
    """Distances from mu0: `offset` plus k * sigma_X for each k."""
    return tuple(offset + k * coef.sigma_X for k in distances_)


def upper_bound_premium_probe(coef, range_, sigma_eps, mu0, quad, distances_=None, target=None):
    """d Premium1 / d v_hi -> 0 as the upper bound moves far above mu0 (D_upper grows)."""
    distances_ = Config.PROBE_DISTANCES if distances_ is None else distances_
    low = min(range_.v_lo, mu0)
    points = _premium_probe_points(coef, mu0, max(0.0, coef.B0 - mu0), distances_)
    return limit_probe(
        points,
        lambda D: premium_sensitivities(coef, Range(low, mu0 + D), sigma_eps, mu0, quad).d_dupper,
        0.0, target, name='premium_upper_far')


def lower_bound_premium_probe(coef, range_, sigma_eps, mu0, quad, distances_=None, target=None):
    """d Premium1 / d v_lo -> 0 as the lower bound moves far below mu0 (D_lower grows)."""
    distances_ = Config.PROBE_DISTANCES if distances_ is None else distances_
    high = max(range_.v_hi, mu0)
    points = _premium_probe_points(coef, mu0, max(0.0, mu0 - coef.B0), distances_)
    return limit_probe(
        points,
        lambda D: premium_sensitivities(coef, Range(mu0 - D, high), sigma_eps, mu0, quad).d_dlower,
        0.0, target, name='premium_lower_far')


def _distant_probe(coef, range_, sigma_eps, mu0, quad, distances_, target, field, limit, name):
    distances_ = Config.PROBE_FAR_DISTANCES if distances_ is None else distances_
    target = Config.PROBE_TARGET if target is None else target
    D = premium_distances(range_, mu0).D
    if D == 0.0:
        logger.warning(f'Probe {name} skipped: mu0 lies inside the range')
        return ProbeReport(name, (), (), float(limit), (), target, False, False,
                           skipped='mu0 lies inside the range')
    above = range_.v_lo > mu0
    points = _premium_probe_points(coef, mu0, abs(mu0 - coef.B0), distances_)

    def shifted(D_):
        if above:
            return Range(mu0 + D_, mu0 + D_ + range_.length)
        return Range(mu0 - D_ - range_.length, mu0 - D_)

    return limit_probe(
        points,
        lambda D_: getattr(premium_sensitivities(coef, shifted(D_), sigma_eps, mu0, quad), field),
        limit, target, name=name)


def midpoint_premium_probe(coef, range_, sigma_eps, mu0, quad, distances_=None, target=None):
    """d Premium1 / d v_m -> -1 as a fixed-length range moves away from mu0 (D grows)."""
    return _distant_probe(coef, range_, sigma_eps, mu0, quad, distances_, target,
                          'd_dmidpoint', -1.0, 'premium_midpoint_far')


def mu0_premium_probe(coef, range_, sigma_eps, mu0, quad, distances_=None, target=None):
    """The expected-price channel of mu0 vanishes as the range moves away from mu0."""
    return _distant_probe(coef, range_, sigma_eps, mu0, quad, distances_, target,
                          'd_dmu0', 0.0, 'premium_mu0_far')


def _rough_range(coef, mu0, w):
    """Range centred on mu0 reaching w/2 * sigma_X beyond B0 on its near side."""
    return Range.centered(mu0, 0.5 * w * coef.sigma_X + abs(mu0 - coef.B0))


def rough_premium_probe(coef, sigma_eps, mu0, quad, widths=None, target=None):
    """
    Premium1 -> Premium0 as a range centred on mu0 widens (widths in sigma_X units).

    A range centred on B0 leaves the premium unchanged at every width, so the
    probe is centred on mu0 instead.
    """
    widths = Config.PROBE_WIDTHS if widths is None else widths
    premium0 = premium_baseline(coef, mu0)
    return limit_probe(
        widths,
        lambda w: premium_with_range(coef, _rough_range(coef, mu0, w), sigma_eps, mu0, quad).premium1,
        premium0, target, name='premium_rough')


def rough_midpoint_probe(coef, sigma_eps, mu0, quad, widths=None, target=None):
    """d Premium1 / d v_m -> 0 as a range centred on mu0 widens."""
    widths = Config.PROBE_WIDTHS if widths is None else widths
    return limit_probe(
        widths,
        lambda w: premium_sensitivities(coef, _rough_range(coef, mu0, w), sigma_eps, mu0, quad).d_dmidpoint,
        0.0, target, name='premium_midpoint_rough')
