"""
Verification report: every analytic property of the model checked
numerically over seeded random draws, one named anchor per check.

Each suite draws from its own SeedSequence stream (spawn key = suite
number), so adding or removing a suite never changes another suite's draws
and equal seeds give byte-identical reports.
"""

from collections import namedtuple
from dataclasses import replace
import logging
import math

import numpy as np

from config import Config
from models import (DominantDriver, MarketParams, MidpointClass, QuadratureSpec, Range,
                    SignClass)
from services import equilibrium, experiments, premium, statics
from services import truncnorm_kernel as kernel
from services import utility_oracle as oracle
from services.scenario import FIGURE_1, FIGURE_2, FIGURE_PARAMS, apply_overrides
from utils.output import render_json

logger = logging.getLogger(__name__)

VerifySettings = namedtuple('VerifySettings', [
    'samples', 'param_sets', 'kernel_draws', 'oracle_draws', 'states',
    'fd_rel_tol', 'inverse_tol', 'clearing_tol', 'identity_tol', 'oracle_tol',
])

CheckResult = namedtuple('CheckResult', ['anchor', 'passed', 'detail'])

# Bond endowment used to check that D0 only rescales utility
ENDOWMENT = 2.0


def default_settings(config=None, samples=None):
    """Settings from a Config class or a Flask config mapping."""
    config = Config if config is None else config
    get = config.get if isinstance(config, dict) else lambda name: getattr(config, name)
    return VerifySettings(
        samples=get('VERIFY_MC_SAMPLES') if samples is None else samples,
        param_sets=get('VERIFY_PARAM_SETS'),
        kernel_draws=get('VERIFY_KERNEL_DRAWS'),
        oracle_draws=get('VERIFY_ORACLE_DRAWS'),
        states=get('VERIFY_STATES'),
        fd_rel_tol=1e-6,
        inverse_tol=1e-9,
        clearing_tol=1e-8,
        identity_tol=1e-12,
        oracle_tol=1e-4,
    )


def _stream(seed, suite):
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(suite,)))


def random_params(rng):
    """Market parameters with Z > 0, the supply sign under which the B0 signs hold."""
    return MarketParams(
        gamma=rng.uniform(0.5, 4.0),
        mu0=rng.uniform(0.0, 50.0),
        sigma_u2=rng.uniform(0.5, 8.0),
        sigma_eps2=rng.uniform(0.25, 2.0),
        sigma_y2=rng.uniform(0.5, 6.0),
        x_I=rng.uniform(0.1, 0.9),
        Z=rng.uniform(1.0, 30.0),
    )


def _kernel_draw(rng):
    sigma = rng.uniform(0.2, 5.0)
    range_ = Range.centered(rng.uniform(-50.0, 50.0), 0.5 * rng.uniform(0.5, 12.0) * sigma)
    return range_, sigma


def _derivative(f, x, h):
    """Fourth-order central difference."""
    return (-f(x + 2.0 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2.0 * h)) / (12.0 * h)


def _fmt(value):
    return repr(float(value))


def _result(anchor, passed, detail):
    return CheckResult(anchor, bool(passed), detail)


# ── Kernel ───────────────────────────────────────────────────────────────────

def check_kernel(seed, settings):
    rng = _stream(seed, 1)
    narrow_rng = _stream(seed, 10)
    n = settings.kernel_draws
    worst_fd = worst_bound_fd = worst_translation = worst_reflection = worst_inverse = 0.0
    inside = slope_ok = positive = True

    for _ in range(n):
        range_, sigma = _kernel_draw(rng)
        t = range_.midpoint + rng.uniform(-10.0, 10.0) * sigma
        terms = kernel.kernel_terms(range_, sigma, t)
        inside &= range_.v_lo < terms.J < range_.v_hi
        slope_ok &= 0.0 < terms.H < 1.0
        positive &= terms.dJ_dupper > 0.0 and terms.dJ_dlower > 0.0

        narrow = Range(range_.v_lo, range_.v_lo + 10.0 ** narrow_rng.uniform(-8.0, -2.0) * sigma)
        thin = kernel.kernel_terms(narrow, sigma, range_.v_lo + narrow_rng.uniform(-50.0, 50.0) * sigma)
        inside &= narrow.v_lo < thin.J < narrow.v_hi
        slope_ok &= 0.0 < thin.H < 1.0
        positive &= thin.dJ_dupper > 0.0 and thin.dJ_dlower > 0.0

        h = 1e-3 * sigma
        fd = _derivative(lambda s: kernel.eval_J(range_, sigma, s), t, h)
        worst_fd = max(worst_fd, abs(fd - terms.H) / terms.H)

        for d_exact, bumped in ((terms.dJ_dupper, lambda e: Range(range_.v_lo, range_.v_hi + e)),
                                (terms.dJ_dlower, lambda e: Range(range_.v_lo + e, range_.v_hi))):
            fd = _derivative(lambda e: kernel.eval_J(bumped(e), sigma, t), 0.0, h)
            worst_bound_fd = max(worst_bound_fd, abs(fd - d_exact) / max(d_exact, 1e-2))

        c = rng.uniform(-20.0, 20.0)
        shifted = kernel.kernel_terms(range_.shifted(c), sigma, t + c)
        worst_translation = max(worst_translation,
                                abs(shifted.J - c - terms.J) / (1.0 + abs(c) + abs(terms.J)),
                                abs(shifted.H - terms.H))

        worst_reflection = max(worst_reflection,
                               abs(kernel.eval_H(range_.mirrored(), sigma, -t) - terms.H))

        t_in = range_.midpoint + rng.uniform(-8.0, 8.0) * sigma
        p = kernel.eval_J(range_, sigma, t_in)
        worst_inverse = max(worst_inverse, abs(kernel.invert_J(range_, sigma, p) - t_in))

    yield _result('A2.bounds', inside, f'J strictly inside the range over {n} draws and {n} narrow ranges')
    yield _result('A2.derivative', worst_fd <= settings.fd_rel_tol,
                  f'max relative gap between central difference of J and H: {_fmt(worst_fd)}')
    yield _result('A6.slope', slope_ok, f'0 < H < 1 over {n} draws and {n} narrow ranges')
    yield _result('A2.bound_derivatives', positive and worst_bound_fd <= settings.fd_rel_tol,
                  f'boundary derivatives positive; max finite-difference gap {_fmt(worst_bound_fd)}')
    yield _result('A2.translation', worst_translation <= 1e-9,
                  f'max translation gap {_fmt(worst_translation)}')
    yield _result('A6.reflection', worst_reflection <= 1e-12,
                  f'max reflection gap {_fmt(worst_reflection)}')
    yield _result('A2.inverse', worst_inverse <= settings.inverse_tol,
                  f'max round-trip error of invert_J {_fmt(worst_inverse)}')


def check_kernel_limits(seed, settings):
    range_, sigma = FIGURE_1.range, 1.0
    far = Config.PROBE_FAR_DISTANCES
    probes = [
        statics.limit_probe(far, lambda d: kernel.eval_J(range_, sigma, range_.v_hi + d * sigma),
                            range_.v_hi, name='J_above'),
        statics.limit_probe(far, lambda d: kernel.eval_J(range_, sigma, range_.v_lo - d * sigma),
                            range_.v_lo, name='J_below'),
    ]
    yield _probe_result('A2.limits', probes)

    probes = [
        statics.limit_probe(far, lambda d: kernel.eval_H(range_, sigma, range_.v_hi + d * sigma),
                            0.0, name='H_above'),
        statics.limit_probe(far, lambda d: kernel.eval_H(range_, sigma, range_.v_lo - d * sigma),
                            0.0, name='H_below'),
        statics.limit_probe(Config.PROBE_WIDTHS,
                            lambda w: kernel.eval_H(Range.centered(25.0, 0.5 * w * sigma), sigma, 25.0),
                            1.0, name='H_wide'),
    ]
    yield _probe_result('A6.limits', probes)


def _probe_result(anchor, probes):
    passed = all(p.passed for p in probes)
    parts = []
    for p in probes:
        if p.skipped:
            parts.append(f'{p.name}: skipped ({p.skipped})')
        else:
            parts.append(f'{p.name}: final residual {_fmt(p.residuals[-1])}'
                         f'{"" if p.monotone else ", not monotone"}')
    return _result(anchor, passed, '; '.join(parts))


# ── Equilibrium and demands ──────────────────────────────────────────────────

def check_coefficients(seed, settings):
    rng = _stream(seed, 2)
    worst = 0.0
    for _ in range(settings.param_sets):
        params = random_params(rng)
        coef = equilibrium.solve_coefficients(params)
        scale = 1.0 + abs(params.Z) + abs(coef.beta) + abs(params.mu0)
        worst = max(worst, max(abs(r) for r in equilibrium.clearing_system_residuals(params, coef)) / scale)
    yield _result('Eq2-9.coefficients', worst <= settings.clearing_tol,
                  f'max scaled residual of the coefficient system {_fmt(worst)}')


def _oracle_scenario(rng):
    params = random_params(rng)
    sigma = params.sigma_eps
    range_ = Range.centered(params.mu0 + rng.uniform(-5.0, 5.0), rng.uniform(1.0, 6.0) * sigma)
    price = range_.v_lo + rng.uniform(0.1, 0.9) * range_.length
    u_tilde = price + rng.uniform(-3.0, 3.0) * sigma
    return params, range_, price, u_tilde


def check_demand_oracle(seed, settings, diagnostics):
    rng = _stream(seed, 3)
    n = settings.oracle_draws
    worst_informed = worst_posterior = worst_midpoint = worst_gap = 0.0
    worst_scale = worst_endowment = 0.0
    theta = np.linspace(-1.0, 1.0, 5)
    for _ in range(n):
        params, range_, price, u_tilde = _oracle_scenario(rng)
        coef = equilibrium.solve_coefficients(params)

        closed = equilibrium.informed_demand_at_price(range_, params.sigma_eps2, params.gamma, price, u_tilde)
        found = oracle.oracle_informed_demand(price, u_tilde, range_, params)
        worst_informed = max(worst_informed, abs(found - closed) / (1.0 + abs(closed)))

        closed = equilibrium.uninformed_demand_posterior(coef, range_, params, price)
        found = oracle.oracle_uninformed_demand(price, range_, coef, params)
        worst_posterior = max(worst_posterior, abs(found - closed) / (1.0 + abs(closed)))
        prop2 = equilibrium.uninformed_demand(coef, range_, params.noise, params.gamma, params.mu0, price)
        worst_gap = max(worst_gap, abs(prop2 - closed))

        mid = range_.midpoint
        closed = equilibrium.uninformed_demand(coef, range_, params.noise, params.gamma, params.mu0, mid)
        found = oracle.oracle_uninformed_demand(mid, range_, coef, params)
        worst_midpoint = max(worst_midpoint, abs(found - closed) / (1.0 + abs(closed)))

        endowed = replace(params, D0=ENDOWMENT)
        scaled = oracle.utility_uninformed(theta, mid, range_, coef, endowed)
        base = math.exp(-params.gamma * ENDOWMENT) * oracle.utility_uninformed(theta, mid, range_, coef, params)
        worst_scale = max(worst_scale, float(np.max(np.abs(scaled / base - 1.0))))
        moved = oracle.oracle_uninformed_demand(mid, range_, coef, endowed)
        worst_endowment = max(worst_endowment, abs(moved - found) / (1.0 + abs(found)))

    diagnostics['Eq2-7.posterior_gap'] = worst_gap
    tol = settings.oracle_tol
    yield _result('Prop1.oracle', worst_informed <= tol,
                  f'max scaled gap between argmax and closed-form informed demand {_fmt(worst_informed)}')
    yield _result('Prop2.oracle', worst_posterior <= tol,
                  f'max scaled gap between argmax and posterior-form uninformed demand {_fmt(worst_posterior)}')
    yield _result('Prop2.midpoint', worst_midpoint <= tol,
                  f'max scaled gap at the range midpoint {_fmt(worst_midpoint)}')
    yield _result('Prop2.endowment', worst_scale <= 1e-12 and worst_endowment <= tol,
                  f'utility scales by exp(-gamma*D0) within {_fmt(worst_scale)}; '
                  f'max scaled demand shift from D0 {_fmt(worst_endowment)}')


def check_clearing(seed, settings):
    rng = _stream(seed, 4)
    per_set = max(1, settings.states // max(1, settings.param_sets))
    worst_clear = worst_recover = worst_baseline = 0.0
    for _ in range(settings.param_sets):
        params = random_params(rng)
        coef = equilibrium.solve_coefficients(params)
        sigma = params.sigma_eps
        range_ = Range.centered(params.mu0 + rng.uniform(-5.0, 5.0), rng.uniform(1.0, 6.0) * sigma)
        for _ in range(per_set):
            x = range_.midpoint + rng.uniform(-10.0, 10.0) * sigma
            state = statics.state_for_index(coef, x, rng.normal(0.0, math.sqrt(params.sigma_y2)))
            x = coef.signal_index(state)
            price = equilibrium.price_with_range(coef, range_, params.noise, state)
            theta_I = equilibrium.informed_demand(coef, range_, params.sigma_eps2, params.gamma, state)
            scale = 1.0 + abs(params.Z) + abs(state.y_tilde) + abs(params.x_I * theta_I)
            worst_clear = max(worst_clear, abs(equilibrium.clearing_residual(params, coef, range_, state)) / scale)
            worst_baseline = max(worst_baseline,
                                 abs(equilibrium.baseline_clearing_residual(params, coef, state)) / scale)
            recovered = kernel.invert_J(range_, params.noise, price)
            worst_recover = max(worst_recover, abs(recovered - x) / max(1.0, abs(x)))

    total = per_set * settings.param_sets
    yield _result('Eq2-1.clearing', max(worst_clear, worst_baseline) <= settings.clearing_tol,
                  f'max scaled clearing residual {_fmt(worst_clear)} with range, '
                  f'{_fmt(worst_baseline)} without, over {total} states')
    yield _result('Eq2-1.recovery', worst_recover <= settings.inverse_tol,
                  f'max error recovering the signal index from the price {_fmt(worst_recover)}')


# ── Sensitivities, liquidity and figure curves ───────────────────────────────

def _peaks(values):
    d = np.diff(values)
    return int(np.sum((d[:-1] > 0) & (d[1:] < 0)))


def _troughs(values):
    d = np.diff(values)
    return int(np.sum((d[:-1] < 0) & (d[1:] > 0)))


def _with_axis(scenario, axis):
    return apply_overrides(scenario, axis=axis)


def check_figures(seed, settings):
    coef = equilibrium.solve_coefficients(FIGURE_PARAMS)
    ordering = identity = figure1 = True
    worst_identity = 0.0
    for axis in ('u', 'y'):
        scenario = _with_axis(FIGURE_1, axis)
        table = experiments.run_price_curve(scenario)
        _, X = experiments.sweep_grid(scenario, coef)
        H = kernel.eval_H(FIGURE_1.range, FIGURE_PARAMS.noise, X)
        u_react = coef.tau * H
        ordering &= bool(np.all(u_react < coef.tau) and coef.tau < 1.0)
        gap = np.abs(H + kernel.eval_one_minus_H(FIGURE_1.range, FIGURE_PARAMS.noise, X) - 1.0)
        worst_identity = max(worst_identity, float(gap.max()))

        price = table.column('price_range')
        sens = table.column('sens_range')
        figure1 &= bool(np.all((price > FIGURE_1.range.v_lo) & (price < FIGURE_1.range.v_hi)))
        figure1 &= bool(np.all(np.diff(price) > 0))
        figure1 &= _peaks(sens) == 1 and bool(np.all(sens < table.column('sens_baseline')))
    identity = worst_identity <= settings.identity_tol

    yield _result('Sec4.1.ordering', ordering, 'u_React1 < u_React0 < 1 on both caption grids')
    yield _result('Sec4.1.identity', identity,
                  f'max |u_React1/tau + Range_React1 - 1| {_fmt(worst_identity)}')
    yield _result('Fig1.signature', figure1,
                  'price inside the range and increasing, sensitivity single-peaked below the baseline')

    dominance = figure2 = True
    for axis in ('u', 'y'):
        table = experiments.run_liquidity_curve(_with_axis(FIGURE_2, axis))
        base = table.column('liquidity_baseline')
        liq = table.column('liquidity_range')
        dominance &= bool(np.all(liq > base))
        figure2 &= bool(np.ptp(base) <= 1e-12)
        figure2 &= _troughs(liq) == 1 and liq[0] > liq[len(liq) // 2] and liq[-1] > liq[len(liq) // 2]
    yield _result('Sec4.3.liquidity', dominance, 'Liquidity1 > Liquidity0 on both caption grids')
    yield _result('Fig2.signature', figure2,
                  'constant baseline, range liquidity single-troughed and rising toward both ends')


def check_statics_limits(seed, settings):
    coef = equilibrium.solve_coefficients(FIGURE_PARAMS)
    range_, sigma = FIGURE_1.range, FIGURE_PARAMS.noise
    mid = range_.midpoint
    yield _probe_result('Eq4-4.far', [statics.signal_sensitivity_distance_probe(coef, range_, sigma)])
    yield _probe_result('Eq4-4.rough', [statics.signal_sensitivity_width_probe(coef, mid, sigma)])
    yield _probe_result('Eq4-7.far', [statics.range_move_distance_probe(coef, range_, sigma)])
    yield _probe_result('Eq4-7.rough', [statics.range_move_width_probe(coef, mid, sigma)])
    yield _probe_result('Prop3.upper', [statics.upper_bound_probe(coef, range_, sigma)])
    yield _probe_result('Prop4.lower', [statics.lower_bound_probe(coef, range_, sigma)])
    yield _probe_result('Prop5.liquidity', [statics.inverse_liquidity_probe(coef, range_, sigma)])

    far = statics.state_for_index(coef, range_.v_hi + 50.0 * sigma.sigma)
    centre = statics.state_for_index(coef, mid)
    drivers = (statics.classify_dominant_driver(coef, range_, sigma, far),
               statics.classify_dominant_driver(coef, range_, sigma, centre))
    yield _result('Prop5.driver',
                  drivers == (DominantDriver.RANGE_DOMINATES, DominantDriver.SIGNAL_DOMINATES),
                  f'50 sigma above the range: {drivers[0].value}; at the midpoint: {drivers[1].value}')


# ── Premium ──────────────────────────────────────────────────────────────────

def check_premium(seed, settings, diagnostics):
    rng = _stream(seed, 5)
    mc = QuadratureSpec.monte_carlo(settings.samples, seed)
    gh = QuadratureSpec.hermite()
    neutral = above = below = symmetric = signs = closed_form = higher = slope = True
    worst_symmetry = worst_mu0 = worst_closed = 0.0

    for _ in range(settings.param_sets):
        params = random_params(rng)
        coef = equilibrium.solve_coefficients(params)
        noise = params.noise
        half = rng.uniform(0.5, 3.0) * noise.sigma

        centred = Range.centered(coef.B0, half)
        report = premium.premium_with_range(coef, centred, noise, params.mu0, mc)
        neutral &= (report.sign_class is SignClass.ZERO
                    and premium.classify_by_midpoint(centred, coef) is MidpointClass.NEUTRAL)
        exact = premium.premium_with_range(coef, centred, noise, params.mu0, gh)
        worst_symmetry = max(worst_symmetry, abs(exact.delta))

        step = min(1.0, half)
        moved = [Range(centred.v_lo + step, centred.v_hi + step),
                 Range(centred.v_lo, centred.v_hi + step),
                 Range(centred.v_lo + step, centred.v_hi)]
        higher &= all(premium.premium_with_range(coef, r, noise, params.mu0, gh).premium1 < exact.premium1
                      for r in moved)
        sens = premium.premium_sensitivities(coef, centred, noise, params.mu0, gh)
        slope &= -1.0 < sens.d_dmidpoint < 0.0 and sens.d_dupper < 0.0 and sens.d_dlower < 0.0

        high = Range.centered(coef.B0 + 5.0, half)
        report = premium.premium_with_range(coef, high, noise, params.mu0, mc)
        above &= (report.sign_class is SignClass.NEGATIVE
                  and premium.classify_by_midpoint(high, coef) is MidpointClass.REDUCES)

        low = Range.centered(coef.B0 - 5.0, half)
        report = premium.premium_with_range(coef, low, noise, params.mu0, mc)
        below &= (report.sign_class is SignClass.POSITIVE
                  and premium.classify_by_midpoint(low, coef) is MidpointClass.RAISES)

        table = premium.B0_comparative_statics(params)
        signs &= all(s.matches for s in table)
        mu0_slope = next(s.derivative for s in table if s.parameter == 'mu0')
        worst_mu0 = max(worst_mu0, abs(mu0_slope - 1.0))
        worst_closed = max(worst_closed,
                           abs(premium.b0_closed_form(params, coef) - coef.B0) / (1.0 + abs(coef.B0)))

    symmetric = worst_symmetry <= Config.ZERO_PREMIUM_TOL
    closed_form = worst_closed <= 1e-9 and worst_mu0 <= 1e-6
    n = settings.param_sets
    yield _result('Prop6.neutral_midpoint', neutral,
                  f'ranges centred at B0 classify Zero and Neutral at {n} parameter sets')
    yield _result('Prop6.quadrature_symmetry', symmetric,
                  f'max |delta premium| by Gauss-Hermite for ranges centred at B0 {_fmt(worst_symmetry)}')
    yield _result('Prop6.above_midpoint', above, 'midpoint B0 + 5 classifies Negative and Reduces')
    yield _result('Prop6.below_midpoint', below, 'midpoint B0 - 5 classifies Positive and Raises')
    yield _result('Sec4.4.higher_range', higher,
                  'shifting the range up, or raising either bound alone, lowers premium1')
    yield _result('Sec4.4.midpoint_slope', slope,
                  'dPremium1/dv_m in (-1, 0) and both bound sensitivities negative')
    yield _result('Cor1.signs', signs, f'finite-difference signs of B0 match at {n} parameter sets')
    yield _result('Cor1.closed_form', closed_form,
                  f'max scaled gap of the B0 closed form {_fmt(worst_closed)}; '
                  f'max |dB0/dmu0 - 1| {_fmt(worst_mu0)}')

    diagnostics['Eq4-11.printed_gap'] = premium.b0_printed_form(FIGURE_PARAMS).gap


def check_premium_limits(seed, settings):
    params = FIGURE_PARAMS
    coef = equilibrium.solve_coefficients(params)
    quad = QuadratureSpec.hermite()
    noise, mu0 = params.noise, params.mu0
    range_ = FIGURE_1.range
    # mu0 must sit outside the range for the distance probes
    outside = Range(mu0 + 6.0, mu0 + 12.0)

    yield _probe_result('Prop7.upper', [premium.upper_bound_premium_probe(coef, range_, noise, mu0, quad)])
    yield _probe_result('Prop7.lower', [premium.lower_bound_premium_probe(coef, range_, noise, mu0, quad)])
    yield _probe_result('Prop8.midpoint', [premium.midpoint_premium_probe(coef, outside, noise, mu0, quad)])
    yield _probe_result('Prop8.mu0', [premium.mu0_premium_probe(coef, outside, noise, mu0, quad)])
    yield _probe_result('Prop9.premium', [premium.rough_premium_probe(coef, noise, mu0, quad)])
    yield _probe_result('Prop9.midpoint', [premium.rough_midpoint_probe(coef, noise, mu0, quad)])


# ── Report ───────────────────────────────────────────────────────────────────

def run_verify(seed=None, samples=None, settings=None):
    """
    Run every suite and collect the report.

    Returns:
        dict with 'checks' (anchor -> 'pass'/'fail', in run order), 'details',
        'diagnostics', 'seed', 'samples' and the overall 'passed' flag
    """
    seed = Config.DEFAULT_SEED if seed is None else int(seed)
    settings = default_settings(samples=samples) if settings is None else settings
    diagnostics = {}
    suites = [
        lambda: check_kernel(seed, settings),
        lambda: check_kernel_limits(seed, settings),
        lambda: check_coefficients(seed, settings),
        lambda: check_demand_oracle(seed, settings, diagnostics),
        lambda: check_clearing(seed, settings),
        lambda: check_figures(seed, settings),
        lambda: check_statics_limits(seed, settings),
        lambda: check_premium(seed, settings, diagnostics),
        lambda: check_premium_limits(seed, settings),
    ]

    checks, details = {}, {}
    for suite in suites:
        for result in suite():
            checks[result.anchor] = 'pass' if result.passed else 'fail'
            details[result.anchor] = result.detail
            log = logger.info if result.passed else logger.warning
            log(f'{result.anchor}: {checks[result.anchor]} ({result.detail})')

    passed = all(v == 'pass' for v in checks.values())
    logger.info(f'Verification {"passed" if passed else "failed"}: '
                f'{sum(v == "pass" for v in checks.values())}/{len(checks)} checks')
    return {
        'seed': seed,
        'samples': settings.samples,
        'checks': checks,
        'details': details,
        'diagnostics': diagnostics,
        'passed': passed,
    }


def render_report_json(report):
    return render_json(report)


def render_report_text(report):
    lines = [f'verification seed={report["seed"]} samples={report["samples"]}']
    for anchor, status in report['checks'].items():
        lines.append(f'{status.upper():4}  {anchor:28} {report["details"][anchor]}')
    for name, value in sorted(report['diagnostics'].items()):
        lines.append(f'diag  {name:28} {value!r}')
    lines.append('PASSED' if report['passed'] else 'FAILED')
    return '\n'.join(lines) + '\n'
