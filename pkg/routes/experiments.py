"""
Command-line experiments, registered at the top level of the flask CLI:

    flask --app app equilibrium      coefficients, B0 and clearing residuals
    flask --app app price-curve      prices and sensitivities along a state sweep
    flask --app app liquidity-curve  liquidity along a state sweep
    flask --app app premium          premium report and B0 sign table
    flask --app app verify           every property check, keyed by anchor
    flask --app app sweep            one derived quantity over one input

Exit codes: 0 success, 1 configuration error (bad options included), 2 failed verification,
3 numerical failure or a flagged quadrature result.
"""

from functools import wraps
import logging

import click
from flask import Blueprint, current_app

from services import experiments, verification
from services.scenario import FIGURE_1, FIGURE_2, apply_overrides, load_scenario
from utils.decorators import exit_codes
from utils.errors import ConfigurationError, NumericalFailure
from utils.output import render, write_text

logger = logging.getLogger(__name__)

experiments_bp = Blueprint('experiments', __name__, cli_group=None)

VERBOSITY = {'quiet': logging.WARNING, 'normal': logging.INFO, 'debug': logging.DEBUG}
VERIFY_FAILED = 2


class ExperimentCommand(click.Command):
    """Exits with the configuration error code on bad or missing options."""

    def parse_args(self, ctx, args):
        try:
            return super().parse_args(ctx, args)
        except click.UsageError as e:
            e.exit_code = ConfigurationError.exit_code
            raise


def _set_verbosity(verbosity):
    logging.getLogger().setLevel(VERBOSITY[verbosity])


def scenario_options(f):
    """Options shared by every experiment command."""
    options = [
        click.option('--config', 'config_path', type=click.Path(dir_okay=False),
                     help='Scenario JSON file.'),
        click.option('--seed', type=click.IntRange(0, 2 ** 64 - 1), help='Monte Carlo seed.'),
        click.option('--out', type=click.Path(dir_okay=False), help='Write output here instead of stdout.'),
        click.option('--format', 'fmt', type=click.Choice(['csv', 'json']), help='Output format.'),
        click.option('--quad', type=click.Choice(['hermite', 'mc']), help='Expectation method.'),
        click.option('--nodes', type=int, help='Gauss-Hermite nodes.'),
        click.option('--samples', type=int, help='Monte Carlo samples.'),
        click.option('--verbosity', type=click.Choice(list(VERBOSITY)), default='normal',
                     show_default=True),
    ]
    for option in reversed(options):
        f = option(f)
    return f


def axis_option(f):
    return click.option('--axis', type=click.Choice(['u', 'y']), help='State variable to sweep.')(f)


def _scenario(base, config_path, seed, out, fmt, quad, nodes, samples, axis=None):
    scenario = load_scenario(config_path, base) if config_path else base
    return apply_overrides(scenario, seed=seed, quad=quad, nodes=nodes, samples=samples,
                           out=out, fmt=fmt, axis=axis)


def _emit(data, scenario):
    text = render(data, scenario.output.format)
    if scenario.output.path:
        write_text(text, scenario.output.path)
    else:
        click.echo(text, nl=False)


def command(name, base=FIGURE_1, axis=False):
    """Register a scenario-driven command: options, verbosity and exit codes."""
    def decorator(f):
        @wraps(f)
        def run(config_path, seed, out, fmt, quad, nodes, samples, verbosity, **kwargs):
            _set_verbosity(verbosity)
            scenario = _scenario(base, config_path, seed, out, fmt, quad, nodes, samples,
                                 kwargs.pop('axis', None))
            logger.debug(f'Effective scenario: {scenario.to_dict()}')
            return f(scenario, **kwargs)

        run = exit_codes(run)
        run = scenario_options(run)
        if axis:
            run = axis_option(run)
        return experiments_bp.cli.command(name, cls=ExperimentCommand)(run)
    return decorator


@command('equilibrium')
def equilibrium_command(scenario):
    """Print the equilibrium coefficients."""
    _emit(experiments.run_equilibrium(scenario), scenario)


@command('price-curve', axis=True)
def price_curve_command(scenario):
    """Price and price sensitivity with and without the range."""
    _emit(experiments.run_price_curve(scenario), scenario)


@command('liquidity-curve', base=FIGURE_2, axis=True)
def liquidity_curve_command(scenario):
    """Liquidity with and without the range."""
    _emit(experiments.run_liquidity_curve(scenario), scenario)


@command('premium')
def premium_command(scenario):
    """Asset premium with and without the range."""
    report = experiments.run_premium_report(
        scenario,
        zero_tol=current_app.config['ZERO_PREMIUM_TOL'],
        neutral_tol=current_app.config['NEUTRAL_TOL'],
    )
    _emit(report, scenario)
    if report['flags']:
        raise NumericalFailure(f"premium report flagged: {', '.join(report['flags'])}")


@command('sweep')
@click.option('--param', required=True, help='Market parameter, range bound (v_lo, v_hi) or state (u_tilde, y_tilde).')
@click.option('--start', type=float, required=True)
@click.option('--stop', type=float, required=True)
@click.option('--steps', type=int, default=51, show_default=True)
@click.option('--quantity', required=True, type=click.Choice(list(experiments.QUANTITIES)))
def sweep_command(scenario, param, start, stop, steps, quantity):
    """One derived quantity over a grid of one input."""
    _emit(experiments.run_sweep(scenario, param, start, stop, steps, quantity), scenario)


@experiments_bp.cli.command('verify', cls=ExperimentCommand)
@click.option('--seed', type=click.IntRange(0, 2 ** 64 - 1), help='Seed of every random draw.')
@click.option('--samples', type=int, help='Monte Carlo samples per premium case.')
@click.option('--out', type=click.Path(dir_okay=False), help='Also write the JSON report here.')
@click.option('--format', 'fmt', type=click.Choice(['text', 'json']), default='text', show_default=True)
@click.option('--verbosity', type=click.Choice(list(VERBOSITY)), default='normal', show_default=True)
@exit_codes
def verify_command(seed, samples, out, fmt, verbosity):
    """Check every property of the model; exit 2 if any check fails."""
    _set_verbosity(verbosity)
    seed = current_app.config['DEFAULT_SEED'] if seed is None else seed
    settings = verification.default_settings(current_app.config, samples)
    report = verification.run_verify(seed, settings=settings)

    if out:
        write_text(verification.render_report_json(report), out)
    if fmt == 'json':
        click.echo(verification.render_report_json(report), nl=False)
    else:
        click.echo(verification.render_report_text(report), nl=False)
    if not report['passed']:
        raise SystemExit(VERIFY_FAILED)
