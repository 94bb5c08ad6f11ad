"""
Scenario files: parsing, presets, overrides and the echo of the effective
configuration.

A scenario file is JSON with the sections market, range, sweep,
quadrature and output. Sections that are left out fall back to the preset;
unknown sections or keys are rejected so that a misspelt parameter can never
pass silently.
"""

from dataclasses import replace
import json
import logging

from config import Config
from models import (MarketParams, OutputSpec, QuadratureMethod, QuadratureSpec, Range, Scenario,
                    SweepSpec)
from utils.errors import ConfigurationError, DomainError

logger = logging.getLogger(__name__)

FIGURE_PARAMS = MarketParams(gamma=3.0, mu0=25.0, sigma_u2=6.0, sigma_eps2=1.0, sigma_y2=5.0, x_I=0.4, Z=25.0)

# Price and price-sensitivity curves
FIGURE_1 = Scenario(params=FIGURE_PARAMS, range=Range(22.0, 28.0))
# Liquidity curves
FIGURE_2 = Scenario(params=FIGURE_PARAMS, range=Range(23.0, 27.0))

PRESETS = {'figure1': FIGURE_1, 'figure2': FIGURE_2}

_SECTIONS = {
    'market': MarketParams,
    'range': Range,
    'sweep': SweepSpec,
    'quadrature': QuadratureSpec,
    'output': OutputSpec,
}

_SCENARIO_FIELD = {
    'market': 'params',
    'range': 'range',
    'sweep': 'sweep',
    'quadrature': 'quad',
    'output': 'output',
}


def _keys(cls):
    return set(cls.__dataclass_fields__)


def _section(name, data, current):
    cls = _SECTIONS[name]
    if not isinstance(data, dict):
        raise ConfigurationError(f"section '{name}' must be an object")
    unknown = set(data) - _keys(cls)
    if unknown:
        raise ConfigurationError(f"unknown keys in section '{name}': {', '.join(sorted(unknown))}")
    base = current.to_dict() if current is not None else {}
    base.update(data)
    try:
        return cls(**base)
    except TypeError as e:
        raise ConfigurationError(f"section '{name}': {e}")
    except DomainError as e:
        raise ConfigurationError(f"section '{name}': {e}")
    except ValueError as e:
        raise ConfigurationError(f"section '{name}': {e}")


def parse_scenario(data, base=FIGURE_1):
    """
    Build a Scenario from a parsed JSON document layered over base.

    Raises:
        ConfigurationError: unknown section or key, or an invalid value
    """
    if not isinstance(data, dict):
        raise ConfigurationError('scenario must be a JSON object')
    unknown = set(data) - set(_SECTIONS)
    if unknown:
        raise ConfigurationError(f"unknown sections: {', '.join(sorted(unknown))}")

    updates = {}
    for name, value in data.items():
        field_name = _SCENARIO_FIELD[name]
        if name == 'range' and value is None:
            updates[field_name] = None
            continue
        updates[field_name] = _section(name, value, getattr(base, field_name))
    return replace(base, **updates)


def load_scenario(path, base=FIGURE_1):
    try:
        with open(path, 'r', encoding='utf-8') as fh:
            data = json.load(fh)
    except OSError as e:
        raise ConfigurationError(f'cannot read scenario file {path}: {e}')
    except json.JSONDecodeError as e:
        raise ConfigurationError(f'scenario file {path} is not valid JSON: {e}')
    scenario = parse_scenario(data, base)
    logger.info(f'Loaded scenario from {path}')
    return scenario


def scenario_to_dict(scenario):
    return scenario.to_dict()


def dump_scenario(scenario):
    return json.dumps(scenario_to_dict(scenario), indent=2, sort_keys=True)


def apply_overrides(scenario, seed=None, quad=None, nodes=None, samples=None, out=None, fmt=None,
                    axis=None):
    """Layer command-line options over a scenario."""
    try:
        q = scenario.quad
        if quad is not None:
            method = QuadratureMethod(quad)
            if method is not q.method:
                default = Config.GH_NODES if method is QuadratureMethod.GAUSS_HERMITE else Config.MC_SAMPLES
                q = replace(q, method=method, nodes_or_samples=default)
        if nodes is not None and q.method is QuadratureMethod.GAUSS_HERMITE:
            q = replace(q, nodes_or_samples=nodes)
        if samples is not None and q.method is QuadratureMethod.MONTE_CARLO:
            q = replace(q, nodes_or_samples=samples)
        if seed is not None:
            q = replace(q, seed=seed)

        output = scenario.output
        if out is not None:
            output = replace(output, path=out)
        if fmt is not None:
            output = replace(output, format=fmt)

        sweep = scenario.sweep if axis is None else replace(scenario.sweep, axis=axis)
    except (DomainError, ValueError) as e:
        raise ConfigurationError(str(e))
    return replace(scenario, quad=q, output=output, sweep=sweep)


def require_range(scenario, command):
    if scenario.range is None:
        raise ConfigurationError(f"'{command}' needs a disclosed range: add a 'range' section")
    return scenario.range
