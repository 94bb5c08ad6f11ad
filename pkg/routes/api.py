"""
Read-only JSON API over the model.

Endpoints:
    GET  /api/health        liveness
    POST /api/equilibrium   {market}                         -> coefficients, B0, theta, residuals
    POST /api/price         {market, range, state}           -> prices, demands, sensitivities
    POST /api/premium       {market, range, quadrature}      -> premium report

Request sections use the scenario file schema; missing sections fall back
to the caption preset.
"""

from flask import Blueprint, request, jsonify, current_app

from models import MarketState
from services import equilibrium, experiments, statics
from services.scenario import parse_scenario, require_range
from utils.decorators import json_errors
from utils.errors import BracketError, ConfigurationError, DomainError

api_bp = Blueprint('api', __name__, url_prefix='/api')


def _payload():
    data = request.get_json(silent=True)
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigurationError('request body must be a JSON object')
    return data


def _scenario(data, sections):
    unknown = set(data) - set(sections) - {'state'}
    if unknown:
        raise ConfigurationError(f"unknown request fields: {', '.join(sorted(unknown))}")
    return parse_scenario({k: v for k, v in data.items() if k in sections})


def _state(data, scenario):
    state = data.get('state', {})
    if not isinstance(state, dict) or set(state) - {'u_tilde', 'y_tilde'}:
        raise ConfigurationError("state must be an object with 'u_tilde' and 'y_tilde'")
    return MarketState(
        u_tilde=state.get('u_tilde', scenario.sweep.fixed_u),
        y_tilde=state.get('y_tilde', scenario.sweep.fixed_y),
    )


@api_bp.route('/health')
def health():
    return jsonify({'success': True, 'status': 'ok'})


@api_bp.route('/equilibrium', methods=['POST'])
@json_errors
def solve():
    scenario = _scenario(_payload(), ('market',))
    return jsonify({'success': True, 'equilibrium': experiments.run_equilibrium(scenario)})


@api_bp.route('/price', methods=['POST'])
@json_errors
def price():
    data = _payload()
    scenario = _scenario(data, ('market', 'range'))
    range_ = require_range(scenario, 'price')
    state = _state(data, scenario)
    params = scenario.params
    coef = equilibrium.solve_coefficients(params)
    noise = params.noise

    p1 = equilibrium.price_with_range(coef, range_, noise, state)
    theta_I0, theta_U0 = equilibrium.baseline_demands(coef, params, state)
    result = {
        'state': state.to_dict(),
        'signal_index': coef.signal_index(state),
        'price_baseline': equilibrium.price_baseline(coef, state),
        'price_range': p1,
        'informed_demand_baseline': theta_I0,
        'uninformed_demand_baseline': theta_U0,
        'informed_demand': equilibrium.informed_demand(coef, range_, params.sigma_eps2, params.gamma, state),
        'sens_baseline': statics.sensitivity_to_signal_baseline(coef),
        'sens_range': statics.sensitivity_to_signal_range(coef, range_, noise, state),
        'sens_noise_baseline': statics.sensitivity_to_noise_baseline(coef),
        'sens_noise_range': statics.sensitivity_to_noise_range(coef, range_, noise, state),
        'sens_upper': statics.sensitivity_to_upper(coef, range_, noise, state),
        'sens_lower': statics.sensitivity_to_lower(coef, range_, noise, state),
        'range_react': statics.sensitivity_to_range_move(coef, range_, noise, state),
        'liquidity_baseline': statics.liquidity_baseline(coef),
        'liquidity_range': statics.liquidity_range(coef, range_, noise, state),
        'dominant_driver': statics.classify_dominant_driver(
            coef, range_, noise, state, current_app.config['TIE_TOL']).value,
        'distances': statics.distances(coef, range_, state).to_dict(),
    }
    # Demands that invert J fail once p1 rounds onto a bound, far outside the range
    try:
        result['informed_demand_at_price'] = equilibrium.informed_demand_at_price(
            range_, params.sigma_eps2, params.gamma, p1, state.u_tilde)
        result['uninformed_demand'] = equilibrium.uninformed_demand(
            coef, range_, noise, params.gamma, params.mu0, p1)
        result['clearing_residual'] = equilibrium.clearing_residual(params, coef, range_, state)
    except (DomainError, BracketError) as e:
        result['inversion_error'] = str(e)
    return jsonify({'success': True, 'price': result})


@api_bp.route('/premium', methods=['POST'])
@json_errors
def premium_report():
    scenario = _scenario(_payload(), ('market', 'range', 'quadrature'))
    report = experiments.run_premium_report(
        scenario,
        zero_tol=current_app.config['ZERO_PREMIUM_TOL'],
        neutral_tol=current_app.config['NEUTRAL_TOL'],
    )
    return jsonify({'success': True, 'premium': report})
