import pytest

from app import create_app
from config import TestingConfig
from models import MarketParams, Range
from services.equilibrium import solve_coefficients


@pytest.fixture
def p_star():
    """Caption parameters of the price and liquidity figures."""
    return MarketParams(gamma=3.0, mu0=25.0, sigma_u2=6.0, sigma_eps2=1.0, sigma_y2=5.0, x_I=0.4, Z=25.0)


@pytest.fixture
def coef_star(p_star):
    return solve_coefficients(p_star)


@pytest.fixture
def fig1_range():
    return Range(22.0, 28.0)


@pytest.fixture
def small_params():
    """A market whose signal index has a small spread, cheap to integrate over."""
    return MarketParams(gamma=0.5, mu0=10.0, sigma_u2=1.0, sigma_eps2=1.0, sigma_y2=0.5, x_I=0.5, Z=2.0)


@pytest.fixture
def app():
    app = create_app(TestingConfig)
    yield app


@pytest.fixture
def client(app):
    return app.test_client()


@pytest.fixture
def runner(app):
    return app.test_cli_runner()
