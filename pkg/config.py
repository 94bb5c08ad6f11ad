import os
from dotenv import load_dotenv

load_dotenv()


def _env(name, default, cast=float):
    value = os.environ.get(f'RANGEEQ_{name}')
    return default if value is None else cast(value)


class Config:
    SECRET_KEY = os.environ.get('SECRET_KEY', 'dev-only-change-in-production')
    JSON_SORT_KEYS = False

    # ── Truncated-normal kernel ──────────────────────────────────────────
    # Standardized distance beyond which the continued-fraction tail form is used
    KERNEL_TAIL_THRESHOLD = _env('KERNEL_TAIL_THRESHOLD', 8.0)
    KERNEL_CF_TERMS = _env('KERNEL_CF_TERMS', 64, int)
    # Series moments when width * max(1, centre) is below this, both in standardized units
    KERNEL_NARROW_WIDTH = _env('KERNEL_NARROW_WIDTH', 1e-2)
    # Ranges shorter than this multiple of sigma_eps are rejected
    DEGENERATE_RANGE_RATIO = _env('DEGENERATE_RANGE_RATIO', 1e-9)
    INVERT_TOL = _env('INVERT_TOL', 1e-10)
    INVERT_MAX_ITER = _env('INVERT_MAX_ITER', 200, int)

    # ── Classification tolerances ────────────────────────────────────────
    TIE_TOL = _env('TIE_TOL', 1e-12)
    NEUTRAL_TOL = _env('NEUTRAL_TOL', 1e-9)
    ZERO_PREMIUM_TOL = _env('ZERO_PREMIUM_TOL', 1e-8)

    # ── Expectations over X ~ N(B0, sigma_X^2) ───────────────────────────
    GH_NODES = _env('GH_NODES', 200, int)
    GH_MIN_NODES = _env('GH_MIN_NODES', 20, int)
    GH_MAX_NODES = _env('GH_MAX_NODES', 50000, int)
    GH_NODE_SPACING = _env('GH_NODE_SPACING', 0.25)
    MC_SAMPLES = _env('MC_SAMPLES', 10 ** 6, int)
    MC_MIN_SAMPLES = _env('MC_MIN_SAMPLES', 10 ** 4, int)
    MC_CHUNK = _env('MC_CHUNK', 2 ** 16, int)
    MC_TARGET_SE = _env('MC_TARGET_SE', 1e-2)

    # ── Utility oracle grid search ───────────────────────────────────────
    GRID_POINTS = _env('GRID_POINTS', 201, int)
    GRID_REFINE_ROUNDS = _env('GRID_REFINE_ROUNDS', 3, int)

    # ── Limit probes (sigma units) ───────────────────────────────────────
    PROBE_TARGET = _env('PROBE_TARGET', 1e-8)
    PROBE_DISTANCES = (5.0, 10.0, 20.0, 40.0, 80.0)
    PROBE_FAR_DISTANCES = tuple(5.0 * 10.0 ** k for k in range(10))
    PROBE_WIDTHS = (4.0, 8.0, 16.0, 32.0, 64.0)

    # ── Runs ─────────────────────────────────────────────────────────────
    DEFAULT_SEED = _env('DEFAULT_SEED', 42, int)
    VERIFY_MC_SAMPLES = _env('VERIFY_MC_SAMPLES', MC_SAMPLES, int)
    VERIFY_PARAM_SETS = _env('VERIFY_PARAM_SETS', 20, int)
    VERIFY_KERNEL_DRAWS = _env('VERIFY_KERNEL_DRAWS', 1000, int)
    VERIFY_ORACLE_DRAWS = _env('VERIFY_ORACLE_DRAWS', 200, int)
    VERIFY_STATES = _env('VERIFY_STATES', 500, int)

    # ── Logging ──────────────────────────────────────────────────────────
    LOG_LEVEL = os.environ.get('LOG_LEVEL', 'INFO')
    LOG_FORMAT = os.environ.get('LOG_FORMAT', '%(asctime)s %(levelname)s %(name)s: %(message)s')


class TestingConfig(Config):
    TESTING = True
    VERIFY_MC_SAMPLES = 20_000
    VERIFY_PARAM_SETS = 4
    VERIFY_KERNEL_DRAWS = 100
    VERIFY_ORACLE_DRAWS = 10
    VERIFY_STATES = 50
