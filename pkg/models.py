from dataclasses import dataclass, field, fields
from enum import Enum
from typing import Optional, Tuple
import math

from config import Config
from utils.errors import DomainError


def _real(name, value):
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise DomainError(f'{name} must be a real number, got {value!r}')
    if not math.isfinite(value):
        raise DomainError(f'{name} must be finite, got {value!r}')
    return value


def _positive(name, value):
    value = _real(name, value)
    if value <= 0:
        raise DomainError(f'{name} must be positive, got {value!r}')
    return value


def _coerce(obj, name, value):
    object.__setattr__(obj, name, value)


class _Record:
    """Mixin giving frozen dataclasses a JSON-friendly ``to_dict``."""

    def to_dict(self):
        out = {}
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, Enum):
                value = value.value
            elif isinstance(value, _Record):
                value = value.to_dict()
            elif isinstance(value, tuple):
                value = [v.value if isinstance(v, Enum) else v for v in value]
            out[f.name] = value
        return out


# ── Enums ────────────────────────────────────────────────────────────────────

class QuadratureMethod(str, Enum):
    GAUSS_HERMITE = 'hermite'
    MONTE_CARLO = 'mc'


class SignClass(str, Enum):
    POSITIVE = 'Positive'
    ZERO = 'Zero'
    NEGATIVE = 'Negative'


class MidpointClass(str, Enum):
    RAISES = 'Raises'
    NEUTRAL = 'Neutral'
    REDUCES = 'Reduces'


class DominantDriver(str, Enum):
    SIGNAL_DOMINATES = 'SignalDominates'
    RANGE_DOMINATES = 'RangeDominates'
    TIE = 'Tie'


# ── Kernel inputs ────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class Range(_Record):
    """Disclosed value range [v_lo, v_hi]."""
    v_lo: float
    v_hi: float

    def __post_init__(self):
        _coerce(self, 'v_lo', _real('v_lo', self.v_lo))
        _coerce(self, 'v_hi', _real('v_hi', self.v_hi))
        if not self.v_hi > self.v_lo:
            raise DomainError(f'v_hi must exceed v_lo, got [{self.v_lo!r}, {self.v_hi!r}]')

    @property
    def length(self):
        return self.v_hi - self.v_lo

    @property
    def midpoint(self):
        return 0.5 * (self.v_lo + self.v_hi)

    def shifted(self, c):
        return Range(self.v_lo + c, self.v_hi + c)

    def mirrored(self):
        return Range(-self.v_hi, -self.v_lo)

    @classmethod
    def centered(cls, center, half_width):
        return cls(center - half_width, center + half_width)

    def __repr__(self):
        return f'<Range [{self.v_lo!r}, {self.v_hi!r}]>'


@dataclass(frozen=True)
class NoiseScale(_Record):
    sigma: float

    def __post_init__(self):
        _coerce(self, 'sigma', _positive('sigma_eps', self.sigma))

    @property
    def variance(self):
        return self.sigma * self.sigma

    @classmethod
    def from_variance(cls, variance):
        return cls(math.sqrt(_positive('sigma_eps2', variance)))


# ── Equilibrium ──────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class MarketParams(_Record):
    """Exogenous parameters. The uninformed fraction x_U is always 1 - x_I."""
    gamma: float
    mu0: float
    sigma_u2: float
    sigma_eps2: float
    sigma_y2: float
    x_I: float
    Z: float
    D0: float = 0.0

    def __post_init__(self):
        for name in ('gamma', 'sigma_u2', 'sigma_eps2', 'sigma_y2'):
            _coerce(self, name, _positive(name, getattr(self, name)))
        for name in ('mu0', 'Z', 'D0'):
            _coerce(self, name, _real(name, getattr(self, name)))
        x_I = _real('x_I', self.x_I)
        if not 0.0 < x_I < 1.0:
            raise DomainError(f'x_I must lie strictly inside (0, 1), got {x_I!r}')
        _coerce(self, 'x_I', x_I)

    @property
    def x_U(self):
        return 1.0 - self.x_I

    @property
    def sigma_eps(self):
        return math.sqrt(self.sigma_eps2)

    @property
    def noise(self):
        return NoiseScale(self.sigma_eps)


@dataclass(frozen=True)
class EquilibriumCoefficients(_Record):
    tau: float
    alpha: float
    beta: float
    omega1: float
    omega2: float
    sigma_eta2: float
    B0: float
    sigma_X2: float
    theta: float

    def signal_index(self, state):
        """X = tau*u + alpha*y + beta for a realized state."""
        return self.tau * state.u_tilde + self.alpha * state.y_tilde + self.beta

    def centered_index(self, state):
        """X-hat = tau*u + alpha*y, the index without the intercept."""
        return self.tau * state.u_tilde + self.alpha * state.y_tilde

    @property
    def sigma_X(self):
        return math.sqrt(self.sigma_X2)

    @property
    def sigma_eta(self):
        return math.sqrt(self.sigma_eta2)


@dataclass(frozen=True)
class MarketState(_Record):
    u_tilde: float
    y_tilde: float

    def __post_init__(self):
        _coerce(self, 'u_tilde', _real('u_tilde', self.u_tilde))
        _coerce(self, 'y_tilde', _real('y_tilde', self.y_tilde))


# ── Utility oracle ───────────────────────────────────────────────────────────

@dataclass(frozen=True)
class GridSearchSpec(_Record):
    theta_min: float
    theta_max: float
    n_points: int = 201
    refine_rounds: int = 3

    def __post_init__(self):
        _coerce(self, 'theta_min', _real('theta_min', self.theta_min))
        _coerce(self, 'theta_max', _real('theta_max', self.theta_max))
        if not self.theta_max > self.theta_min:
            raise DomainError('theta_max must exceed theta_min')
        if int(self.n_points) < 3:
            raise DomainError(f'n_points must be at least 3, got {self.n_points!r}')
        if int(self.refine_rounds) < 0:
            raise DomainError('refine_rounds must be non-negative')
        _coerce(self, 'n_points', int(self.n_points))
        _coerce(self, 'refine_rounds', int(self.refine_rounds))

    @property
    def resolution(self):
        step = (self.theta_max - self.theta_min) / (self.n_points - 1)
        return step * (2.0 / (self.n_points - 1)) ** self.refine_rounds


# ── Statics ──────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class Distances(_Record):
    d: float
    d_upper: float
    d_lower: float


@dataclass(frozen=True)
class ProbeReport(_Record):
    """Values of a quantity along a probe sequence and their approach to a limit."""
    name: str
    points: Tuple[float, ...]
    values: Tuple[float, ...]
    limit: float
    residuals: Tuple[float, ...]
    target: float
    monotone: bool
    converged: bool
    skipped: Optional[str] = None

    @property
    def passed(self):
        if self.skipped:
            return True
        return self.monotone and self.converged


# ── Premium ──────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class QuadratureSpec(_Record):
    method: QuadratureMethod = QuadratureMethod.GAUSS_HERMITE
    nodes_or_samples: int = 200
    seed: int = 42
    target_se: float = 1e-2
    scale_nodes: bool = True
    antithetic: bool = True

    def __post_init__(self):
        _coerce(self, 'method', QuadratureMethod(self.method))
        n = int(self.nodes_or_samples)
        if self.method is QuadratureMethod.GAUSS_HERMITE and n < Config.GH_MIN_NODES:
            raise DomainError(f'Gauss-Hermite needs at least {Config.GH_MIN_NODES} nodes, got {n}')
        if self.method is QuadratureMethod.MONTE_CARLO and n < Config.MC_MIN_SAMPLES:
            raise DomainError(f'Monte Carlo needs at least {Config.MC_MIN_SAMPLES} samples, got {n}')
        if not 0 <= int(self.seed) < 2 ** 64:
            raise DomainError(f'seed must be an unsigned 64-bit integer, got {self.seed!r}')
        _coerce(self, 'nodes_or_samples', n)
        _coerce(self, 'seed', int(self.seed))
        _coerce(self, 'target_se', _positive('target_se', self.target_se))
        _coerce(self, 'scale_nodes', bool(self.scale_nodes))
        _coerce(self, 'antithetic', bool(self.antithetic))

    @classmethod
    def hermite(cls, nodes=200, scale_nodes=True):
        return cls(QuadratureMethod.GAUSS_HERMITE, nodes, scale_nodes=scale_nodes)

    @classmethod
    def monte_carlo(cls, samples=10 ** 6, seed=42, target_se=1e-2, antithetic=True):
        return cls(QuadratureMethod.MONTE_CARLO, samples, seed, target_se, antithetic=antithetic)


@dataclass(frozen=True)
class PremiumReport(_Record):
    premium0: float
    premium1: float
    delta: float
    standard_error: float
    sign_class: SignClass
    B0: float
    method: QuadratureMethod
    nodes_or_samples: int
    flags: Tuple[str, ...] = ()

    @property
    def flagged(self):
        return bool(self.flags)


@dataclass(frozen=True)
class PremiumSensitivities(_Record):
    d_dupper: float
    d_dlower: float
    d_dmidpoint: float
    d_dmu0: float


@dataclass(frozen=True)
class PremiumDistances(_Record):
    D: float
    D_upper: float
    D_lower: float


@dataclass(frozen=True)
class B0Diagnostic(_Record):
    defined: float
    printed: float
    gap: float


@dataclass(frozen=True)
class B0Sensitivity(_Record):
    parameter: str
    derivative: float
    expected_sign: int

    @property
    def sign(self):
        return int(math.copysign(1, self.derivative)) if self.derivative != 0 else 0

    @property
    def matches(self):
        return self.sign == self.expected_sign


# ── Scenario ─────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class SweepSpec(_Record):
    """Curve sweep over one state axis. start/stop of None means auto-centred."""
    axis: str = 'u'
    start: Optional[float] = None
    stop: Optional[float] = None
    steps: int = 201
    fixed_u: float = 6.0
    fixed_y: float = 10.0

    def __post_init__(self):
        if self.axis not in ('u', 'y'):
            raise DomainError(f"sweep axis must be 'u' or 'y', got {self.axis!r}")
        if int(self.steps) < 2:
            raise DomainError(f'sweep steps must be at least 2, got {self.steps!r}')
        if (self.start is None) != (self.stop is None):
            raise DomainError('sweep start and stop must be given together')
        if self.start is not None:
            _coerce(self, 'start', _real('start', self.start))
            _coerce(self, 'stop', _real('stop', self.stop))
        _coerce(self, 'steps', int(self.steps))
        _coerce(self, 'fixed_u', _real('fixed_u', self.fixed_u))
        _coerce(self, 'fixed_y', _real('fixed_y', self.fixed_y))


@dataclass(frozen=True)
class OutputSpec(_Record):
    path: Optional[str] = None
    format: str = 'csv'

    def __post_init__(self):
        if self.format not in ('csv', 'json'):
            raise DomainError(f"output format must be 'csv' or 'json', got {self.format!r}")


@dataclass(frozen=True)
class Scenario(_Record):
    params: MarketParams
    range: Optional[Range] = None
    sweep: SweepSpec = field(default_factory=SweepSpec)
    quad: QuadratureSpec = field(default_factory=QuadratureSpec)
    output: OutputSpec = field(default_factory=OutputSpec)

    def to_dict(self):
        return {
            'market': self.params.to_dict(),
            'range': self.range.to_dict() if self.range else None,
            'sweep': self.sweep.to_dict(),
            'quadrature': self.quad.to_dict(),
            'output': self.output.to_dict(),
        }


