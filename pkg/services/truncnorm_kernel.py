"""
Truncated-normal kernel.

J_[a,b](t) is the mean of N(t, sigma^2) truncated to [a, b] and
H_[a,b](t) = J'(t) is the truncated variance divided by sigma^2.
Everything here is vectorised over t and free of shared state.

Evaluation strategy:
  * the problem is reflected so the range sits on the upper side of t
    (H_[a,b](t) = H_[-b,-a](-t), J_[a,b](t) = -J_[-b,-a](-t));
  * inside the body of the distribution the classic ratios are used, with
    the normal mass built from erf (straddling t) or erfcx (one-sided);
  * once the near endpoint is beyond KERNEL_TAIL_THRESHOLD standard
    deviations, moments are taken relative to that endpoint from the
    continued fraction of the Mills ratio, so J - bound and H keep full
    relative precision however far t moves;
  * ranges much narrower than the local curvature of the density use a
    series around the range centre, since 1 + aA - bB - m^2 cancels there.
"""

from collections import namedtuple
import logging
import math

import numpy as np
from scipy import special

from config import Config
from models import NoiseScale
from utils.errors import BracketError, DomainError, OutOfImageError

logger = logging.getLogger(__name__)

SQRT2 = math.sqrt(2.0)
SQRT_2_OVER_PI = math.sqrt(2.0 / math.pi)
INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)

KernelTerms = namedtuple('KernelTerms', ['J', 'H', 'dJ_dlower', 'dJ_dupper'])


def as_sigma(sigma_eps):
    if isinstance(sigma_eps, NoiseScale):
        return sigma_eps.sigma
    return NoiseScale(sigma_eps).sigma


def _prepare(range_, sigma_eps, t, degenerate_ratio):
    sigma = as_sigma(sigma_eps)
    ratio = Config.DEGENERATE_RANGE_RATIO if degenerate_ratio is None else degenerate_ratio
    if range_.length < ratio * sigma:
        raise DomainError(
            f'degenerate range: length {range_.length!r} below {ratio!r} * sigma_eps')
    t_arr = np.asarray(t, dtype=float)
    if not np.all(np.isfinite(t_arr)):
        raise DomainError('t must be finite')
    return sigma, t_arr


def _unwrap(value, scalar):
    return float(value[0]) if scalar else value


# ── Normal-tail building blocks ──────────────────────────────────────────────

def inverse_mills(x):
    """phi(x) / Q(x) via erfcx; accurate for x >= 0."""
    return SQRT_2_OVER_PI / special.erfcx(x / SQRT2)


def tail_fractions(x, terms=None):
    """
    (T1, T2) of the continued fraction Q(x)/phi(x) = 1/(x + T1),
    T_n = n / (x + T_{n+1}), evaluated backwards from a zero tail.

    For an upper tail beyond x, E[z - x] = T1 and E[(z - x)^2] = T1 * T2.
    """
    terms = Config.KERNEL_CF_TERMS if terms is None else terms
    x = np.asarray(x, dtype=float)
    tail = np.zeros_like(x)
    for n in range(int(terms), 1, -1):
        tail = n / (x + tail)
    return 1.0 / (x + tail), tail


def _log_tail_ratio(lo, hi):
    """log(Q(hi) / Q(lo)) for 0 <= lo <= hi."""
    return (np.log(special.erfcx(hi / SQRT2)) - np.log(special.erfcx(lo / SQRT2))
            - 0.5 * (hi - lo) * (hi + lo))


def log_normal_mass(lo, hi):
    """log(Phi(hi) - Phi(lo)) for standardized bounds lo < hi, stable in both tails."""
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    scalar = lo.ndim == 0 and hi.ndim == 0
    lo, hi = np.broadcast_arrays(np.atleast_1d(lo), np.atleast_1d(hi))

    flip = (lo + hi) < 0
    a = np.where(flip, -hi, lo)
    b = np.where(flip, -lo, hi)
    out = np.empty_like(a)

    upper = a >= 0
    if np.any(upper):
        au, bu = a[upper], b[upper]
        log_q = np.log(0.5 * special.erfcx(au / SQRT2)) - 0.5 * au * au
        out[upper] = log_q + np.log(-np.expm1(_log_tail_ratio(au, bu)))
    straddle = ~upper
    if np.any(straddle):
        out[straddle] = np.log(0.5 * (special.erf(b[straddle] / SQRT2)
                                      - special.erf(a[straddle] / SQRT2)))
    return _unwrap(out, scalar)


# ── Moments ──────────────────────────────────────────────────────────────────

def _narrow_moments(lo, width):
    """
    Series moments for a range narrow against the density's curvature.

    With centre c and half-width h, z = c + s has weight exp(-c s - s^2/2)
    on [-h, h]; the uniform moments of s give mean, variance and the
    normalised endpoint densities to O(h^6) without cancellation.
    """
    h = 0.5 * width
    c = lo + h
    h2, c2 = h * h, c * c
    s_mean = -c * h2 / 3.0 + c * h2 * h2 * (2.0 + c2) / 45.0
    var = h2 / 3.0 - h2 * h2 * (2.0 + 3.0 * c2) / 45.0
    z = 1.0 + (c2 - 1.0) * h2 / 6.0 + h2 * h2 * (3.0 - 6.0 * c2 + c2 * c2) / 120.0
    dens_lo = np.exp(c * h - 0.5 * h2) / (2.0 * h * z)
    dens_hi = np.exp(-c * h - 0.5 * h2) / (2.0 * h * z)
    return h + s_mean, var, dens_lo * (h + s_mean), dens_hi * (h - s_mean)


def _standard_moments(lo, hi, width, threshold, terms, narrow_width):
    """
    Moments of a standard normal truncated to [lo, hi] with hi >= |lo|.

    Returns (k, var, d_lo, d_hi): the mean measured from lo, the variance,
    and the derivatives of the mean with respect to each endpoint.
    """
    k = np.empty_like(lo)
    var = np.empty_like(lo)
    d_lo = np.empty_like(lo)
    d_hi = np.empty_like(lo)

    width = np.broadcast_to(width, lo.shape)
    narrow = width * np.maximum(1.0, lo + 0.5 * width) <= narrow_width
    tail = (lo >= threshold) & ~narrow
    one_sided = (lo >= 0) & ~tail & ~narrow
    straddle = (lo < 0) & ~narrow

    if np.any(narrow):
        k[narrow], var[narrow], d_lo[narrow], d_hi[narrow] = _narrow_moments(lo[narrow], width[narrow])

    if np.any(straddle):
        a, b = lo[straddle], hi[straddle]
        mass = 0.5 * (special.erf(b / SQRT2) - special.erf(a / SQRT2))
        A = INV_SQRT_2PI * np.exp(-0.5 * a * a) / mass
        B = INV_SQRT_2PI * np.exp(-0.5 * b * b) / mass
        m = A - B
        k[straddle] = m - a
        var[straddle] = 1.0 + a * A - b * B - m * m
        d_lo[straddle] = A * (m - a)
        d_hi[straddle] = B * (b - m)

    if np.any(one_sided):
        a, b = lo[one_sided], hi[one_sided]
        log_r = _log_tail_ratio(a, b)
        r = np.exp(log_r)
        keep = -np.expm1(log_r)
        A = inverse_mills(a) / keep
        B = inverse_mills(b) * r / keep
        m = A - B
        k[one_sided] = m - a
        var[one_sided] = 1.0 + a * A - b * B - m * m
        d_lo[one_sided] = A * (m - a)
        d_hi[one_sided] = B * (b - m)

    if np.any(tail):
        a, b = lo[tail], hi[tail]
        w = width[tail]
        t1a, t2a = tail_fractions(a, terms)
        t1b, t2b = tail_fractions(b, terms)
        log_r = _log_tail_ratio(a, b)
        r = np.exp(log_r)
        keep = -np.expm1(log_r)
        mu1 = (t1a - r * (t1b + w)) / keep
        mu2 = (t1a * t2a - r * (t1b * t2b + 2.0 * w * t1b + w * w)) / keep
        k[tail] = mu1
        var[tail] = mu2 - mu1 * mu1
        d_lo[tail] = (a + t1a) / keep * mu1
        d_hi[tail] = (b + t1b) * r / keep * (w - mu1)

    return k, var, d_lo, d_hi


def kernel_terms(range_, sigma_eps, t, *, tail_threshold=None, cf_terms=None,
                 degenerate_ratio=None, narrow_width=None):
    """
    Evaluate J, H and both boundary derivatives of J in one pass.

    Args:
        range_: disclosed Range [a, b]
        sigma_eps: NoiseScale or positive float (standard deviation)
        t: location, scalar or array

    Returns:
        KernelTerms(J, H, dJ_dlower, dJ_dupper), scalars when t is scalar
    """
    sigma, t_arr = _prepare(range_, sigma_eps, t, degenerate_ratio)
    threshold = Config.KERNEL_TAIL_THRESHOLD if tail_threshold is None else tail_threshold
    scalar = t_arr.ndim == 0
    t_arr = np.atleast_1d(t_arr)

    a_std = (range_.v_lo - t_arr) / sigma
    b_std = (range_.v_hi - t_arr) / sigma
    width = range_.length / sigma

    flip = (a_std + b_std) < 0
    lo = np.where(flip, -b_std, a_std)
    hi = np.where(flip, -a_std, b_std)

    narrow_width = Config.KERNEL_NARROW_WIDTH if narrow_width is None else narrow_width
    k, var, d_lo, d_hi = _standard_moments(lo, hi, width, threshold, cf_terms, narrow_width)

    # Anchor on the near bound so far-tail means keep their offset from it.
    J = np.where(flip, range_.v_hi - sigma * k, range_.v_lo + sigma * k)
    dJ_dlower = np.where(flip, d_hi, d_lo)
    dJ_dupper = np.where(flip, d_lo, d_hi)

    return KernelTerms(
        J=_unwrap(J, scalar),
        H=_unwrap(var, scalar),
        dJ_dlower=_unwrap(dJ_dlower, scalar),
        dJ_dupper=_unwrap(dJ_dupper, scalar),
    )


def eval_J(range_, sigma_eps, t, **options):
    return kernel_terms(range_, sigma_eps, t, **options).J


def eval_H(range_, sigma_eps, t, **options):
    return kernel_terms(range_, sigma_eps, t, **options).H


def dJ_dupper(range_, sigma_eps, t, **options):
    return kernel_terms(range_, sigma_eps, t, **options).dJ_dupper


def dJ_dlower(range_, sigma_eps, t, **options):
    return kernel_terms(range_, sigma_eps, t, **options).dJ_dlower


def eval_one_minus_H(range_, sigma_eps, t, **options):
    """
    1 - H computed as dJ/da + dJ/db, a sum of two positive terms.

    Stays strictly positive where 1 - H itself would round to zero.
    """
    terms = kernel_terms(range_, sigma_eps, t, **options)
    return terms.dJ_dlower + terms.dJ_dupper


# ── Inverse ──────────────────────────────────────────────────────────────────

def _bracket(f, center, step, direction, limit=4096):
    """Walk away from center in `direction` until f changes sign."""
    for _ in range(limit):
        x = center + direction * step
        if direction * f(x) > 0:
            return x
        step *= 2.0
    raise BracketError(f'no root bracket found within {step!r} of {center!r}')


def invert_J(range_, sigma_eps, p, *, tol=None, max_iter=None, **options):
    """
    Solve J_[a,b](t) = p for t.

    J is strictly increasing, so the root is unique. A bracket is grown
    geometrically around the range midpoint and refined by safeguarded
    Newton steps (derivative H) with bisection fallback.

    Raises:
        OutOfImageError: p is not strictly inside (v_lo, v_hi)
    """
    tol = Config.INVERT_TOL if tol is None else tol
    max_iter = Config.INVERT_MAX_ITER if max_iter is None else max_iter
    sigma = as_sigma(sigma_eps)
    try:
        p = float(p)
    except (TypeError, ValueError):
        raise DomainError(f'price must be a real number, got {p!r}')
    if not math.isfinite(p):
        raise DomainError('price must be finite')
    if not range_.v_lo < p < range_.v_hi:
        raise OutOfImageError(
            f'price {p!r} is outside the image ({range_.v_lo!r}, {range_.v_hi!r}) of J')

    def residual(x):
        return eval_J(range_, sigma, x, **options) - p

    center = range_.midpoint
    f_center = residual(center)
    if f_center == 0.0:
        return center
    step = max(sigma, range_.length)
    if f_center < 0:
        xlo, xhi = center, _bracket(residual, center, step, +1.0)
    else:
        xlo, xhi = _bracket(residual, center, step, -1.0), center
    logger.debug(f'invert_J bracket for p={p!r}: [{xlo!r}, {xhi!r}]')

    x = 0.5 * (xlo + xhi)
    dx_old = xhi - xlo
    dx = dx_old
    for _ in range(max_iter):
        terms = kernel_terms(range_, sigma, x, **options)
        f, df = terms.J - p, terms.H
        if f == 0.0:
            return x
        if f < 0:
            xlo = x
        else:
            xhi = x
        newton_leaves = ((x - xhi) * df - f) * ((x - xlo) * df - f) >= 0.0
        if newton_leaves or abs(2.0 * f) > abs(dx_old * df):
            dx_old = dx
            dx = 0.5 * (xhi - xlo)
            x_new = xlo + dx
        else:
            dx_old = dx
            dx = f / df
            x_new = x - dx
        if x_new == x or abs(dx) <= 4.0 * np.spacing(max(abs(x), 1.0)):
            x = x_new
            break
        x = x_new

    final = abs(residual(x))
    if final > tol:
        raise BracketError(f'invert_J did not reach tolerance {tol!r}: residual {final!r} at p={p!r}')
    return x
