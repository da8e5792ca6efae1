"""Totally skewed alpha-stable laws in the characteristic-function form

    E exp(iuG) = exp{ -|u|^alpha sigma^alpha (1 - i sgn(u) tan(pi alpha/2)) },

with alpha in (1,2), skew fixed at +1.  Provides the geometric scale formula
for the cusp billiard, a Chambers-Mallows-Stuck sampler, a numerically
inverted CDF, and heavy-tail statistics (KS distance, Hill estimator).
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .rng import substream


class StableNumericsError(RuntimeError):
    """CDF inversion failed to reach the requested tolerance."""


@dataclass(frozen=True)
class StableParams:
    """Stability index alpha in (1,2), scale sigma > 0, skew fixed at +1."""

    alpha: float
    sigma: float
    skew: float = 1.0

    def __post_init__(self):
        if not (1.0 < self.alpha < 2.0):
            raise ValueError(f"alpha must lie in (1,2), got {self.alpha}")
        if not self.sigma > 0.0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")
        if self.skew != 1.0:
            raise ValueError("only the totally right-skewed case (skew=+1) is supported")


def cf_stable(params: StableParams, u):
    """Characteristic function at real u (scalar or array)."""
    u = np.asarray(u, dtype=float)
    tau = math.tan(math.pi * params.alpha / 2.0)
    w = (params.sigma * np.abs(u)) ** params.alpha
    out = np.exp(-w) * (np.cos(tau * w) + 1j * np.sign(u) * np.sin(tau * w))
    if out.ndim == 0:
        return complex(out)
    return out


def gamma_reflected(z: float) -> float:
    """Gamma(z) for z in (-1,0), via the reflection identity off Gamma(1-z)."""
    if not (-1.0 < z < 0.0):
        raise ValueError(f"gamma_reflected expects z in (-1,0), got {z}")
    return math.pi / (math.sin(math.pi * z) * math.gamma(1.0 - z))


def sigma_alpha_from_geometry(beta: float, perimeter: float, iv_pi: float) -> float:
    """Scale sigma^alpha for flatness exponent beta, boundary length and I_v(pi).

    sigma^alpha = (beta |dQ| 2^(alpha-1))^(-1) I_v(pi)^alpha Gamma(1-alpha)
                  cos(pi alpha/2), with alpha = beta/(beta-1).  Both
    Gamma(1-alpha) and cos(pi alpha/2) are negative on alpha in (1,2), so the
    result is strictly positive for valid inputs.
    """
    if not beta > 2.0:
        raise ValueError(f"flatness exponent must exceed 2, got {beta}")
    if not perimeter > 0.0:
        raise ValueError(f"perimeter must be positive, got {perimeter}")
    if not iv_pi > 0.0:
        raise ValueError(f"I_v(pi) must be positive, got {iv_pi}")
    alpha = beta / (beta - 1.0)
    value = (
        gamma_reflected(1.0 - alpha)
        * math.cos(math.pi * alpha / 2.0)
        * iv_pi**alpha
        / (beta * perimeter * 2.0 ** (alpha - 1.0))
    )
    if not value > 0.0:
        raise StableNumericsError(f"sigma^alpha came out non-positive ({value})")
    return value


def params_from_geometry(beta: float, perimeter: float, iv_pi: float) -> StableParams:
    alpha = beta / (beta - 1.0)
    sig_a = sigma_alpha_from_geometry(beta, perimeter, iv_pi)
    return StableParams(alpha=alpha, sigma=sig_a ** (1.0 / alpha))


def sample_stable(params: StableParams, seed: int, n: int) -> np.ndarray:
    """n i.i.d. draws via the Chambers-Mallows-Stuck transform.

    For skew +1 the auxiliary angle is B = (pi alpha/2 - pi)/alpha and the
    prefactor is S = |cos(pi alpha/2)|^(-1/alpha); sigma multiplies the
    standardized draw.  Deterministic given the seed.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    alpha = params.alpha
    rng = substream(seed, 0x57AB1E)
    u1 = rng.random(n)
    u2 = rng.random(n)
    v = math.pi * (u1 - 0.5)
    w = -np.log1p(-u2)
    tau = math.tan(math.pi * alpha / 2.0)
    b = math.atan(tau) / alpha
    s = (1.0 + tau * tau) ** (1.0 / (2.0 * alpha))
    x = (
        s
        * np.sin(alpha * (v + b))
        / np.cos(v) ** (1.0 / alpha)
        * (np.cos(v - alpha * (v + b)) / w) ** ((1.0 - alpha) / alpha)
    )
    return params.sigma * x


_OSC_SPLIT = 8.0  # |x/sigma| above which the oscillatory-weight quadrature is used
_TAIL_SPLIT = 200.0  # |x/sigma| above which the series tail replaces quadrature
_ABS_TOL = 1e-6


def _tail_weight(alpha: float) -> float:
    # P(G > x) ~ 2 c_alpha (x/sigma)^(-alpha), c_alpha = Gamma(alpha) sin(pi alpha/2)/pi
    return 2.0 * math.gamma(alpha) * math.sin(math.pi * alpha / 2.0) / math.pi


def cdf_stable(params: StableParams, x: float) -> float:
    """CDF by inversion of the characteristic function.

    Uses the half-line sine-transform form of the inversion integral; for
    strongly oscillatory arguments the cosine/sine-weighted quadrature rules
    take over, and far in the tails the first-order tail series is used
    (left tail of a totally right-skewed law decays faster than any power).
    Raises StableNumericsError if the integral error estimate exceeds 1e-6.
    """
    alpha = params.alpha
    z = float(x) / params.sigma
    if z < -_TAIL_SPLIT:
        return 0.0
    if z > _TAIL_SPLIT:
        return 1.0 - _tail_weight(alpha) * z**-alpha
    tau = math.tan(math.pi * alpha / 2.0)
    wmax = 42.0 ** (1.0 / alpha)

    def integrand(w):
        wa = w**alpha
        return math.exp(-wa) * math.sin(tau * wa - w * z) / w if w > 0.0 else -z

    if abs(z) <= _OSC_SPLIT:
        val, err = quad(integrand, 0.0, wmax, epsabs=1e-11, epsrel=1e-11, limit=300)
        total_err = err
        result = 0.5 - val / math.pi
    else:
        # Strong oscillation: plain rule up to w=1 (the 1/w factor is only
        # singular there), oscillatory-weight rules beyond.
        az = abs(z)
        sgn = math.copysign(1.0, z)

        def g_cos(w):
            wa = w**alpha
            return math.exp(-wa) * math.sin(tau * wa) / w

        def g_sin(w):
            wa = w**alpha
            return math.exp(-wa) * math.cos(tau * wa) / w

        head, e0 = quad(integrand, 0.0, 1.0, epsabs=1e-11, epsrel=1e-11, limit=400)
        i_cos, e1 = quad(g_cos, 1.0, wmax, weight="cos", wvar=az, epsabs=1e-11, limit=400)
        i_sin, e2 = quad(g_sin, 1.0, wmax, weight="sin", wvar=az, epsabs=1e-11, limit=400)
        total_err = e0 + e1 + e2
        result = 0.5 - (head + i_cos - sgn * i_sin) / math.pi

    if not math.isfinite(result) or total_err > _ABS_TOL:
        raise StableNumericsError(
            f"CDF inversion at x={x} did not converge (error estimate {total_err:.3g})"
        )
    if result < 1e-14:
        # The left tail of a totally right-skewed law decays faster than any
        # power; below the quadrature noise floor the value is indistinguishable
        # from zero, and snapping keeps the tail exactly flat.
        return 0.0
    return min(1.0, max(0.0, result))


def cdf_stable_batch(params: StableParams, xs) -> np.ndarray:
    return np.array([cdf_stable(params, float(x)) for x in np.asarray(xs, dtype=float)])


def make_cdf_interpolant(params: StableParams, lo: float, hi: float, n: int = 2001):
    """Monotone interpolant of the inverted CDF on [lo, hi], for bulk KS work.

    The grid is dense where the law has mass (within +-30 sigma) and extends
    geometrically into the right tail, which can reach very far for small
    alpha.  Points outside the window fall back to the exact tail behaviour
    (0 on the left, first-order series on the right).
    """
    from scipy.interpolate import PchipInterpolator

    core_lo = max(lo, -30.0 * params.sigma)
    core_hi = min(hi, 30.0 * params.sigma)
    pieces = [np.linspace(core_lo, core_hi, n)]
    if lo < core_lo:
        pieces.append(-np.geomspace(-lo, -core_lo if core_lo < 0 else 1e-6, 200))
    if hi > core_hi:
        pieces.append(np.geomspace(max(core_hi, 1e-6), hi, 400))
    grid = np.unique(np.concatenate(pieces))
    vals = cdf_stable_batch(params, grid)
    vals = np.maximum.accumulate(vals)
    interp = PchipInterpolator(grid, vals, extrapolate=False)
    tail = _tail_weight(params.alpha)

    def evaluate(x):
        x = np.asarray(x, dtype=float)
        out = np.empty_like(x)
        below = x <= lo
        above = x >= hi
        mid = ~(below | above)
        out[below] = 0.0
        za = np.maximum(x[above] / params.sigma, 1e-300)
        out[above] = np.minimum(1.0, 1.0 - tail * za**-params.alpha)
        out[mid] = interp(x[mid])
        return np.clip(out, 0.0, 1.0)

    return evaluate


def quantile_stable(params: StableParams, p: float, bracket: float = 1e6) -> float:
    """Quantile by bisection on the inverted CDF."""
    if not 0.0 < p < 1.0:
        raise ValueError("p must be in (0,1)")
    lo, hi = -bracket * params.sigma, bracket * params.sigma
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if cdf_stable(params, mid) < p:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-10 * max(1.0, abs(lo), abs(hi)):
            break
    return 0.5 * (lo + hi)


def fit_stable_location_scale(samples, alpha: float) -> tuple[float, float]:
    """Quantile-matching fit of (location, scale) with alpha and skew +1 fixed."""
    ref = StableParams(alpha=alpha, sigma=1.0)
    q25, q50, q75 = np.quantile(np.asarray(samples, dtype=float), [0.25, 0.5, 0.75])
    r25 = quantile_stable(ref, 0.25)
    r50 = quantile_stable(ref, 0.50)
    r75 = quantile_stable(ref, 0.75)
    scale = (q75 - q25) / (r75 - r25)
    if not scale > 0.0:
        raise StableNumericsError("degenerate sample: non-positive fitted scale")
    loc = q50 - scale * r50
    return loc, scale


def ks_statistic(samples, cdf) -> float:
    """sup |empirical CDF - cdf| over the sample points (both one-sided gaps)."""
    xs = np.sort(np.asarray(samples, dtype=float))
    n = xs.size
    if n == 0:
        raise ValueError("need at least one sample")
    f = np.asarray(cdf(xs), dtype=float)
    if f.shape != xs.shape:
        f = np.array([float(cdf(x)) for x in xs])
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - f), np.max(f - (i - 1) / n)))


def ks_two_sample(a, b) -> float:
    """Two-sample KS distance."""
    a = np.sort(np.asarray(a, dtype=float))
    b = np.sort(np.asarray(b, dtype=float))
    grid = np.concatenate([a, b])
    fa = np.searchsorted(a, grid, side="right") / a.size
    fb = np.searchsorted(b, grid, side="right") / b.size
    return float(np.max(np.abs(fa - fb)))


def hill_estimator(samples, k: int) -> float:
    """Tail-index estimate from the top k order statistics.

    Reciprocal of the mean log-spacing between the top k values and the
    (k+1)-th largest positive sample.
    """
    xs = np.asarray(samples, dtype=float)
    pos = xs[xs > 0.0]
    if not 1 <= k < pos.size:
        raise ValueError(f"need 1 <= k < number of positive samples ({pos.size}), got k={k}")
    top = np.sort(pos)[-(k + 1):]
    threshold = top[0]
    mean_spacing = float(np.mean(np.log(top[1:]) - math.log(threshold)))
    if mean_spacing <= 0.0:
        raise ValueError("zero log-spacings (constant top order statistics)")
    return 1.0 / mean_spacing


def empirical_cf(samples, u) -> complex:
    xs = np.asarray(samples, dtype=float)
    return complex(np.mean(np.exp(1j * float(u) * xs)))
