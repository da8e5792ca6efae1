"""Interval maps with a neutral fixed point at 0: cheap inducing testbed.

Two variants on [0,1), both with first-return cross-section X = [1/2, 1):

  markov:  T x = x (1 + 2^(1/alpha) x^(1/alpha)) on [0,1/2),  2x - 1 on [1/2,1)
  afn:     T x = x (1 + b x^(1/alpha)) mod 1   (non-Markov for non-integer b)

Return times off the neutral fixed point have a heavy tail with index alpha,
which makes these maps a fast stand-in for the billiard when exercising the
inducing machinery: lap numbers, induced Birkhoff sums, and the two-sample
equivalence between the full and induced normalized sums.
"""

from dataclasses import dataclass

import numpy as np

from . import _pykernels as _ref
from .backend import kernels as K
from .rng import substream

_VARIANTS = {"markov": 0, "afn": 1}


@dataclass(frozen=True)
class IntermittentMap:
    alpha: float
    b: float = 1.3
    variant: str = "markov"

    def __post_init__(self):
        if not (1.0 < self.alpha < 2.0):
            raise ValueError(f"alpha must lie in (1,2), got {self.alpha}")
        if self.variant not in _VARIANTS:
            raise ValueError(f"variant must be one of {sorted(_VARIANTS)}, got {self.variant!r}")
        if self.variant == "afn" and not self.b > 0.0:
            raise ValueError(f"branch coefficient must be positive, got {self.b}")

    @property
    def code(self) -> int:
        return _VARIANTS[self.variant]


@dataclass(frozen=True)
class FirstReturnInterval:
    phi: int
    intermediates: np.ndarray  # the phi-1 points strictly between returns
    end: float  # the return point in [1/2, 1)
    status: int = 0


def map_step(m: IntermittentMap, x: float) -> float:
    if not 0.0 <= x < 1.0:
        raise ValueError(f"x must lie in [0,1), got {x}")
    return float(K.imap_step(m.code, m.alpha, m.b, x))


def orbit(m: IntermittentMap, x0: float, n: int) -> np.ndarray:
    """x_0 .. x_(n-1) of the forward orbit."""
    xs = np.empty(n)
    K.imap_trace(m.code, m.alpha, m.b, x0, n, xs)
    return xs


def first_return_interval(m: IntermittentMap, x: float, cap: int = 10**7) -> FirstReturnInterval:
    if not 0.5 <= x < 1.0:
        raise ValueError(f"start must lie in the cross-section [1/2,1), got {x}")
    pts = []
    cur = x
    for k in range(cap):
        cur = float(K.imap_step(m.code, m.alpha, m.b, cur))
        if cur >= 0.5:
            return FirstReturnInterval(phi=k + 1, intermediates=np.array(pts), end=cur)
        pts.append(cur)
    return FirstReturnInterval(phi=cap, intermediates=np.array(pts), end=cur, status=_ref.CAPPED)


def acim_start(m: IntermittentMap, seed: int, stream: int = 0, burn_in: int = 1000) -> float:
    """Burnt-in start approximately distributed by the invariant density."""
    rng = substream(seed, 0x1A9, stream)
    x = float(rng.random())
    xs = np.empty(burn_in)
    x = float(K.imap_trace(m.code, m.alpha, m.b, x, burn_in, xs))
    return x


def cross_section_start(m: IntermittentMap, seed: int, stream: int = 0, burn_in: int = 1000) -> float:
    x = acim_start(m, seed, stream, burn_in)
    guard = 0
    while x < 0.5:
        x = float(K.imap_step(m.code, m.alpha, m.b, x))
        guard += 1
        if guard > 10**8:
            raise RuntimeError("orbit failed to reach the cross-section")
    return x


def collect_returns(m: IntermittentMap, seed: int, nret: int, cap: int = 10**7):
    """nret first-return times from burnt-in cross-section starts."""
    phis = np.empty(nret, dtype=np.int64)
    filled = 0
    censored = 0
    stream = 0
    while filled < nret:
        x = cross_section_start(m, seed, stream)
        stream += 1
        out = phis[filled:]
        x, done, status = K.imap_returns(m.code, m.alpha, m.b, x, out.size, cap, out)
        filled += done
        if status != _ref.OK:
            censored += 1
    return phis, censored


def lap_number(return_times, n: int) -> int:
    """Count of completed returns by time n: tau_N <= n < tau_(N+1).

    Needs cumulative return times extending beyond n, otherwise the sandwich
    cannot be certified.
    """
    taus = np.cumsum(np.asarray(return_times, dtype=np.int64))
    if taus.size == 0 or taus[-1] <= n:
        raise ValueError("insufficient return-time data: cumulative times must pass n")
    return int(np.searchsorted(taus, n, side="right"))


def birkhoff_mean(m: IntermittentMap, values_of, seed: int, nsteps: int = 10**7) -> float:
    """Time average of a vectorized observable along one burnt-in orbit."""
    x = acim_start(m, seed, 0)
    chunk = 1 << 16
    total = 0.0
    count = 0
    xs = np.empty(chunk)
    while count < nsteps:
        take = min(chunk, nsteps - count)
        x = float(K.imap_trace(m.code, m.alpha, m.b, x, take, xs[:take]))
        total += float(np.sum(np.asarray(values_of(xs[:take]), dtype=float)))
        count += take
    return total / nsteps


def induced_sum_until_returns(m: IntermittentMap, values_of, x0: float, kreturns: int,
                              cap: int = 10**8):
    """Birkhoff sum of the observable along the orbit of x0 in X until the
    kreturns-th return to X, i.e. the induced-map Birkhoff sum.

    Returns (sum, total_steps).
    """
    chunk = 1 << 14
    xs = np.empty(chunk + 1)
    x = x0
    got = 0
    total = 0.0
    steps = 0
    while steps < cap:
        K.imap_trace(m.code, m.alpha, m.b, x, chunk + 1, xs)
        future = xs[1:]
        hits = np.flatnonzero(future >= 0.5)
        vals = np.asarray(values_of(xs[:-1]), dtype=float)
        if got + hits.size >= kreturns:
            stop = int(hits[kreturns - got - 1])  # index into future of the final return
            total += float(np.sum(vals[: stop + 1]))
            steps += stop + 1
            return total, steps
        got += hits.size
        total += float(np.sum(vals))
        steps += chunk
        x = float(future[-1])
    raise RuntimeError("induced orbit exceeded the step cap before enough returns")


def inducing_equivalence_check(
    m: IntermittentMap,
    obs_values,
    n: int,
    replicas: int,
    seed: int,
    burn_in: int = 1000,
    calibration_returns: int = 200_000,
) -> dict:
    """Two-sample comparison of the full and induced normalized Birkhoff sums.

    Sample A: n^(-1/alpha) * sum of v over n steps from burnt-in starts.
    Sample B: n^(-1/alpha) * induced sums over [n/tau_bar] returns from
    cross-section starts, with tau_bar estimated from a calibration run.
    obs_values maps an array of positions to observable values; it is
    centered here against a long-orbit time average.
    """
    from .stable import hill_estimator, ks_two_sample

    mean_hat = birkhoff_mean(m, obs_values, seed ^ 0x5EED)

    def centered(xs):
        return np.asarray(obs_values(xs), dtype=float) - mean_hat

    phis, _ = collect_returns(m, seed ^ 0xCA11B, calibration_returns)
    tau_bar = float(np.mean(phis))
    k_hill = int(calibration_returns ** (2.0 / 3.0))
    tail_hat = hill_estimator(phis.astype(float), k_hill)

    bn = n ** (1.0 / m.alpha)
    kret = max(int(n / tau_bar), 1)

    sample_a = np.empty(replicas)
    xs = np.empty(n)
    for i in range(replicas):
        x = acim_start(m, seed, 2 * i, burn_in)
        K.imap_trace(m.code, m.alpha, m.b, x, n, xs)
        sample_a[i] = np.sum(centered(xs)) / bn

    sample_b = np.empty(replicas)
    for i in range(replicas):
        y = cross_section_start(m, seed, 2 * i + 1, burn_in)
        total, _ = induced_sum_until_returns(m, centered, y, kret)
        sample_b[i] = total / bn

    return {
        "n": n,
        "replicas": replicas,
        "ks_two_sample": ks_two_sample(sample_a, sample_b),
        "tau_bar_hat": tau_bar,
        "tail_index_hat": tail_hat,
        "mean_adjustment": mean_hat,
        "returns_used": kret,
        "sample_full": sample_a,
        "sample_induced": sample_b,
    }
