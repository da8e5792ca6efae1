"""Phase-space observables and their cusp analysis.

An Observable is a parsed expression over (curve, r, theta, x, y) with a
declared Holder exponent and a recorded centering constant.  From its trace
on the cusp one tabulates the cusp integral profile

    I_v(s) = 1/2 int_0^s {v(r', t) + v(r'', pi - t)} (sin t)^(1/alpha) dt,

together with the same profile for v = 1 and the normalized time change
Psi = I_1(s)/I_1(pi).  The shape of I_v decides the mode of functional
convergence (monotone / corridor-confined / neither), predicts the shape of
deep-cusp excursions, and feeds the per-excursion diagnostics M1 (distance
from monotonicity) and M2 (distance from the [0, V] corridor).
"""

import math
from dataclasses import dataclass, replace

import numpy as np

from . import exprlang
from .backend import kernels as K
from .billiard import TableGeometry
from .rng import substream


class ProfileError(RuntimeError):
    """Cusp profile quadrature failed to reach its error budget."""


@dataclass(frozen=True)
class Observable:
    source: str
    tree: tuple
    eta: float = 1.0
    mean_adjustment: float = 0.0
    mean_stderr: float = 0.0

    def evaluate(self, cols: dict) -> np.ndarray:
        raw = exprlang.eval_tree(self.tree, cols)
        out = np.asarray(raw, dtype=float) - self.mean_adjustment
        shape = np.broadcast_shapes(*(np.shape(v) for v in cols.values()))
        if out.shape != shape:
            out = np.broadcast_to(out, shape).copy()
        if not np.all(np.isfinite(out)):
            raise exprlang.EvalError(f"observable {self.source!r} produced non-finite values")
        return out

    def pretty(self) -> str:
        return exprlang.pretty(self.tree)


def parse_observable(text: str, eta: float = 1.0) -> Observable:
    if not 0.0 < eta <= 1.0:
        raise ValueError(f"Holder exponent must lie in (0,1], got {eta}")
    return Observable(source=text, tree=exprlang.parse_expression(text), eta=eta)


def center_observable(obs: Observable, geom: TableGeometry, seed: int, n: int) -> Observable:
    """Subtract the Monte-Carlo invariant mean; records estimate and stderr."""
    from .billiard import sample_invariant_arrays

    if n < 1000:
        raise ValueError("need n >= 1000 samples for centering")
    curve, par, theta, r = sample_invariant_arrays(geom, seed, n)
    kg = geom.kernel_geom()
    x = np.empty(n)
    y = np.empty(n)
    for i in range(n):
        xi, yi, *_ = K.boundary_local(kg, int(curve[i]), float(par[i]))
        x[i] = xi
        y[i] = yi
    cols = {"curve": curve.astype(float) + 1.0, "r": r, "theta": theta, "x": x, "y": y}
    vals = obs.evaluate(cols)
    mean = float(np.mean(vals))
    stderr = float(np.std(vals) / math.sqrt(n))
    return replace(
        obs,
        mean_adjustment=obs.mean_adjustment + mean,
        mean_stderr=stderr,
    )


def _gauss_nodes(n: int, a: float, b: float):
    xs, ws = np.polynomial.legendre.leggauss(n)
    half = 0.5 * (b - a)
    return a + half * (xs + 1.0), ws * half


def mu_mean_quadrature(obs: Observable, geom: TableGeometry, n_r: int = 512, n_theta: int = 128) -> float:
    """Deterministic invariant mean by per-curve tensor quadrature.

    Exact to quadrature accuracy for smooth observables; used where the
    Monte-Carlo centering bias would pollute slow normalized-sum limits.
    """
    kg = geom.kernel_geom()
    th, wth = _gauss_nodes(n_theta, 0.0, math.pi)
    theta_weight = np.sin(th) / 2.0
    total = 0.0
    for curve_pub in (1, 2, 3):
        lo, hi = geom.curve_r_range(curve_pub)
        rs, wr = _gauss_nodes(n_r, lo, hi)
        xs = np.empty(n_r)
        ys = np.empty(n_r)
        for i, r in enumerate(rs):
            ci, par = K.param_from_global_r(kg, float(r))
            x, y, *_ = K.boundary_local(kg, ci, par)
            xs[i] = x
            ys[i] = y
        cols = {
            "curve": np.full((n_r, n_theta), float(curve_pub)),
            "r": np.broadcast_to(rs[:, None], (n_r, n_theta)),
            "theta": np.broadcast_to(th[None, :], (n_r, n_theta)),
            "x": np.broadcast_to(xs[:, None], (n_r, n_theta)),
            "y": np.broadcast_to(ys[:, None], (n_r, n_theta)),
        }
        vals = obs.evaluate(cols)
        total += float(wr @ vals @ (wth * theta_weight))
    return total / geom.perimeter


def center_observable_quadrature(obs: Observable, geom: TableGeometry) -> Observable:
    mean = mu_mean_quadrature(obs, geom)
    return replace(obs, mean_adjustment=obs.mean_adjustment + mean, mean_stderr=0.0)


# ---------------------------------------------------------------------------
# Cusp integral profile


def cusp_trace(obs: Observable, geom: TableGeometry, theta) -> np.ndarray:
    """v(r', t) + v(r'', pi - t) with r', r'' the cusp coordinates."""
    theta = np.asarray(theta, dtype=float)
    base = {
        "x": np.zeros_like(theta),
        "y": np.zeros_like(theta),
    }
    up = obs.evaluate(
        {**base, "curve": np.full_like(theta, 1.0), "r": np.full_like(theta, geom.cusp_r_upper),
         "theta": theta}
    )
    low = obs.evaluate(
        {**base, "curve": np.full_like(theta, 2.0), "r": np.full_like(theta, geom.cusp_r_lower),
         "theta": math.pi - theta}
    )
    return up + low


@dataclass(frozen=True)
class IvProfile:
    alpha: float
    s: np.ndarray
    iv: np.ndarray
    i1: np.ndarray
    psi: np.ndarray
    err_bound: float
    _trace: object = None  # theta-array -> cusp trace values, for refinement

    @property
    def iv_pi(self) -> float:
        return float(self.iv[-1])

    @property
    def i1_pi(self) -> float:
        return float(self.i1[-1])

    @property
    def slope_ratio(self) -> float:
        """Asymptotic excursion-sum slope I = I_v(pi)/I_1(pi)."""
        return self.iv_pi / self.i1_pi

    def _panel_quad(self, s: float, weight_only: bool) -> float:
        """Integral from the grid node below s up to s (32-node rule)."""
        grid = self.s
        j = min(int(np.searchsorted(grid, s, side="right")) - 1, grid.size - 2)
        j = max(j, 0)
        lo = grid[j]
        if s <= lo:
            return float(self.i1[j] if weight_only else self.iv[j])
        xs, ws = _gauss_nodes(32, lo, float(s))
        w = np.sin(xs) ** (1.0 / self.alpha)
        if weight_only:
            part = float(ws @ w)
            return float(self.i1[j]) + part
        vals = 0.5 * np.asarray(self._trace(xs), dtype=float) * w
        return float(self.iv[j]) + float(ws @ vals)

    def iv_at(self, s: float) -> float:
        if self._trace is None:
            return float(np.interp(s, self.s, self.iv))
        return self._panel_quad(float(s), weight_only=False)

    def i1_at(self, s: float) -> float:
        return self._panel_quad(float(s), weight_only=True)

    def psi_at(self, s: float) -> float:
        return self.i1_at(s) / self.i1_pi

    def to_csv(self) -> str:
        lines = ["s,I_v,I_1,Psi"]
        for row in zip(self.s, self.iv, self.i1, self.psi):
            lines.append(",".join(repr(float(v)) for v in row))
        return "\n".join(lines) + "\n"


def iv_profile(obs: Observable, geom: TableGeometry, alpha: float, gridsize: int = 1024) -> IvProfile:
    """Tabulated cusp profile with a certified quadrature error bound.

    Each panel is integrated with nested 16/32-node rules; the accumulated
    discrepancy is the error bound and must stay within 1e-8.
    """
    if not (1.0 < alpha < 2.0):
        raise ValueError(f"alpha must lie in (1,2), got {alpha}")
    if gridsize < 8:
        raise ValueError("gridsize too small")
    grid = np.linspace(0.0, math.pi, gridsize + 1)
    q = 1.0 / alpha

    def trace(theta):
        return cusp_trace(obs, geom, theta)

    def panel_values(nodes_per_panel):
        xs, ws = np.polynomial.legendre.leggauss(nodes_per_panel)
        half = 0.5 * (grid[1] - grid[0])
        mids = 0.5 * (grid[:-1] + grid[1:])
        pts = mids[:, None] + half * xs[None, :]
        w = np.sin(pts) ** q
        f_iv = 0.5 * np.asarray(trace(pts.ravel()), dtype=float).reshape(pts.shape) * w
        iv = (f_iv @ ws) * half
        i1 = (w @ ws) * half
        # Endpoint panels carry the (sin t)^(1/alpha) derivative singularity;
        # the cube substitution t = h u^3 makes the integrand C^3 there.
        ts = 0.5 * (xs + 1.0)
        tws = 0.5 * ws
        h = grid[1] - grid[0]
        for panel, left in ((0, True), (grid.size - 2, False)):
            theta = h * ts**3 if left else math.pi - h * ts**3
            jac = 3.0 * h * ts**2
            w_end = np.sin(theta) ** q * jac
            i1[panel] = float(tws @ w_end)
            iv[panel] = float(tws @ (0.5 * np.asarray(trace(theta), dtype=float) * w_end))
        return iv, i1

    iv16, i116 = panel_values(16)
    iv32, i132 = panel_values(32)
    err = float(np.sum(np.abs(iv32 - iv16)) + np.sum(np.abs(i132 - i116)))
    if err > 1e-8:
        raise ProfileError(f"profile quadrature error bound {err:.3g} exceeds 1e-8")
    iv = np.concatenate([[0.0], np.cumsum(iv32)])
    i1 = np.concatenate([[0.0], np.cumsum(i132)])
    if not np.all(np.diff(i1) > 0.0):
        raise ProfileError("weight profile failed to be strictly increasing")
    psi = i1 / i1[-1]
    return IvProfile(alpha=alpha, s=grid, iv=iv, i1=i1, psi=psi, err_bound=err, _trace=trace)


def psi_inverse(profile: IvProfile, u: float) -> float:
    """Solve Psi(s) = u to 1e-8 by grid bracketing plus Newton refinement."""
    if not 0.0 <= u <= 1.0:
        raise ValueError(f"u must lie in [0,1], got {u}")
    if u <= 0.0:
        return 0.0
    if u >= 1.0:
        return math.pi
    target = u * profile.i1_pi
    j = int(np.searchsorted(profile.i1, target, side="right")) - 1
    j = min(max(j, 0), profile.s.size - 2)
    lo, hi = float(profile.s[j]), float(profile.s[j + 1])
    s = 0.5 * (lo + hi)
    q = 1.0 / profile.alpha
    for _ in range(100):
        g = profile.i1_at(s) - target
        if g > 0.0:
            hi = s
        else:
            lo = s
        deriv = math.sin(s) ** q if 0.0 < s < math.pi else 0.0
        if deriv > 0.0:
            step = g / deriv
            cand = s - step
            if lo < cand < hi:
                s_new = cand
            else:
                s_new = 0.5 * (lo + hi)
        else:
            s_new = 0.5 * (lo + hi)
        if abs(s_new - s) <= 1e-12 * (1.0 + abs(s)):
            s = s_new
            break
        s = s_new
    return float(min(max(s, 0.0), math.pi))


def psi_inverse_batch(profile: IvProfile, us) -> np.ndarray:
    """Monotone-interpolated inverse for bulk shape predictions."""
    us = np.asarray(us, dtype=float)
    return np.interp(us, profile.psi, profile.s)


def classify_convergence(profile: IvProfile, tol: float | None = None) -> str:
    """Mode of functional convergence from the shape of the cusp profile.

    'M1' when the profile is nondecreasing, 'M2_only' when it stays inside
    the corridor [0, I_v(pi)] without being monotone, 'neither' when it
    leaves the corridor, 'degenerate' when the endpoint value is below the
    tolerance.  A negative endpoint flips the sign first.
    """
    iv = profile.iv
    if tol is None:
        tol = 1e-6 * float(np.max(np.abs(iv))) if np.any(iv != 0.0) else 0.0
    end = float(iv[-1])
    if abs(end) <= tol:
        return "degenerate"
    g = iv if end > 0.0 else -iv
    end = abs(end)
    if np.all(np.diff(g) >= -tol):
        return "M1"
    if np.all(g >= -tol) and np.all(g <= end + tol):
        return "M2_only"
    return "neither"


# ---------------------------------------------------------------------------
# Excursion sums and diagnostics


def _excursion_columns(excursion) -> dict:
    """Columns for the phi points visited before the return (start included)."""
    pts = [excursion.start] + list(excursion.steps[:-1])
    return {
        "curve": np.array([float(p.point.curve) for p in pts]),
        "r": np.array([p.point.r for p in pts]),
        "theta": np.array([p.point.theta for p in pts]),
        "x": np.array([p.position[0] for p in pts]),
        "y": np.array([p.position[1] for p in pts]),
    }


def excursion_partial_sums(obs: Observable, excursion) -> np.ndarray:
    """Partial sums v_1..v_phi of the observable along one excursion.

    Accumulated in extended precision so the sublinear residual of long
    excursions is not drowned by rounding.
    """
    vals = obs.evaluate(_excursion_columns(excursion))
    return np.cumsum(vals.astype(np.longdouble)).astype(float)


def excursion_partial_sums_from_cols(obs: Observable, cols: dict, phi: int) -> np.ndarray:
    """Partial sums from excursion column arrays (start at row 0, phi+1 rows)."""
    clipped = {k: np.asarray(v)[:phi] for k, v in cols.items()}
    vals = obs.evaluate(clipped)
    return np.cumsum(vals.astype(np.longdouble)).astype(float)


def induced_V(obs: Observable, excursion) -> float:
    """Excursion sum of the observable over the phi collisions before return."""
    vals = obs.evaluate(_excursion_columns(excursion))
    return float(np.sum(vals.astype(np.longdouble)))


def excursion_shape_prediction(profile: IvProfile, phi: int, ell: int) -> float:
    """Leading-order partial sum after ell of phi cusp collisions."""
    if not 0 <= ell <= phi:
        raise ValueError(f"need 0 <= ell <= phi, got ell={ell}, phi={phi}")
    if ell == 0:
        return 0.0
    if ell == phi:
        return phi * profile.slope_ratio
    s = psi_inverse(profile, ell / phi)
    return phi * profile.iv_at(s) / profile.i1_pi


def diag_M1(partial_sums) -> float:
    """min(max drop, max rise) of the partial-sum sequence; 0 iff monotone."""
    v = np.asarray(partial_sums, dtype=float)
    if v.size == 0:
        raise ValueError("empty excursion")
    drops = float(np.max(np.maximum.accumulate(v) - v))
    rises = float(np.max(v - np.minimum.accumulate(v)))
    return min(drops, rises)


def diag_M2(partial_sums, V: float) -> float:
    """Corridor defect: range of {0, v_1..v_phi} minus |V|; 0 iff the sums
    stay between 0 and V."""
    v = np.asarray(partial_sums, dtype=float)
    if v.size == 0:
        raise ValueError("empty excursion")
    big = max(float(np.max(v)), 0.0)
    small = min(float(np.min(v)), 0.0)
    return big - small - abs(V)


def diag_M2_definitional(partial_sums, V: float) -> float:
    """Two-branch min-of-sums form of the corridor defect (cross-check)."""
    v = np.concatenate([[0.0], np.asarray(partial_sums, dtype=float)])
    if v.size == 1:
        raise ValueError("empty excursion")
    a = float(np.max(-v)) + float(np.max(v - V))
    b = float(np.max(v)) + float(np.max(V - v))
    return min(a, b)


# ---------------------------------------------------------------------------
# Normalized maxima of diagnostics along return orbits


def _wrap_system(system):
    from .systems import BilliardSystem

    if isinstance(system, TableGeometry):
        return BilliardSystem(system)
    return system


def max_diag_report(system, obs: Observable, which: str, n: int, seed: int,
                    alpha: float | None = None) -> dict:
    """n^(-1/alpha) max over n first returns of the chosen excursion statistic.

    which is 'M1', 'M2' or 'phi'.  Censored excursions (grazing, caps) are
    dropped and counted; the orbit restarts from a fresh substream start.
    """
    system = _wrap_system(system)
    if which not in ("M1", "M2", "phi"):
        raise ValueError(f"which must be M1, M2 or phi, got {which!r}")
    if alpha is None:
        alpha = system.alpha
    if n < 1:
        raise ValueError("need n >= 1")
    m1 = np.empty(n)
    m2 = np.empty(n)
    phi = np.empty(n, dtype=np.int64)
    filled = 0
    censored = 0
    stream = 0
    chunk = system.chunk
    m1_buf = np.empty(chunk)
    m2_buf = np.empty(chunk)
    phi_buf = np.empty(chunk, dtype=np.int64)
    one_m1 = np.empty(1)
    one_m2 = np.empty(1)
    one_phi = np.empty(1, dtype=np.int64)
    ones_mask = np.ones(1, dtype=np.uint8)
    while filled < n:
        state = system.start_in_cross_section(seed, stream)
        stream += 1
        v0 = obs.evaluate(system.state_columns(state))
        _, diag_state = K.excursion_diag(
            np.asarray(v0, dtype=float), ones_mask, K.DIAG_EMPTY, one_m1, one_m2, one_phi
        )
        status = 0
        while filled < n:
            cols, in_x, state, done, status = system.trace_chunk(state)
            if done == 0:
                break
            vals = np.ascontiguousarray(obs.evaluate(cols), dtype=float)
            mask = np.ascontiguousarray(in_x[:done]).view(np.uint8)
            ndone, diag_state = K.excursion_diag(
                vals[:done], mask, diag_state, m1_buf, m2_buf, phi_buf
            )
            take = min(ndone, n - filled)
            m1[filled:filled + take] = m1_buf[:take]
            m2[filled:filled + take] = m2_buf[:take]
            phi[filled:filled + take] = phi_buf[:take]
            filled += take
            if status != 0:
                break
        if status != 0:
            censored += 1
    norm = n ** (-1.0 / alpha)
    stats = {
        "M1": float(np.max(m1)) * norm,
        "M2": float(np.max(m2)) * norm,
        "phi": float(np.max(phi)) * norm,
    }
    return {
        "which": which,
        "n": n,
        "seed": seed,
        "alpha": alpha,
        "statistic": stats[which],
        "statistics": stats,
        "censored": censored,
    }


def max_diag_statistic(system, obs: Observable, which: str, n: int, alpha: float | None = None,
                       seed: int = 0) -> float:
    return max_diag_report(system, obs, which, n, seed, alpha)["statistic"]
