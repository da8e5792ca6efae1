"""Cadlag step paths, completed graphs, and the Skorokhod path distances.

A StepPath is right-continuous and piecewise constant with finitely many
jumps; the completed graph fills each jump with a vertical segment, giving a
connected polyline of axis-aligned segments.  Distances:

  dist_uniform  exact sup distance over the merged jump grid;
  dist_M2       exact symmetric Hausdorff distance between completed graphs;
  dist_M1       discrete Frechet distance (monotone correspondences of the
                completed graphs) on densified graphs; an upper bound within
                one mesh of the true infimum;
  dist_J1       optimization over piecewise-linear increasing time changes
                anchored on the union of jump times; certified upper bound,
                with a jump/level-matching obstruction lower bound.

One plane norm is used throughout M1 and M2: max(|dt|, |ds|).  With this
choice the reported values are genuinely ordered,

    dist_M2 <= dist_M1 <= dist_J1 + mesh <= dist_uniform + mesh,

because a monotone correspondence is a particular way to pick near points
(Hausdorff <= Frechet) and a J1 time change induces a monotone
correspondence.  The L1 plane norm |dt| + |ds| would break the first
inequality by up to a factor of two; since the two norms are equivalent,
every convergence/divergence diagnostic is unaffected by the choice.
"""

import io
import math
from dataclasses import dataclass, field

import numpy as np


class DomainMismatchError(ValueError):
    """Path distances require identical domains."""


def _as_float_array(xs):
    arr = np.asarray(xs, dtype=float)
    return arr.reshape(-1)


@dataclass(frozen=True)
class StepPath:
    """Piecewise-constant cadlag path on [a, b].

    values[k] is the level on [times[k-1], times[k]) (with times[-1] := a and
    times[len] := b); the path is right-continuous, so the level at a jump
    time is the post-jump value.
    """

    a: float
    b: float
    times: np.ndarray = field(default_factory=lambda: np.empty(0))
    values: np.ndarray = field(default_factory=lambda: np.zeros(1))

    def __post_init__(self):
        object.__setattr__(self, "times", _as_float_array(self.times))
        object.__setattr__(self, "values", _as_float_array(self.values))
        if not self.b >= self.a:
            raise ValueError(f"domain end {self.b} precedes start {self.a}")
        t = self.times
        if t.size:
            if not (np.all(np.diff(t) > 0.0)):
                raise ValueError("jump times must be strictly increasing")
            if not (t[0] > self.a and t[-1] <= self.b):
                raise ValueError("jump times must lie in (a, b]")
        if self.values.size != t.size + 1:
            raise ValueError(
                f"need one more level than jump count: {self.values.size} levels, {t.size} jumps"
            )

    @property
    def domain(self) -> tuple[float, float]:
        return self.a, self.b

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        if np.any(t < self.a) or np.any(t > self.b):
            raise ValueError("evaluation point outside the domain")
        idx = np.searchsorted(self.times, t, side="right")
        out = self.values[idx]
        return float(out) if out.ndim == 0 else out

    def left_limit(self, t: float) -> float:
        if not self.a < t <= self.b:
            raise ValueError("left limit needs t in (a, b]")
        idx = int(np.searchsorted(self.times, t, side="left"))
        return float(self.values[idx])

    def canonical(self) -> "StepPath":
        """Equivalent path with zero-height jumps removed."""
        keep = np.flatnonzero(np.diff(self.values) != 0.0)
        return StepPath(self.a, self.b, self.times[keep], self.values[np.r_[0, keep + 1]])

    def same_as(self, other: "StepPath") -> bool:
        p, q = self.canonical(), other.canonical()
        return (
            p.a == q.a
            and p.b == q.b
            and np.array_equal(p.times, q.times)
            and np.array_equal(p.values, q.values)
        )

    def jump_heights(self) -> np.ndarray:
        return np.diff(self.values)


def path_from_sums(partial_sums, n: int, norm: float) -> StepPath:
    """Scaled partial-sum path on [0,1]: level partial_sums[k-1]/norm on [k/n, (k+1)/n).

    The level before the first jump is 0; zero-height jumps are dropped.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    if not norm > 0.0:
        raise ValueError("norm must be positive")
    sums = _as_float_array(partial_sums)
    if sums.size < n:
        raise ValueError(f"need at least n={n} partial sums, got {sums.size}")
    values = np.concatenate([[0.0], sums[:n] / norm])
    times = np.arange(1, n + 1) / n
    return StepPath(0.0, 1.0, times, values).canonical()


def sup_process(p: StepPath, t: float) -> float:
    """Running supremum sup over [a, t] of the path."""
    if not p.a <= t <= p.b:
        raise ValueError("t outside the domain")
    k = int(np.searchsorted(p.times, t, side="right"))
    return float(np.max(p.values[: k + 1]))


def restrict(p: StepPath, a: float, b: float) -> StepPath:
    """Restriction of the path to a subdomain [a, b]."""
    if not (p.a <= a < b <= p.b):
        raise ValueError("need p.a <= a < b <= p.b")
    inside = (p.times > a) & (p.times <= b)
    times = p.times[inside]
    first = int(np.searchsorted(p.times, a, side="right"))
    idx = np.flatnonzero(inside)
    values = np.concatenate([[p.values[first]], p.values[idx + 1]])
    return StepPath(a, b, times, values)


# ---------------------------------------------------------------------------
# Completed graphs


@dataclass(frozen=True)
class CompletedGraph:
    """Ordered polyline tracing a step path's graph with jumps filled in.

    Vertices alternate plateau ends and vertical ends; reconstructing the
    path from the plateaus reproduces the canonical StepPath exactly.
    """

    a: float
    b: float
    vertices: np.ndarray  # (m, 2) in graph order

    def reconstruct(self) -> StepPath:
        v = self.vertices
        if v.shape[0] == 1:
            return StepPath(self.a, self.b, [], [v[0, 1]])
        times = []
        values = [v[0, 1]]
        for i in range(1, v.shape[0]):
            t0, s0 = v[i - 1]
            t1, s1 = v[i]
            if t1 == t0 and s1 != s0:
                times.append(t0)
                values.append(s1)
        return StepPath(self.a, self.b, times, values)


def completed_graph(p: StepPath) -> CompletedGraph:
    q = p.canonical()
    verts = [(q.a, q.values[0])]
    for k in range(q.times.size):
        t = q.times[k]
        verts.append((t, q.values[k]))
        verts.append((t, q.values[k + 1]))
    if q.b > verts[-1][0]:
        verts.append((q.b, q.values[-1]))
    return CompletedGraph(q.a, q.b, np.array(verts, dtype=float))


def _graph_segments(g: CompletedGraph):
    """Normalized axis-aligned boxes (x0<=x1, y0<=y1) for each polyline edge.

    A single-point graph yields one degenerate box.
    """
    v = g.vertices
    if v.shape[0] == 1:
        x = np.array([v[0, 0]])
        y = np.array([v[0, 1]])
        return x, y, x.copy(), y.copy()
    p0 = v[:-1]
    p1 = v[1:]
    x0 = np.minimum(p0[:, 0], p1[:, 0])
    x1 = np.maximum(p0[:, 0], p1[:, 0])
    y0 = np.minimum(p0[:, 1], p1[:, 1])
    y1 = np.maximum(p0[:, 1], p1[:, 1])
    return x0, y0, x1, y1


# ---------------------------------------------------------------------------
# Uniform distance


def _check_domains(p1: StepPath, p2: StepPath):
    if p1.a != p2.a or p1.b != p2.b:
        raise DomainMismatchError(f"domains differ: [{p1.a},{p1.b}] vs [{p2.a},{p2.b}]")


def dist_uniform(p1: StepPath, p2: StepPath) -> float:
    """Exact sup |p1 - p2| over the merged jump grid."""
    _check_domains(p1, p2)
    grid = np.unique(np.concatenate([[p1.a], p1.times, p2.times, [p1.b]]))
    v1 = p1(grid)
    v2 = p2(grid)
    return float(np.max(np.abs(np.atleast_1d(v1) - np.atleast_1d(v2))))


# ---------------------------------------------------------------------------
# M2: exact Hausdorff distance between completed graphs, max plane norm


def _boxes_dist(px, py, bx0, by0, bx1, by1):
    gx = np.maximum(np.maximum(bx0 - px, px - bx1), 0.0)
    gy = np.maximum(np.maximum(by0 - py, py - by1), 0.0)
    return np.maximum(gx, gy)


def _envelope_max(f0, f1, h):
    """Exact max over [0,h] of the lower envelope of lines t -> f0 + slope*t.

    The envelope is concave on the interval, so the maximum either sits at an
    endpoint or at the crossing of the two active lines; the loop cuts with
    any line passing below the current candidate crossing.
    """
    best = max(float(np.min(f0)), float(np.min(f1)))
    if h <= 0.0 or f0.size == 1:
        return best
    slope = (f1 - f0) / h
    u = int(np.argmin(f0))
    w = int(np.argmin(f1))
    for _ in range(f0.size + 2):
        mu, mw = slope[u], slope[w]
        if mu <= 0.0 or mw >= 0.0 or u == w:
            return best
        denom = mu - mw
        tx = (f0[w] - f0[u]) / denom
        if not 0.0 < tx < h:
            return best
        vals = f0 + slope * tx
        vmin = float(np.min(vals))
        best = max(best, vmin)
        cross = f0[u] + mu * tx
        if vmin >= cross - 1e-14 * (1.0 + abs(cross)):
            return best
        amin = int(np.argmin(vals))
        if slope[amin] > 0.0:
            u = amin
        else:
            w = amin
    return best


def _directed_hausdorff(ga: CompletedGraph, gb: CompletedGraph) -> float:
    ax0, ay0, ax1, ay1 = _graph_segments(ga)
    bx0, by0, bx1, by1 = _graph_segments(gb)
    worst = 0.0
    for i in range(ax0.size):
        x0, y0, x1, y1 = ax0[i], ay0[i], ax1[i], ay1[i]
        horizontal = y0 == y1
        length = (x1 - x0) if horizontal else (y1 - y0)
        if length == 0.0:
            d = float(np.min(_boxes_dist(x0, y0, bx0, by0, bx1, by1)))
            worst = max(worst, d)
            continue
        # Kinks: parameter values where the moving coordinate crosses a box
        # bound of some segment of gb, or where the two gap components of the
        # max-norm distance exchange dominance (fixed gap g in the frozen
        # coordinate crossed at bound -/+ g).
        if horizontal:
            gfix = np.maximum(np.maximum(by0 - y0, y0 - by1), 0.0)
            cand = np.concatenate([bx0 - x0, bx1 - x0, bx0 - gfix - x0, bx1 + gfix - x0])
        else:
            gfix = np.maximum(np.maximum(bx0 - x0, x0 - bx1), 0.0)
            cand = np.concatenate([by0 - y0, by1 - y0, by0 - gfix - y0, by1 + gfix - y0])
        cand = cand[(cand > 0.0) & (cand < length)]
        ts = np.unique(np.concatenate([[0.0, length], cand]))
        if horizontal:
            pxs, pys = x0 + ts, np.full(ts.size, y0)
        else:
            pxs, pys = np.full(ts.size, x0), y0 + ts
        dmat = _boxes_dist(pxs[None, :], pys[None, :], bx0[:, None], by0[:, None],
                           bx1[:, None], by1[:, None])
        worst = max(worst, float(np.max(np.min(dmat, axis=0))))
        for j in range(ts.size - 1):
            worst = max(worst, _envelope_max(dmat[:, j], dmat[:, j + 1], ts[j + 1] - ts[j]))
    return worst


def dist_M2(p1: StepPath, p2: StepPath) -> float:
    """Exact symmetric Hausdorff distance between completed graphs."""
    _check_domains(p1, p2)
    g1 = completed_graph(p1)
    g2 = completed_graph(p2)
    return max(_directed_hausdorff(g1, g2), _directed_hausdorff(g2, g1))


def dist_M2_sampled(p1: StepPath, p2: StepPath, samples_per_unit: int = 2000) -> float:
    """Brute-force Hausdorff over densely sampled graphs (testing oracle)."""
    _check_domains(p1, p2)

    def sample(g):
        pts = [g.vertices[0]]
        for i in range(1, g.vertices.shape[0]):
            p0, p1_ = g.vertices[i - 1], g.vertices[i]
            ln = abs(p1_[0] - p0[0]) + abs(p1_[1] - p0[1])
            k = max(int(ln * samples_per_unit), 1)
            frac = np.linspace(0.0, 1.0, k + 1)[1:]
            pts.extend(p0[None, :] + frac[:, None] * (p1_ - p0)[None, :])
        return np.asarray(pts)

    sa = sample(completed_graph(p1))
    sb = sample(completed_graph(p2))

    def directed(u, v):
        worst = 0.0
        for chunk in np.array_split(u, max(1, u.shape[0] // 512)):
            d = np.maximum(
                np.abs(chunk[:, None, 0] - v[None, :, 0]),
                np.abs(chunk[:, None, 1] - v[None, :, 1]),
            )
            worst = max(worst, float(np.max(np.min(d, axis=1))))
        return worst

    return max(directed(sa, sb), directed(sb, sa))


# ---------------------------------------------------------------------------
# M1: discrete Frechet distance with max(|dt|, |ds|) ground metric


def _densify(g: CompletedGraph, mesh: float) -> np.ndarray:
    v = g.vertices
    if v.shape[0] == 1:
        return v.copy()
    pts = [v[0]]
    for i in range(1, v.shape[0]):
        p0, p1 = v[i - 1], v[i]
        ln = max(abs(p1[0] - p0[0]), abs(p1[1] - p0[1]))
        k = max(int(math.ceil(ln / mesh)), 1) if mesh > 0.0 else 1
        frac = np.linspace(0.0, 1.0, k + 1)[1:]
        pts.extend(p0[None, :] + frac[:, None] * (p1 - p0)[None, :])
    return np.asarray(pts)


def _graph_linf_length(g: CompletedGraph) -> float:
    v = g.vertices
    if v.shape[0] < 2:
        return 0.0
    d = np.diff(v, axis=0)
    return float(np.sum(np.maximum(np.abs(d[:, 0]), np.abs(d[:, 1]))))


def skorokhod_mesh(p1: StepPath, p2: StepPath, refinement: int) -> float:
    """Discretization mesh used by dist_M1/dist_J1 at this refinement."""
    ln = max(_graph_linf_length(completed_graph(p1)), _graph_linf_length(completed_graph(p2)),
             p1.b - p1.a)
    return ln / max(refinement, 1)


def _frechet_feasible(cost: np.ndarray, eps: float) -> bool:
    allowed = cost <= eps
    m, k = allowed.shape
    if not (allowed[0, 0] and allowed[-1, -1]):
        return False
    idx = np.arange(k)
    # first row: the prefix of allowed cells is reachable by right-moves
    blocked = ~allowed[0]
    first_block = int(np.argmax(blocked)) if blocked.any() else k
    reach = np.zeros(k, dtype=bool)
    reach[:first_block] = True
    for i in range(1, m):
        seed = reach.copy()
        seed[1:] |= reach[:-1]
        seed &= allowed[i]
        breaks = ~allowed[i]
        last_seed = np.maximum.accumulate(np.where(seed, idx, -1))
        last_break = np.maximum.accumulate(np.where(breaks, idx, -1))
        reach = allowed[i] & (last_seed >= 0) & (last_seed > last_break)
    return bool(reach[-1])


def _discrete_frechet(pa: np.ndarray, pb: np.ndarray) -> float:
    cost = np.maximum(
        np.abs(pa[:, None, 0] - pb[None, :, 0]),
        np.abs(pa[:, None, 1] - pb[None, :, 1]),
    )
    levels = np.unique(cost)
    lo, hi = 0, levels.size - 1
    if _frechet_feasible(cost, levels[0]):
        return float(levels[0])
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if _frechet_feasible(cost, levels[mid]):
            hi = mid
        else:
            lo = mid
    return float(levels[hi])


def dist_M1(p1: StepPath, p2: StepPath, refinement: int = 64, interval: bool = False):
    """Monotone-correspondence distance between completed graphs.

    Discrete Frechet value on graphs densified to the stated refinement; an
    upper bound on the true infimum, within one mesh of it and nonincreasing
    in refinement up to mesh error.  With interval=True returns the certified
    (lower, upper) pair.
    """
    _check_domains(p1, p2)
    njumps = max(p1.canonical().times.size, p2.canonical().times.size)
    if refinement < max(njumps, 1):
        raise ValueError(f"refinement {refinement} below jump count {njumps}")
    mesh = skorokhod_mesh(p1, p2, refinement)
    pa = _densify(completed_graph(p1), mesh)
    pb = _densify(completed_graph(p2), mesh)
    upper = _discrete_frechet(pa, pb)
    if interval:
        return max(upper - mesh, 0.0), upper
    return upper


# ---------------------------------------------------------------------------
# J1: piecewise-linear time changes anchored on jump times


def _grid_with_jumps(p_src: StepPath, p_dst: StepPath, refinement: int) -> np.ndarray:
    uniform = np.linspace(p_src.a, p_src.b, max(refinement, 2) + 1)
    grid = np.unique(
        np.concatenate([uniform, p_src.canonical().times, p_dst.canonical().times])
    )
    return grid


def _levels_on_grid(p: StepPath, grid: np.ndarray) -> np.ndarray:
    """Level of p on each cell [grid[i], grid[i+1])."""
    return np.asarray(p(grid[:-1]), dtype=float).reshape(-1)


def _j1_dp_one_direction(p1: StepPath, p2: StepPath, refinement: int) -> float:
    """Upper bound on the J1 distance: optimize lambda with lambda(t_i) on a grid.

    Sources are the jump times of p1 plus a uniform grid; targets the jump
    times of p2 plus the same grid.  Between consecutive sources the value
    error is the exact sup of |p2 - level| over the image window, which
    aligns with target cells by construction.  Repeated targets are allowed
    (the limit of steep strictly increasing maps squeezing the source cell
    onto a point, whose value cost is the right-continuous level there), so
    several sources may stack next to one matched jump.
    """
    src = _grid_with_jumps(p1, p2, refinement)
    tgt = src  # shared grid keeps the identity map representable
    lv1 = _levels_on_grid(p1, src)
    lv2 = _levels_on_grid(p2, tgt)
    lv2_at = np.asarray(p2(tgt), dtype=float).reshape(-1)
    m = src.size
    k = tgt.size
    # Range max/min of p2 cell levels between target indices (cells j..k-1).
    rng_max = np.full((k, k), -np.inf)
    rng_min = np.full((k, k), np.inf)
    for j in range(k - 1):
        rng_max[j, j + 1:] = np.maximum.accumulate(lv2[j:])
        rng_min[j, j + 1:] = np.minimum.accumulate(lv2[j:])
    time_cost = np.abs(tgt[None, :] - src[:, None])  # (m, k)
    big = np.inf
    dp = np.full(k, big)
    dp[0] = 0.0  # lambda(a) = a pinned
    strict_upper = np.triu(np.ones((k, k), dtype=bool), 1)
    for i in range(m - 1):
        seg_max = rng_max - lv1[i]
        seg_min = lv1[i] - rng_min
        seg_cost = np.maximum(seg_max, seg_min)  # (j, j') window sup
        cand = np.maximum(dp[:, None], seg_cost)
        cand = np.where(strict_upper, cand, big)
        nxt = np.min(cand, axis=0)
        stay = np.maximum(dp, np.abs(lv2_at - lv1[i]))
        stay[k - 1] = big  # the right endpoint is reserved for lambda(b) = b
        nxt = np.minimum(nxt, stay)
        nxt = np.maximum(nxt, time_cost[i + 1])
        dp = nxt
    endpoint = abs(float(p2(p2.b)) - float(p1(p1.b)))
    return max(float(dp[-1]), endpoint)


def _j1_lower_bound(p1: StepPath, p2: StepPath) -> float:
    """Necessary-condition bound: jumps must match jumps (or be small) and
    plateau levels must be approximated nearby."""

    def one_side(pa: StepPath, pb: StepPath) -> float:
        pa_c, pb_c = pa.canonical(), pb.canonical()
        ja, ha = pa_c.times, np.diff(pa_c.values)
        jb, hb = pb_c.times, np.diff(pb_c.values)
        worst = 0.0
        for t, h in zip(ja, ha):
            # eps feasible iff some jump of pb within eps in time and 2*eps in height
            need = abs(h) / 2.0
            if jb.size:
                cand = np.maximum(np.abs(jb - t), np.abs(np.abs(hb) - abs(h)) / 2.0)
                need = min(need, float(np.min(cand)))
            worst = max(worst, need)
        # plateau levels of pa must be eps-matched by pb levels within eps in time
        edges_a = np.concatenate([[pa_c.a], pa_c.times, [pa_c.b]])
        la = pa_c.values
        edges_b = np.concatenate([[pb_c.a], pb_c.times, [pb_c.b]])
        lb = pb_c.values
        for i in range(la.size):
            p_lo, p_hi = edges_a[i], edges_a[i + 1]
            best = np.inf
            for j in range(lb.size):
                q_lo, q_hi = edges_b[j], edges_b[j + 1]
                gap = max(q_lo - p_hi, p_lo - q_hi, 0.0)
                best = min(best, max(gap, abs(la[i] - lb[j])))
            worst = max(worst, float(best))
        return worst

    return max(one_side(p1, p2), one_side(p2, p1))


def dist_J1(p1: StepPath, p2: StepPath, refinement: int = 64, interval: bool = False):
    """Jump-matching distance: time changes must align jumps with jumps.

    Point value is the certified upper bound (the best explicit time change
    found); with interval=True the jump/level obstruction lower bound comes
    along.  The identity time change is always a candidate, so the value
    never exceeds the uniform distance.
    """
    _check_domains(p1, p2)
    upper = min(
        _j1_dp_one_direction(p1, p2, refinement),
        _j1_dp_one_direction(p2, p1, refinement),
        dist_uniform(p1, p2),
    )
    if interval:
        lower = min(_j1_lower_bound(p1, p2), upper)
        return lower, upper
    return upper


# ---------------------------------------------------------------------------
# Endpoint flattening bound


def flatten_endpoints(p: StepPath, a: float, b: float):
    """Replace the path on [a,b] by its endpoint levels; certified M2 bound.

    Returns (flattened path on [a,b], bound, A, B) with
    bound = (b-a) + min(A, B); the measured M2 distance between the
    restriction and the flattened path never exceeds the bound.
    """
    if not a < b:
        raise ValueError("need a < b")
    seg = restrict(p, a, b)
    ga = float(seg(a))
    gb = float(seg(b))
    grid_vals = seg.values
    sup_drop_a = float(np.max(ga - grid_vals))
    sup_rise_b = float(np.max(grid_vals - gb))
    sup_rise_a = float(np.max(grid_vals - ga))
    sup_drop_b = float(np.max(gb - grid_vals))
    big_a = sup_drop_a + sup_rise_b
    big_b = sup_rise_a + sup_drop_b
    if gb != ga:
        flat = StepPath(a, b, [b], [ga, gb])
    else:
        flat = StepPath(a, b, [], [ga])
    bound = (b - a) + min(big_a, big_b)
    return flat, bound, big_a, big_b


# ---------------------------------------------------------------------------
# Serialization: CSV columns (time, value), level holds from that time


def path_to_csv(p: StepPath) -> str:
    lines = [f"# domain_end={float(p.b)!r}", "time,value"]
    lines.append(f"{float(p.a)!r},{float(p.values[0])!r}")
    for t, v in zip(p.times, p.values[1:]):
        lines.append(f"{float(t)!r},{float(v)!r}")
    return "\n".join(lines) + "\n"


def path_from_csv(text: str) -> StepPath:
    domain_end = None
    times = []
    values = []
    first = None
    for raw in io.StringIO(text):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            if "domain_end=" in line:
                domain_end = float(line.split("domain_end=")[1])
            continue
        if line.lower().startswith("time"):
            continue
        t_str, v_str = line.split(",")
        t, v = float(t_str), float(v_str)
        if first is None:
            first = t
            values.append(v)
        else:
            times.append(t)
            values.append(v)
    if first is None:
        raise ValueError("empty path CSV")
    if domain_end is None:
        domain_end = times[-1] if times else first
    return StepPath(first, domain_end, times, values)


def random_step_path(rng, max_jumps: int = 8, domain=(0.0, 1.0), scale: float = 1.0) -> StepPath:
    """Random test path: Poisson-ish jump count, uniform times, centered levels."""
    a, b = domain
    k = int(rng.integers(0, max_jumps + 1))
    times = np.sort(rng.random(k)) * (b - a) + a
    times = np.unique(times[times > a])
    values = scale * (rng.random(times.size + 1) * 2.0 - 1.0)
    return StepPath(a, b, times, values)
