"""Dispersing billiard table with a cusp at a flat point.

The boundary is three curves: the cusp pair (s, +-s^beta/beta) for
s in [0, s_max] (tangent to the symmetry axis at the tip, flatness exponent
beta > 2) closed off by a circular arc centred on the axis, so the ray
escaping the cusp along the axis meets the arc perpendicularly.  Phase
coordinates are (r, theta): global boundary arc length and the angle from
the oriented tangent to the outgoing velocity, measured through the table
interior.  The invariant collision measure has density sin(theta) dr dtheta
/ (2 |boundary|).

Public curve numbering: 1 upper cusp wall, 2 lower cusp wall, 3 closing arc.
The cross-section for first returns is the arc, X = {curve 3} x [0, pi].
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import _pykernels as _ref
from .backend import kernels as K
from .rng import substream

_TWO_PI = 2.0 * math.pi

PUBLIC_FROM_INTERNAL = {0: 1, 1: 2, 2: 3}
INTERNAL_FROM_PUBLIC = {1: 0, 2: 1, 3: 2}


class GeometryError(ValueError):
    """Parameters do not produce a simple closed dispersing boundary."""


class BilliardNumericsError(RuntimeError):
    """Collision root search failed."""


@dataclass(frozen=True)
class PhasePoint:
    """Post-collision state: curve index (1..3), global arc length r, angle theta."""

    curve: int
    r: float
    theta: float


@dataclass(frozen=True)
class CollisionRecord:
    point: PhasePoint
    position: tuple[float, float]
    flight_time: float
    in_cross_section: bool
    cusp_distance: float
    status: int = 0


@dataclass(frozen=True)
class FirstReturn:
    """phi collisions of one excursion; steps[-1] is the arrival back in X."""

    phi: int
    start: CollisionRecord
    steps: list[CollisionRecord]
    status: int = 0


@dataclass
class TableGeometry:
    beta: float
    s_max: float
    arc_radius: float
    arc_center_x: float
    arc_half_angle: float
    wall_len: float
    arc_len: float
    perimeter: float
    alpha: float
    graze_tol: float
    excursion_cap: int
    table_h: float
    table_cum: np.ndarray
    _kg: object = field(default=None, repr=False)

    def kernel_geom(self):
        if self._kg is None:
            self._kg = K.BilliardGeom(
                self.beta, self.s_max, self.arc_radius, self.arc_center_x,
                self.arc_half_angle, self.wall_len, self.arc_len,
                self.graze_tol, self.table_h, self.table_cum,
            )
        return self._kg

    # Cusp coordinates in phase space: the tip seen from each wall.
    @property
    def cusp_r_upper(self) -> float:
        return self.perimeter

    @property
    def cusp_r_lower(self) -> float:
        return 0.0

    def curve_r_range(self, curve: int) -> tuple[float, float]:
        lw, la = self.wall_len, self.arc_len
        if curve == 2:
            return 0.0, lw
        if curve == 3:
            return lw, lw + la
        if curve == 1:
            return lw + la, 2.0 * lw + la
        raise ValueError(f"curve index must be 1, 2 or 3, got {curve}")

    def cross_section_r_range(self) -> tuple[float, float]:
        return self.curve_r_range(3)

    def config_block(self) -> str:
        """Key-value description of the table (round-trips through build)."""
        lines = [
            f"beta = {self.beta!r}",
            f"s_max = {self.s_max!r}",
            f"arc_radius = {self.arc_radius!r}",
            f"graze_tol = {self.graze_tol!r}",
            f"excursion_cap = {self.excursion_cap}",
            f"table_size = {len(self.table_cum) - 1}",
        ]
        return "\n".join(lines) + "\n"


def _validate_arc(beta, s_max, radius, cx, a0, n_check=4096):
    """The closing arc must stay strictly inside the cusp sliver."""
    s_left = cx - radius
    if not (0.0 < s_left < s_max):
        raise GeometryError(
            "closing arc does not close the table: its leftmost point "
            f"(s={s_left:.6g}) must lie strictly between the cusp and s_max"
        )
    ss = np.linspace(s_left, s_max, n_check, endpoint=False)[1:]
    arc_z = np.sqrt(np.maximum(radius**2 - (ss - cx) ** 2, 0.0))
    wall_z = ss**beta / beta
    if np.any(arc_z >= wall_z):
        raise GeometryError("closing arc crosses the cusp walls (self-intersecting boundary)")


def build_cusp_table(
    beta: float,
    s_max: float,
    arc_radius: float,
    graze_tol: float = 1e-12,
    excursion_cap: int = 10**7,
    table_size: int = 2048,
) -> TableGeometry:
    """Construct and validate the one-cusp table.

    The arc is the piece of the circle of radius arc_radius centred on the
    symmetry axis that passes through both wall endpoints; the centre sits
    beyond the wall endpoints so the arc bulges into the table (dispersing).
    """
    if not beta > 2.0:
        raise GeometryError(f"flatness exponent must exceed 2, got beta={beta}")
    if not s_max > 0.0:
        raise GeometryError(f"s_max must be positive, got {s_max}")
    w_max = s_max**beta / beta
    if not arc_radius > w_max:
        raise GeometryError(
            f"arc radius {arc_radius} too small: must exceed the wall half-opening {w_max:.6g}"
        )
    cx = s_max + math.sqrt(arc_radius**2 - w_max**2)
    a0 = math.asin(w_max / arc_radius)
    _validate_arc(beta, s_max, arc_radius, cx, a0)

    # Corner angle between wall tangent and arc tangent must be nonzero.
    m = s_max ** (beta - 1.0)
    gn = math.sqrt(1.0 + m * m)
    wall_tan = (1.0 / gn, m / gn)
    arc_tan = (-math.sin(-a0), math.cos(-a0))
    cross = wall_tan[0] * arc_tan[1] - wall_tan[1] * arc_tan[0]
    if abs(cross) < 1e-9:
        raise GeometryError("zero-angle corner where the wall meets the closing arc")

    h = s_max / table_size
    cum = np.empty(table_size + 1)
    cum[0] = 0.0
    acc = 0.0
    for i in range(table_size):
        acc += _ref._gl16(beta, i * h, (i + 1) * h)
        cum[i + 1] = acc
    wall_len = float(cum[-1])
    arc_len = 2.0 * a0 * arc_radius
    return TableGeometry(
        beta=beta,
        s_max=s_max,
        arc_radius=arc_radius,
        arc_center_x=cx,
        arc_half_angle=a0,
        wall_len=wall_len,
        arc_len=arc_len,
        perimeter=2.0 * wall_len + arc_len,
        alpha=beta / (beta - 1.0),
        graze_tol=graze_tol,
        excursion_cap=excursion_cap,
        table_h=h,
        table_cum=cum,
    )


def internal_from_phase(geom: TableGeometry, p: PhasePoint):
    curve = INTERNAL_FROM_PUBLIC[p.curve]
    lo, hi = geom.curve_r_range(p.curve)
    if not lo - 1e-9 <= p.r <= hi + 1e-9:
        raise ValueError(f"r={p.r} outside curve {p.curve} range [{lo}, {hi}]")
    kg = geom.kernel_geom()
    c2, par = K.param_from_global_r(kg, min(max(p.r, lo), hi))
    if c2 != curve:
        # r sits exactly on a junction; trust the declared curve.
        if p.curve == 3:
            par = geom.arc_half_angle if p.r <= lo else -geom.arc_half_angle
        else:
            r_along = p.r if p.curve == 2 else geom.perimeter - p.r
            par = K.wall_s_from_arclen(kg, r_along)
    return curve, par, p.theta


def phase_from_internal(geom: TableGeometry, curve: int, par: float, theta: float) -> PhasePoint:
    kg = geom.kernel_geom()
    return PhasePoint(PUBLIC_FROM_INTERNAL[curve], float(K.global_r(kg, curve, par)), float(theta))


def boundary_point(geom: TableGeometry, curve: int, r: float):
    """((x, y), unit tangent, curvature) at arc-length r on the given curve."""
    lo, hi = geom.curve_r_range(curve)
    if not lo - 1e-12 <= r <= hi + 1e-12:
        raise ValueError(f"r={r} outside curve {curve} range [{lo}, {hi}]")
    kg = geom.kernel_geom()
    ci = INTERNAL_FROM_PUBLIC[curve]
    if ci == 2:
        par = geom.arc_half_angle - (r - geom.wall_len) / geom.arc_radius
    else:
        r_along = r if ci == 1 else geom.perimeter - r
        par = K.wall_s_from_arclen(kg, min(max(r_along, 0.0), geom.wall_len))
    x, y, tx, ty, _, _, kappa = K.boundary_local(kg, ci, par)
    return (x, y), (tx, ty), kappa


def _record(geom, kg, curve, par, theta, prev_xy=None, status=0) -> CollisionRecord:
    x, y, _, _, _, _, _ = K.boundary_local(kg, curve, par)
    flight = math.hypot(x - prev_xy[0], y - prev_xy[1]) if prev_xy is not None else 0.0
    return CollisionRecord(
        point=phase_from_internal(geom, curve, par, theta),
        position=(x, y),
        flight_time=flight,
        in_cross_section=(curve == 2),
        cusp_distance=math.hypot(x, y),
        status=status,
    )


def collision_map(geom: TableGeometry, p: PhasePoint) -> CollisionRecord:
    """One application of the collision map T."""
    if not geom.graze_tol < p.theta < math.pi - geom.graze_tol:
        raise ValueError(f"grazing input angle theta={p.theta}")
    kg = geom.kernel_geom()
    curve, par, theta = internal_from_phase(geom, p)
    x0, y0, _, _, _, _, _ = K.boundary_local(kg, curve, par)
    c2, p2, t2, status = K.step(kg, curve, par, theta)
    if status == _ref.LOST:
        raise BilliardNumericsError("ray lost: no boundary intersection found")
    return _record(geom, kg, c2, p2, t2, prev_xy=(x0, y0), status=status)


def sample_invariant_arrays(geom: TableGeometry, seed: int, n: int, *, cross_section=False, stream=0):
    """Invariant-measure samples as internal arrays (curve, par, theta, r)."""
    if n < 1:
        raise ValueError("need n >= 1")
    rng = substream(seed, 0xB111A4D, 1 if cross_section else 0, stream)
    lo, hi = (geom.cross_section_r_range() if cross_section else (0.0, geom.perimeter))
    r = lo + (hi - lo) * rng.random(n)
    theta = np.arccos(1.0 - 2.0 * rng.random(n))
    kg = geom.kernel_geom()
    curve = np.empty(n, dtype=np.int64)
    par = np.empty(n)
    for i in range(n):
        c, s = K.param_from_global_r(kg, float(r[i]))
        curve[i] = c
        par[i] = s
    return curve, par, theta, r


def sample_invariant(geom: TableGeometry, seed: int, n: int) -> list[PhasePoint]:
    """n i.i.d. draws from the invariant collision measure."""
    curve, par, theta, r = sample_invariant_arrays(geom, seed, n)
    return [
        PhasePoint(PUBLIC_FROM_INTERNAL[int(curve[i])], float(r[i]), float(theta[i]))
        for i in range(n)
    ]


def sample_cross_section(geom: TableGeometry, seed: int, n: int) -> list[PhasePoint]:
    """n i.i.d. draws from the invariant measure conditioned on the arc."""
    curve, par, theta, r = sample_invariant_arrays(geom, seed, n, cross_section=True)
    return [
        PhasePoint(PUBLIC_FROM_INTERNAL[int(curve[i])], float(r[i]), float(theta[i]))
        for i in range(n)
    ]


def cusp_aimed_start(geom: TableGeometry, tilt: float) -> PhasePoint:
    """Start on the arc apex aimed into the cusp, tilted off-axis by `tilt`.

    Small tilts give deep excursions; used to probe the excursion-shape
    asymptotics across many decades of return time.
    """
    r_apex = geom.wall_len + geom.arc_half_angle * geom.arc_radius
    return PhasePoint(3, r_apex, math.pi / 2.0 + tilt)


def first_return(geom: TableGeometry, p: PhasePoint) -> FirstReturn:
    """Run one excursion from a cross-section point until it returns.

    The step list holds the phi collisions after p, the last of which is the
    arrival back on the arc.  A grazing/cap/lost event truncates the
    excursion and sets the corresponding status flag.
    """
    lo, hi = geom.cross_section_r_range()
    if p.curve != 3:
        raise ValueError("first_return requires a start on the closing arc (curve 3)")
    kg = geom.kernel_geom()
    curve, par, theta = internal_from_phase(geom, p)
    cap = geom.excursion_cap
    buf_c = np.empty(min(cap, 1 << 20), dtype=np.int64)
    buf_r = np.empty(buf_c.size)
    buf_t = np.empty(buf_c.size)
    buf_x = np.empty(buf_c.size)
    buf_y = np.empty(buf_c.size)
    start = _record(geom, kg, curve, par, theta)
    records = []
    total = 0
    status = _ref.OK
    prev_xy = start.position
    while True:
        chunk_cap = buf_c.size if cap - total > buf_c.size else cap - total
        curve, par, theta, done, status = K.trace_until_return(
            kg, curve, par, theta, chunk_cap, buf_c, buf_r, buf_t, buf_x, buf_y
        )
        for i in range(done):
            rec = CollisionRecord(
                point=PhasePoint(PUBLIC_FROM_INTERNAL[int(buf_c[i])], float(buf_r[i]), float(buf_t[i])),
                position=(float(buf_x[i]), float(buf_y[i])),
                flight_time=math.hypot(buf_x[i] - prev_xy[0], buf_y[i] - prev_xy[1]),
                in_cross_section=bool(buf_c[i] == 2),
                cusp_distance=math.hypot(buf_x[i], buf_y[i]),
            )
            records.append(rec)
            prev_xy = rec.position
        total += done
        if status != _ref.CAPPED or total >= cap:
            break
        if done > 0 and buf_c[done - 1] == 2:
            break
    return FirstReturn(phi=total, start=start, steps=records, status=status)


def excursion_arrays(geom: TableGeometry, p: PhasePoint):
    """One excursion as column arrays (memory-light variant of first_return).

    Row 0 is the start point; rows 1..phi are the collisions, the last being
    the arrival back on the arc.  Returns (phi, cols, status).
    """
    if p.curve != 3:
        raise ValueError("excursions start on the closing arc (curve 3)")
    kg = geom.kernel_geom()
    curve, par, theta = internal_from_phase(geom, p)
    x0, y0, *_ = K.boundary_local(kg, curve, par)
    chunks = [{
        "curve": np.array([2.0 + 1.0]),
        "r": np.array([float(K.global_r(kg, curve, par))]),
        "theta": np.array([theta]),
        "x": np.array([x0]),
        "y": np.array([y0]),
    }]
    cap = geom.excursion_cap
    total = 0
    status = _ref.OK
    size = 1 << 16
    while True:
        buf_c = np.empty(size, dtype=np.int64)
        buf_r = np.empty(size)
        buf_t = np.empty(size)
        buf_x = np.empty(size)
        buf_y = np.empty(size)
        chunk_cap = min(size, cap - total)
        curve, par, theta, done, status = K.trace_until_return(
            kg, curve, par, theta, chunk_cap, buf_c, buf_r, buf_t, buf_x, buf_y
        )
        chunks.append({
            "curve": buf_c[:done].astype(float) + 1.0,
            "r": buf_r[:done].copy(),
            "theta": buf_t[:done].copy(),
            "x": buf_x[:done].copy(),
            "y": buf_y[:done].copy(),
        })
        total += done
        if status != _ref.CAPPED or total >= cap:
            break
        if done > 0 and buf_c[done - 1] == 2:
            break
    cols = {key: np.concatenate([ch[key] for ch in chunks]) for key in chunks[0]}
    return total, cols, status


def trace_orbit_arrays(geom: TableGeometry, state, nsteps: int):
    """nsteps collisions from an internal state (curve, par, theta).

    Returns (columns, in_X, new_state, done, status); columns carry public
    curve numbers as floats alongside r, theta, x, y.
    """
    kg = geom.kernel_geom()
    curve, par, theta = state
    buf_c = np.empty(nsteps, dtype=np.int64)
    buf_r = np.empty(nsteps)
    buf_t = np.empty(nsteps)
    buf_x = np.empty(nsteps)
    buf_y = np.empty(nsteps)
    curve, par, theta, done, status = K.trace_steps(
        kg, curve, par, theta, nsteps, buf_c, buf_r, buf_t, buf_x, buf_y
    )
    cols = {
        "curve": buf_c[:done].astype(float) + 1.0,
        "r": buf_r[:done],
        "theta": buf_t[:done],
        "x": buf_x[:done],
        "y": buf_y[:done],
    }
    return cols, buf_c[:done] == 2, (curve, par, theta), done, status


def collect_returns(geom: TableGeometry, seed: int, nret: int):
    """nret first-return times from invariant cross-section starts.

    Censored excursions (grazing/cap/lost) are dropped, the orbit restarts
    from a fresh substream sample, and the censor count is reported.
    """
    kg = geom.kernel_geom()
    phis = np.empty(nret, dtype=np.int64)
    filled = 0
    censored = 0
    starts_used = 0
    block = None
    while filled < nret:
        idx = starts_used % 256
        if idx == 0:
            block = sample_invariant_arrays(
                geom, seed, 256, cross_section=True, stream=starts_used // 256
            )
        curve = int(block[0][idx])
        par = float(block[1][idx])
        theta = float(block[2][idx])
        starts_used += 1
        out = phis[filled:]
        curve, par, theta, done, status = K.trace_returns(
            kg, curve, par, theta, out.size, geom.excursion_cap, out
        )
        filled += done
        if status != _ref.OK:
            censored += 1
    return phis, censored


def measure_invariance_check(geom: TableGeometry, seed: int, n: int) -> dict:
    """KS distances of the one-step pushforward marginals against mu."""
    from .stable import ks_statistic

    if n < 1:
        raise ValueError("need n >= 1")
    kg = geom.kernel_geom()
    curve, par, theta, _ = sample_invariant_arrays(geom, seed, n)
    r_img = np.empty(n)
    th_img = np.empty(n)
    bad = 0
    for i in range(n):
        c2, p2, t2, status = K.step(kg, int(curve[i]), float(par[i]), float(theta[i]))
        if status != _ref.OK:
            bad += 1
        r_img[i] = K.global_r(kg, c2, p2)
        th_img[i] = t2
    per = geom.perimeter
    ks_r = ks_statistic(r_img, lambda x: np.clip(x / per, 0.0, 1.0))
    ks_theta = ks_statistic(th_img, lambda t: (1.0 - np.cos(np.clip(t, 0.0, math.pi))) / 2.0)
    return {
        "n": n,
        "ks_r_marginal": ks_r,
        "ks_theta_marginal": ks_theta,
        "flagged": bad,
        "note": "distances of the one-step pushforward marginals; no pass/fail implied",
    }
