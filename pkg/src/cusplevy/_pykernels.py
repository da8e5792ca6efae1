"""Pure-Python kernels: billiard collision stepping and intermittent maps.

This module is the reference implementation; `_kernels.pyx` is a compiled
twin with the same arithmetic in the same order, so both backends produce
bit-identical orbits.  Keep the two files in lockstep.

Status codes shared by all tracing functions:
    0 ok, 1 grazing truncation, 2 ray lost (root search failed),
    3 excursion cap exceeded.
"""

import math

# 16-point Gauss-Legendre rule on [-1,1] (positive nodes; rule is symmetric).
GL16_X = (
    0.0950125098376374401853193,
    0.2816035507792589132304605,
    0.4580167776572273863424194,
    0.6178762444026437484466718,
    0.7554044083550030338951012,
    0.8656312023878317438804679,
    0.9445750230732325760779884,
    0.9894009349916499325961542,
)
GL16_W = (
    0.1894506104550684962853967,
    0.1826034150449235888667637,
    0.1691565193950025381893121,
    0.1495959888165767320815017,
    0.1246289712555338720524763,
    0.0951585116824927848099251,
    0.0622535239386478928628438,
    0.0271524594117540948517806,
)

OK = 0
GRAZE = 1
LOST = 2
CAPPED = 3

_POS_GUARD = 1e-13


class BilliardGeom:
    """Numeric geometry handle consumed by the stepping kernels.

    Curve indices: 0 upper cusp wall (s, s^beta/beta), 1 lower cusp wall
    (s, -s^beta/beta), 2 closing circular arc centred on the symmetry axis.
    Wall parameter is s; arc parameter is the signed angle a in [-a0, a0]
    measured from the leftmost point, positive below the axis.
    """

    __slots__ = (
        "beta", "s_max", "radius", "cx", "a0",
        "wall_len", "arc_len", "perimeter",
        "graze_tol", "table_h", "table_cum",
    )

    def __init__(self, beta, s_max, radius, cx, a0, wall_len, arc_len,
                 graze_tol, table_h, table_cum):
        self.beta = beta
        self.s_max = s_max
        self.radius = radius
        self.cx = cx
        self.a0 = a0
        self.wall_len = wall_len
        self.arc_len = arc_len
        self.perimeter = 2.0 * wall_len + arc_len
        self.graze_tol = graze_tol
        self.table_h = table_h
        self.table_cum = table_cum


def wall_speed(beta, s):
    """|d/ds (s, s^beta/beta)| = sqrt(1 + s^(2(beta-1)))."""
    m = s ** (beta - 1.0)
    return math.sqrt(1.0 + m * m)


def _gl16(beta, a, b):
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    acc = 0.0
    for j in range(8):
        dx = half * GL16_X[j]
        acc += GL16_W[j] * (wall_speed(beta, mid - dx) + wall_speed(beta, mid + dx))
    return acc * half


def wall_arclen(g, s):
    """Arc length along a cusp wall from the cusp tip to parameter s."""
    if s <= 0.0:
        return 0.0
    k = int(s / g.table_h)
    n = len(g.table_cum) - 1
    if k >= n:
        k = n - 1
    s0 = k * g.table_h
    return g.table_cum[k] + _gl16(g.beta, s0, s)


def wall_s_from_arclen(g, r):
    """Inverse of wall_arclen by table bracketing plus Newton."""
    if r <= 0.0:
        return 0.0
    if r >= g.wall_len:
        return g.s_max
    cum = g.table_cum
    lo = 0
    hi = len(cum) - 1
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if cum[mid] <= r:
            lo = mid
        else:
            hi = mid
    s = lo * g.table_h + (r - cum[lo]) / wall_speed(g.beta, lo * g.table_h)
    if s < 0.0:
        s = 0.0
    elif s > g.s_max:
        s = g.s_max
    for _ in range(8):
        delta = (wall_arclen(g, s) - r) / wall_speed(g.beta, s)
        s -= delta
        if s < 0.0:
            s = 0.0
        elif s > g.s_max:
            s = g.s_max
        if abs(delta) <= 1e-14 * (1.0 + s):
            break
    return s


def boundary_local(g, curve, par):
    """(x, y, tx, ty, nx, ny, kappa) at a boundary point.

    Tangent follows the boundary with the table interior on the left; the
    normal points into the table.
    """
    if curve == 2:
        sa = math.sin(par)
        ca = math.cos(par)
        x = g.cx - g.radius * ca
        y = -g.radius * sa
        return x, y, -sa, ca, -ca, -sa, 1.0 / g.radius
    beta = g.beta
    m = par ** (beta - 1.0)
    gn = math.sqrt(1.0 + m * m)
    kappa = (beta - 1.0) * par ** (beta - 2.0) / (gn * gn * gn) if par > 0.0 else 0.0
    if curve == 0:
        return par, par ** beta / beta, -1.0 / gn, -m / gn, m / gn, -1.0 / gn, kappa
    return par, -(par ** beta) / beta, 1.0 / gn, -m / gn, m / gn, 1.0 / gn, kappa


def global_r(g, curve, par):
    """Global arc-length coordinate; starts at the cusp tip on the lower wall."""
    if curve == 1:
        return wall_arclen(g, par)
    if curve == 2:
        return g.wall_len + (g.a0 - par) * g.radius
    return g.wall_len + g.arc_len + (g.wall_len - wall_arclen(g, par))


def param_from_global_r(g, r):
    if r <= g.wall_len:
        return 1, wall_s_from_arclen(g, r)
    if r <= g.wall_len + g.arc_len:
        return 2, g.a0 - (r - g.wall_len) / g.radius
    return 0, wall_s_from_arclen(g, 2.0 * g.wall_len + g.arc_len - r)


def _wall_g(beta, sgn, px, py, dx, dy, s):
    return (s - px) * dy - (sgn * (s ** beta) / beta - py) * dx


def _wall_root(beta, sgn, px, py, dx, dy, a, b, fa, fb):
    """Root of the ray/wall cross function on a sign-changing bracket [a, b]."""
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    x = 0.5 * (a + b)
    for _ in range(200):
        fx = _wall_g(beta, sgn, px, py, dx, dy, x)
        if fx == 0.0:
            return x
        if (fa < 0.0) == (fx < 0.0):
            a = x
            fa = fx
        else:
            b = x
            fb = fx
        if b - a <= 1e-15 * (abs(a) + abs(b)) + 1e-300:
            return 0.5 * (a + b)
        dg = dy - sgn * dx * x ** (beta - 1.0)
        if dg != 0.0:
            xn = x - fx / dg
            if a < xn < b:
                x = xn
                continue
        x = 0.5 * (a + b)
    return 0.5 * (a + b)


def _consider_wall(g, wall, px, py, dx, dy, best_t, best_curve, best_par):
    """Earliest forward ray intersection with one cusp wall.

    The cross function is convex or concave in s, so there are at most two
    roots, bracketed on either side of the single interior critical point.
    """
    beta = g.beta
    sgn = 1.0 if wall == 0 else -1.0
    s_lo = 0.0
    s_hi = g.s_max
    f_lo = _wall_g(beta, sgn, px, py, dx, dy, s_lo)
    f_hi = _wall_g(beta, sgn, px, py, dx, dy, s_hi)
    sc = -1.0
    if dx != 0.0:
        ratio = dy / (sgn * dx)
        if ratio > 0.0:
            sc = ratio ** (1.0 / (beta - 1.0))
    brackets = []
    if 0.0 < sc < g.s_max:
        f_c = _wall_g(beta, sgn, px, py, dx, dy, sc)
        brackets.append((s_lo, sc, f_lo, f_c))
        brackets.append((sc, s_hi, f_c, f_hi))
    else:
        brackets.append((s_lo, s_hi, f_lo, f_hi))
    for (a, b, fa, fb) in brackets:
        if fa == 0.0 and fb == 0.0:
            continue
        if (fa < 0.0 and fb < 0.0) or (fa > 0.0 and fb > 0.0):
            continue
        s = _wall_root(beta, sgn, px, py, dx, dy, a, b, fa, fb)
        hx = s
        hy = sgn * (s ** beta) / beta
        t = (hx - px) * dx + (hy - py) * dy
        if t <= 0.0:
            continue
        if abs(hx - px) + abs(hy - py) <= _POS_GUARD * (1.0 + abs(px) + abs(py)):
            continue
        if t < best_t:
            best_t = t
            best_curve = wall
            best_par = s
    return best_t, best_curve, best_par


def _consider_arc(g, px, py, dx, dy, best_t, best_curve, best_par):
    wx = px - g.cx
    wy = py
    b = wx * dx + wy * dy
    q = wx * wx + wy * wy - g.radius * g.radius
    disc = b * b - q
    if disc < 0.0:
        return best_t, best_curve, best_par
    sq = math.sqrt(disc)
    if b < 0.0:
        t_far = -b + sq
        t_near = q / t_far if t_far != 0.0 else 0.0
    else:
        t_far = -b - sq
        t_near = q / t_far if t_far != 0.0 else 0.0
    for t in (t_near, t_far):
        if t <= 0.0:
            continue
        hx = px + t * dx
        hy = py + t * dy
        a = math.atan2(-hy, -(hx - g.cx))
        if abs(a) > g.a0:
            continue
        if abs(hx - px) + abs(hy - py) <= _POS_GUARD * (1.0 + abs(px) + abs(py)):
            continue
        if t < best_t:
            best_t = t
            best_curve = 2
            best_par = a
    return best_t, best_curve, best_par


def step(g, curve, par, theta):
    """One collision: trace the outgoing ray to the next wall and reflect.

    Returns (curve, par, theta, status); on LOST the input state is returned.
    """
    x, y, tx, ty, nx, ny, _ = boundary_local(g, curve, par)
    ct = math.cos(theta)
    st = math.sin(theta)
    dx = ct * tx + st * nx
    dy = ct * ty + st * ny
    best_t = math.inf
    best_curve = -1
    best_par = 0.0
    if curve != 0:
        best_t, best_curve, best_par = _consider_wall(g, 0, x, y, dx, dy, best_t, best_curve, best_par)
    if curve != 1:
        best_t, best_curve, best_par = _consider_wall(g, 1, x, y, dx, dy, best_t, best_curve, best_par)
    if curve != 2:
        best_t, best_curve, best_par = _consider_arc(g, x, y, dx, dy, best_t, best_curve, best_par)
    if best_curve < 0:
        return curve, par, theta, LOST
    _, _, tx2, ty2, nx2, ny2, _ = boundary_local(g, best_curve, best_par)
    vn = dx * nx2 + dy * ny2
    vt = dx * tx2 + dy * ty2
    ntheta = math.atan2(-vn, vt)
    status = OK
    if ntheta < g.graze_tol or ntheta > math.pi - g.graze_tol:
        status = GRAZE
    return best_curve, best_par, ntheta, status


def trace_steps(g, curve, par, theta, n, curve_out, r_out, th_out, x_out, y_out):
    """Record n collisions (post-collision states).  Stops early on trouble."""
    done = 0
    status = OK
    while done < n:
        curve, par, theta, status = step(g, curve, par, theta)
        if status == LOST:
            break
        x, y, _, _, _, _, _ = boundary_local(g, curve, par)
        curve_out[done] = curve
        r_out[done] = global_r(g, curve, par)
        th_out[done] = theta
        x_out[done] = x
        y_out[done] = y
        done += 1
        if status == GRAZE:
            break
    return curve, par, theta, done, status


def trace_until_return(g, curve, par, theta, cap, curve_out, r_out, th_out, x_out, y_out):
    """Collisions up to and including the next arrival on the closing arc."""
    phi = 0
    status = OK
    while True:
        if phi >= cap:
            status = CAPPED
            break
        curve, par, theta, status = step(g, curve, par, theta)
        if status == LOST:
            break
        x, y, _, _, _, _, _ = boundary_local(g, curve, par)
        curve_out[phi] = curve
        r_out[phi] = global_r(g, curve, par)
        th_out[phi] = theta
        x_out[phi] = x
        y_out[phi] = y
        phi += 1
        if status == GRAZE:
            break
        if curve == 2:
            break
    return curve, par, theta, phi, status


def trace_returns(g, curve, par, theta, nret, cap, phi_out):
    """First-return times over successive excursions from the closing arc."""
    done = 0
    status = OK
    while done < nret:
        phi = 0
        while True:
            if phi >= cap:
                status = CAPPED
                break
            curve, par, theta, status = step(g, curve, par, theta)
            if status != OK:
                break
            phi += 1
            if curve == 2:
                break
        if status != OK:
            break
        phi_out[done] = phi
        done += 1
    return curve, par, theta, done, status


DIAG_EMPTY = (0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0)


def excursion_diag(v, in_x, state, m1_out, m2_out, phi_out):
    """One-pass per-excursion diagnostics over an orbit chunk.

    v[k] is the observable at the k-th orbit point, in_x[k] marks points on
    the cross-section (each starts a new excursion and closes the previous
    one).  Partial sums within an excursion are Kahan-compensated.  state is
    (active, phi, s, comp, cmax, cmin, maxdrop, maxrise) and is threaded
    across chunks; returns (ndone, new_state).
    """
    active, phi, s, comp, cmax, cmin, maxdrop, maxrise = state
    ndone = 0
    for k in range(len(v)):
        if in_x[k]:
            if active != 0.0 and phi > 0.0:
                m1_out[ndone] = maxdrop if maxdrop < maxrise else maxrise
                big = cmax if cmax > 0.0 else 0.0
                small = cmin if cmin < 0.0 else 0.0
                m2_out[ndone] = big - small - abs(s)
                phi_out[ndone] = int(phi)
                ndone += 1
            active = 1.0
            phi = 0.0
            s = 0.0
            comp = 0.0
            cmax = -math.inf
            cmin = math.inf
            maxdrop = 0.0
            maxrise = 0.0
        if active != 0.0:
            y = v[k] - comp
            t = s + y
            comp = (t - s) - y
            s = t
            phi += 1.0
            if s > cmax:
                cmax = s
            if s < cmin:
                cmin = s
            if cmax - s > maxdrop:
                maxdrop = cmax - s
            if s - cmin > maxrise:
                maxrise = s - cmin
    return ndone, (active, phi, s, comp, cmax, cmin, maxdrop, maxrise)


def imap_step(variant, alpha, b, x):
    """One step of the intermittent interval map.

    variant 0: x(1 + 2^(1/alpha) x^(1/alpha)) on [0,1/2), 2x-1 on [1/2,1).
    variant 1: x(1 + b x^(1/alpha)) mod 1.
    The neutral-branch increment is accumulated additively so tiny x values
    keep their full relative precision.
    """
    q = 1.0 / alpha
    if variant == 0:
        if x < 0.5:
            y = x + 2.0**q * x ** (1.0 + q)
            if y >= 1.0:
                y = 0.9999999999999999
            return y
        return 2.0 * x - 1.0
    y = x + b * x ** (1.0 + q)
    return y - math.floor(y)


def imap_trace(variant, alpha, b, x, n, xs_out):
    """Record x_0..x_(n-1) and return x_n."""
    for j in range(n):
        xs_out[j] = x
        x = imap_step(variant, alpha, b, x)
    return x


def imap_returns(variant, alpha, b, x, nret, cap, phi_out):
    """First-return times to [1/2, 1) for a start already inside it."""
    done = 0
    status = OK
    while done < nret:
        phi = 0
        while True:
            if phi >= cap:
                status = CAPPED
                break
            x = imap_step(variant, alpha, b, x)
            phi += 1
            if x >= 0.5:
                break
        if status != OK:
            break
        phi_out[done] = phi
        done += 1
    return x, done, status
