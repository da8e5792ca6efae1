# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled kernels: billiard collision stepping and intermittent maps.

Twin of `_pykernels.py` with identical arithmetic in identical order; the
two backends must produce bit-identical orbits.  Keep the files in lockstep.
"""

from libc.math cimport sin, cos, sqrt, atan2, pow, log, floor, fabs, hypot, M_PI, INFINITY

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

cdef double[8] _GLX = [
    0.0950125098376374401853193,
    0.2816035507792589132304605,
    0.4580167776572273863424194,
    0.6178762444026437484466718,
    0.7554044083550030338951012,
    0.8656312023878317438804679,
    0.9445750230732325760779884,
    0.9894009349916499325961542,
]
cdef double[8] _GLW = [
    0.1894506104550684962853967,
    0.1826034150449235888667637,
    0.1691565193950025381893121,
    0.1495959888165767320815017,
    0.1246289712555338720524763,
    0.0951585116824927848099251,
    0.0622535239386478928628438,
    0.0271524594117540948517806,
]

OK = 0
GRAZE = 1
LOST = 2
CAPPED = 3

cdef int _OK = 0
cdef int _GRAZE = 1
cdef int _LOST = 2
cdef int _CAPPED = 3

cdef double _POS_GUARD = 1e-13


cdef class BilliardGeom:
    """Numeric geometry handle consumed by the stepping kernels.

    Curve indices: 0 upper cusp wall, 1 lower cusp wall, 2 closing arc.
    """

    cdef public double beta, s_max, radius, cx, a0
    cdef public double wall_len, arc_len, perimeter
    cdef public double graze_tol, table_h
    cdef double[::1] table_cum
    cdef long table_n

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
        self.table_n = len(table_cum) - 1


cdef inline double _wall_speed(double beta, double s) nogil:
    cdef double m = pow(s, beta - 1.0)
    return sqrt(1.0 + m * m)


def wall_speed(double beta, double s):
    return _wall_speed(beta, s)


cdef double _gl16_c(double beta, double a, double b) nogil:
    cdef double half = 0.5 * (b - a)
    cdef double mid = 0.5 * (a + b)
    cdef double acc = 0.0
    cdef double dx
    cdef int j
    for j in range(8):
        dx = half * _GLX[j]
        acc += _GLW[j] * (_wall_speed(beta, mid - dx) + _wall_speed(beta, mid + dx))
    return acc * half


def _gl16(double beta, double a, double b):
    return _gl16_c(beta, a, b)


cdef double _wall_arclen_c(BilliardGeom g, double s) nogil:
    cdef long k, n
    cdef double s0
    if s <= 0.0:
        return 0.0
    k = <long>(s / g.table_h)
    n = g.table_n
    if k >= n:
        k = n - 1
    s0 = k * g.table_h
    return g.table_cum[k] + _gl16_c(g.beta, s0, s)


def wall_arclen(BilliardGeom g, double s):
    """Arc length along a cusp wall from the cusp tip to parameter s."""
    return _wall_arclen_c(g, s)


cdef double _wall_s_from_arclen_c(BilliardGeom g, double r) nogil:
    cdef long lo, hi, mid
    cdef double s, delta
    cdef int it
    if r <= 0.0:
        return 0.0
    if r >= g.wall_len:
        return g.s_max
    lo = 0
    hi = g.table_n
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if g.table_cum[mid] <= r:
            lo = mid
        else:
            hi = mid
    s = lo * g.table_h + (r - g.table_cum[lo]) / _wall_speed(g.beta, lo * g.table_h)
    if s < 0.0:
        s = 0.0
    elif s > g.s_max:
        s = g.s_max
    for it in range(8):
        delta = (_wall_arclen_c(g, s) - r) / _wall_speed(g.beta, s)
        s -= delta
        if s < 0.0:
            s = 0.0
        elif s > g.s_max:
            s = g.s_max
        if fabs(delta) <= 1e-14 * (1.0 + s):
            break
    return s


def wall_s_from_arclen(BilliardGeom g, double r):
    """Inverse of wall_arclen by table bracketing plus Newton."""
    return _wall_s_from_arclen_c(g, r)


cdef void _frame(BilliardGeom g, long curve, double par,
                 double* x, double* y, double* tx, double* ty,
                 double* nx, double* ny, double* kappa) nogil:
    cdef double sa, ca, beta, m, gn
    if curve == 2:
        sa = sin(par)
        ca = cos(par)
        x[0] = g.cx - g.radius * ca
        y[0] = -g.radius * sa
        tx[0] = -sa
        ty[0] = ca
        nx[0] = -ca
        ny[0] = -sa
        kappa[0] = 1.0 / g.radius
        return
    beta = g.beta
    m = pow(par, beta - 1.0)
    gn = sqrt(1.0 + m * m)
    kappa[0] = (beta - 1.0) * pow(par, beta - 2.0) / (gn * gn * gn) if par > 0.0 else 0.0
    if curve == 0:
        x[0] = par
        y[0] = pow(par, beta) / beta
        tx[0] = -1.0 / gn
        ty[0] = -m / gn
        nx[0] = m / gn
        ny[0] = -1.0 / gn
    else:
        x[0] = par
        y[0] = -pow(par, beta) / beta
        tx[0] = 1.0 / gn
        ty[0] = -m / gn
        nx[0] = m / gn
        ny[0] = 1.0 / gn


def boundary_local(BilliardGeom g, long curve, double par):
    """(x, y, tx, ty, nx, ny, kappa) at a boundary point."""
    cdef double x, y, tx, ty, nx, ny, kappa
    _frame(g, curve, par, &x, &y, &tx, &ty, &nx, &ny, &kappa)
    return x, y, tx, ty, nx, ny, kappa


cdef double _global_r_c(BilliardGeom g, long curve, double par) nogil:
    if curve == 1:
        return _wall_arclen_c(g, par)
    if curve == 2:
        return g.wall_len + (g.a0 - par) * g.radius
    return g.wall_len + g.arc_len + (g.wall_len - _wall_arclen_c(g, par))


def global_r(BilliardGeom g, long curve, double par):
    """Global arc-length coordinate; starts at the cusp tip on the lower wall."""
    return _global_r_c(g, curve, par)


def param_from_global_r(BilliardGeom g, double r):
    if r <= g.wall_len:
        return 1, _wall_s_from_arclen_c(g, r)
    if r <= g.wall_len + g.arc_len:
        return 2, g.a0 - (r - g.wall_len) / g.radius
    return 0, _wall_s_from_arclen_c(g, 2.0 * g.wall_len + g.arc_len - r)


cdef inline double _wall_g_c(double beta, double sgn, double px, double py,
                             double dx, double dy, double s) nogil:
    return (s - px) * dy - (sgn * pow(s, beta) / beta - py) * dx


cdef double _wall_root_c(double beta, double sgn, double px, double py,
                         double dx, double dy, double a, double b,
                         double fa, double fb) nogil:
    cdef double x, fx, dg, xn
    cdef int it
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    x = 0.5 * (a + b)
    for it in range(200):
        fx = _wall_g_c(beta, sgn, px, py, dx, dy, x)
        if fx == 0.0:
            return x
        if (fa < 0.0) == (fx < 0.0):
            a = x
            fa = fx
        else:
            b = x
            fb = fx
        if b - a <= 1e-15 * (fabs(a) + fabs(b)) + 1e-300:
            return 0.5 * (a + b)
        dg = dy - sgn * dx * pow(x, beta - 1.0)
        if dg != 0.0:
            xn = x - fx / dg
            if a < xn < b:
                x = xn
                continue
        x = 0.5 * (a + b)
    return 0.5 * (a + b)


cdef void _consider_wall_c(BilliardGeom g, long wall, double px, double py,
                           double dx, double dy,
                           double* best_t, long* best_curve, double* best_par) nogil:
    cdef double beta = g.beta
    cdef double sgn = 1.0 if wall == 0 else -1.0
    cdef double s_lo = 0.0
    cdef double s_hi = g.s_max
    cdef double f_lo = _wall_g_c(beta, sgn, px, py, dx, dy, s_lo)
    cdef double f_hi = _wall_g_c(beta, sgn, px, py, dx, dy, s_hi)
    cdef double sc = -1.0
    cdef double ratio, f_c
    cdef double[3] br_a
    cdef double[3] br_b
    cdef double[3] br_fa
    cdef double[3] br_fb
    cdef int nbr = 0
    cdef int i
    cdef double a, b, fa, fb, s, hx, hy, t
    if dx != 0.0:
        ratio = dy / (sgn * dx)
        if ratio > 0.0:
            sc = pow(ratio, 1.0 / (beta - 1.0))
    if 0.0 < sc < g.s_max:
        f_c = _wall_g_c(beta, sgn, px, py, dx, dy, sc)
        br_a[0] = s_lo; br_b[0] = sc; br_fa[0] = f_lo; br_fb[0] = f_c
        br_a[1] = sc; br_b[1] = s_hi; br_fa[1] = f_c; br_fb[1] = f_hi
        nbr = 2
    else:
        br_a[0] = s_lo; br_b[0] = s_hi; br_fa[0] = f_lo; br_fb[0] = f_hi
        nbr = 1
    for i in range(nbr):
        a = br_a[i]; b = br_b[i]; fa = br_fa[i]; fb = br_fb[i]
        if fa == 0.0 and fb == 0.0:
            continue
        if (fa < 0.0 and fb < 0.0) or (fa > 0.0 and fb > 0.0):
            continue
        s = _wall_root_c(beta, sgn, px, py, dx, dy, a, b, fa, fb)
        hx = s
        hy = sgn * pow(s, beta) / beta
        t = (hx - px) * dx + (hy - py) * dy
        if t <= 0.0:
            continue
        if fabs(hx - px) + fabs(hy - py) <= _POS_GUARD * (1.0 + fabs(px) + fabs(py)):
            continue
        if t < best_t[0]:
            best_t[0] = t
            best_curve[0] = wall
            best_par[0] = s


cdef void _consider_arc_c(BilliardGeom g, double px, double py,
                          double dx, double dy,
                          double* best_t, long* best_curve, double* best_par) nogil:
    cdef double wx = px - g.cx
    cdef double wy = py
    cdef double b = wx * dx + wy * dy
    cdef double q = wx * wx + wy * wy - g.radius * g.radius
    cdef double disc = b * b - q
    cdef double sq, t_far, t_near, t, hx, hy, a
    cdef int which
    if disc < 0.0:
        return
    sq = sqrt(disc)
    if b < 0.0:
        t_far = -b + sq
        t_near = q / t_far if t_far != 0.0 else 0.0
    else:
        t_far = -b - sq
        t_near = q / t_far if t_far != 0.0 else 0.0
    for which in range(2):
        t = t_near if which == 0 else t_far
        if t <= 0.0:
            continue
        hx = px + t * dx
        hy = py + t * dy
        a = atan2(-hy, -(hx - g.cx))
        if fabs(a) > g.a0:
            continue
        if fabs(hx - px) + fabs(hy - py) <= _POS_GUARD * (1.0 + fabs(px) + fabs(py)):
            continue
        if t < best_t[0]:
            best_t[0] = t
            best_curve[0] = 2
            best_par[0] = a


cdef int _step_c(BilliardGeom g, long* curve, double* par, double* theta) nogil:
    cdef double x, y, tx, ty, nx, ny, kappa
    cdef double ct, st, dx, dy
    cdef double best_t = INFINITY
    cdef long best_curve = -1
    cdef double best_par = 0.0
    cdef double tx2, ty2, nx2, ny2, x2, y2, kap2
    cdef double vn, vt, ntheta
    _frame(g, curve[0], par[0], &x, &y, &tx, &ty, &nx, &ny, &kappa)
    ct = cos(theta[0])
    st = sin(theta[0])
    dx = ct * tx + st * nx
    dy = ct * ty + st * ny
    if curve[0] != 0:
        _consider_wall_c(g, 0, x, y, dx, dy, &best_t, &best_curve, &best_par)
    if curve[0] != 1:
        _consider_wall_c(g, 1, x, y, dx, dy, &best_t, &best_curve, &best_par)
    if curve[0] != 2:
        _consider_arc_c(g, x, y, dx, dy, &best_t, &best_curve, &best_par)
    if best_curve < 0:
        return _LOST
    _frame(g, best_curve, best_par, &x2, &y2, &tx2, &ty2, &nx2, &ny2, &kap2)
    vn = dx * nx2 + dy * ny2
    vt = dx * tx2 + dy * ty2
    ntheta = atan2(-vn, vt)
    curve[0] = best_curve
    par[0] = best_par
    theta[0] = ntheta
    if ntheta < g.graze_tol or ntheta > M_PI - g.graze_tol:
        return _GRAZE
    return _OK


def step(BilliardGeom g, long curve, double par, double theta):
    """One collision: trace the outgoing ray to the next wall and reflect."""
    cdef long c = curve
    cdef double p = par
    cdef double t = theta
    cdef int status = _step_c(g, &c, &p, &t)
    if status == _LOST:
        return curve, par, theta, LOST
    return c, p, t, status


def trace_steps(BilliardGeom g, long curve, double par, double theta, long n,
                long[::1] curve_out, double[::1] r_out, double[::1] th_out,
                double[::1] x_out, double[::1] y_out):
    """Record n collisions (post-collision states).  Stops early on trouble."""
    cdef long done = 0
    cdef int status = _OK
    cdef long c = curve
    cdef double p = par
    cdef double t = theta
    cdef double x, y, tx, ty, nx, ny, kappa
    with nogil:
        while done < n:
            status = _step_c(g, &c, &p, &t)
            if status == _LOST:
                break
            _frame(g, c, p, &x, &y, &tx, &ty, &nx, &ny, &kappa)
            curve_out[done] = c
            r_out[done] = _global_r_c(g, c, p)
            th_out[done] = t
            x_out[done] = x
            y_out[done] = y
            done += 1
            if status == _GRAZE:
                break
    return c, p, t, done, status


def trace_until_return(BilliardGeom g, long curve, double par, double theta, long cap,
                       long[::1] curve_out, double[::1] r_out, double[::1] th_out,
                       double[::1] x_out, double[::1] y_out):
    """Collisions up to and including the next arrival on the closing arc."""
    cdef long phi = 0
    cdef int status = _OK
    cdef long c = curve
    cdef double p = par
    cdef double t = theta
    cdef double x, y, tx, ty, nx, ny, kappa
    with nogil:
        while True:
            if phi >= cap:
                status = _CAPPED
                break
            status = _step_c(g, &c, &p, &t)
            if status == _LOST:
                break
            _frame(g, c, p, &x, &y, &tx, &ty, &nx, &ny, &kappa)
            curve_out[phi] = c
            r_out[phi] = _global_r_c(g, c, p)
            th_out[phi] = t
            x_out[phi] = x
            y_out[phi] = y
            phi += 1
            if status == _GRAZE:
                break
            if c == 2:
                break
    return c, p, t, phi, status


def trace_returns(BilliardGeom g, long curve, double par, double theta,
                  long nret, long cap, long[::1] phi_out):
    """First-return times over successive excursions from the closing arc."""
    cdef long done = 0
    cdef long phi
    cdef int status = _OK
    cdef long c = curve
    cdef double p = par
    cdef double t = theta
    with nogil:
        while done < nret:
            phi = 0
            while True:
                if phi >= cap:
                    status = _CAPPED
                    break
                status = _step_c(g, &c, &p, &t)
                if status != _OK:
                    break
                phi += 1
                if c == 2:
                    break
            if status != _OK:
                break
            phi_out[done] = phi
            done += 1
    return c, p, t, done, status


DIAG_EMPTY = (0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0)


def excursion_diag(double[::1] v, unsigned char[::1] in_x, state,
                   double[::1] m1_out, double[::1] m2_out, long[::1] phi_out):
    """One-pass per-excursion diagnostics over an orbit chunk.

    Same contract as the pure-Python twin: state is (active, phi, s, comp,
    cmax, cmin, maxdrop, maxrise) threaded across chunks; returns
    (ndone, new_state).
    """
    cdef double active, phi, s, comp, cmax, cmin, maxdrop, maxrise
    active, phi, s, comp, cmax, cmin, maxdrop, maxrise = state
    cdef long ndone = 0
    cdef long k, n = v.shape[0]
    cdef double y, t, big, small
    with nogil:
        for k in range(n):
            if in_x[k]:
                if active != 0.0 and phi > 0.0:
                    m1_out[ndone] = maxdrop if maxdrop < maxrise else maxrise
                    big = cmax if cmax > 0.0 else 0.0
                    small = cmin if cmin < 0.0 else 0.0
                    m2_out[ndone] = big - small - fabs(s)
                    phi_out[ndone] = <long>phi
                    ndone += 1
                active = 1.0
                phi = 0.0
                s = 0.0
                comp = 0.0
                cmax = -INFINITY
                cmin = INFINITY
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


cdef inline double _imap_step_c(long variant, double alpha, double b, double x) nogil:
    cdef double q = 1.0 / alpha
    cdef double y
    if variant == 0:
        if x < 0.5:
            y = x + pow(2.0, q) * pow(x, 1.0 + q)
            if y >= 1.0:
                y = 0.9999999999999999
            return y
        return 2.0 * x - 1.0
    y = x + b * pow(x, 1.0 + q)
    return y - floor(y)


def imap_step(long variant, double alpha, double b, double x):
    """One step of the intermittent interval map (0 Markov, 1 non-Markov)."""
    return _imap_step_c(variant, alpha, b, x)


def imap_trace(long variant, double alpha, double b, double x, long n, double[::1] xs_out):
    """Record x_0..x_(n-1) and return x_n."""
    cdef long j
    with nogil:
        for j in range(n):
            xs_out[j] = x
            x = _imap_step_c(variant, alpha, b, x)
    return x


def imap_returns(long variant, double alpha, double b, double x,
                 long nret, long cap, long[::1] phi_out):
    """First-return times to [1/2, 1) for a start already inside it."""
    cdef long done = 0
    cdef long phi
    cdef int status = _OK
    with nogil:
        while done < nret:
            phi = 0
            while True:
                if phi >= cap:
                    status = _CAPPED
                    break
                x = _imap_step_c(variant, alpha, b, x)
                phi += 1
                if x >= 0.5:
                    break
            if status != _OK:
                break
            phi_out[done] = phi
            done += 1
    return x, done, status
