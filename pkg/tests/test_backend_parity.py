"""The compiled kernels must reproduce the pure-Python reference bit for bit."""

import numpy as np
import pytest

from cusplevy import billiard as B
from cusplevy.backend import HAVE_COMPILED, get_kernels

pytestmark = pytest.mark.skipif(not HAVE_COMPILED, reason="compiled backend not built")


@pytest.fixture(scope="module")
def both(geom):
    kc = get_kernels("compiled")
    kp = get_kernels("python")
    gc = geom.kernel_geom()
    gp = kp.BilliardGeom(geom.beta, geom.s_max, geom.arc_radius, geom.arc_center_x,
                         geom.arc_half_angle, geom.wall_len, geom.arc_len,
                         geom.graze_tol, geom.table_h, geom.table_cum)
    return kc, kp, gc, gp


def test_arclength_conversions(both, geom):
    kc, kp, gc, gp = both
    for s in np.linspace(0.0, geom.s_max, 97):
        assert kc.wall_arclen(gc, float(s)) == kp.wall_arclen(gp, float(s))
    for r in np.linspace(0.0, geom.perimeter, 97):
        assert kc.param_from_global_r(gc, float(r)) == kp.param_from_global_r(gp, float(r))


def test_boundary_frames(both, geom):
    kc, kp, gc, gp = both
    for curve, par in ((0, 0.3), (1, 0.8), (2, -0.2), (2, 0.31)):
        assert kc.boundary_local(gc, curve, par) == kp.boundary_local(gp, curve, par)


def test_collision_orbit_bit_identical(both):
    kc, kp, gc, gp = both
    c, p, t = 2, 0.07, 1.321
    cp, pp, tp = c, p, t
    for i in range(3000):
        a = kc.step(gc, c, p, t)
        b = kp.step(gp, cp, pp, tp)
        assert a == b, f"diverged at step {i}"
        c, p, t, status = a
        cp, pp, tp, _ = b
        if status != 0:
            break


def test_trace_buffers_match(both):
    kc, kp, gc, gp = both
    n = 500
    bufs_c = (np.empty(n, dtype=np.int64), np.empty(n), np.empty(n), np.empty(n), np.empty(n))
    bufs_p = (np.empty(n, dtype=np.int64), np.empty(n), np.empty(n), np.empty(n), np.empty(n))
    out_c = kc.trace_steps(gc, 2, -0.11, 2.02, n, *bufs_c)
    out_p = kp.trace_steps(gp, 2, -0.11, 2.02, n, *bufs_p)
    assert out_c == out_p
    for a, b in zip(bufs_c, bufs_p):
        assert np.array_equal(a, b)


def test_returns_match(both):
    kc, kp, gc, gp = both
    out_c = np.empty(200, dtype=np.int64)
    out_p = np.empty(200, dtype=np.int64)
    rc = kc.trace_returns(gc, 2, 0.02, 1.9, 200, 10**7, out_c)
    rp = kp.trace_returns(gp, 2, 0.02, 1.9, 200, 10**7, out_p)
    assert rc == rp
    assert np.array_equal(out_c, out_p)


def test_intermittent_orbits_bit_identical(both):
    kc, kp, _, _ = both
    for variant, b in ((0, 0.0), (1, 1.3)):
        xs_c = np.empty(20_000)
        xs_p = np.empty(20_000)
        end_c = kc.imap_trace(variant, 1.5, b, 0.7123, 20_000, xs_c)
        end_p = kp.imap_trace(variant, 1.5, b, 0.7123, 20_000, xs_p)
        assert end_c == end_p
        assert np.array_equal(xs_c, xs_p)


def test_excursion_diag_matches(both, rng):
    kc, kp, _, _ = both
    v = rng.standard_normal(2000)
    in_x = (rng.random(2000) < 0.3).astype(np.uint8)
    in_x[0] = 1
    outs_c = (np.empty(2000), np.empty(2000), np.empty(2000, dtype=np.int64))
    outs_p = (np.empty(2000), np.empty(2000), np.empty(2000, dtype=np.int64))
    nd_c, st_c = kc.excursion_diag(v, in_x, kc.DIAG_EMPTY, *outs_c)
    nd_p, st_p = kp.excursion_diag(v, in_x, kp.DIAG_EMPTY, *outs_p)
    assert nd_c == nd_p
    assert st_c == st_p
    for a, b in zip(outs_c, outs_p):
        assert np.array_equal(a[:nd_c], b[:nd_c])
