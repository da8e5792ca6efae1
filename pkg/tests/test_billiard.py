import math

import numpy as np
import pytest
import sympy as sp

from cusplevy import billiard as B
from cusplevy.backend import kernels as K
from cusplevy.stable import hill_estimator, ks_statistic


class TestBuild:
    def test_valid_table(self, geom):
        assert geom.alpha == 1.5
        assert geom.perimeter == 2 * geom.wall_len + geom.arc_len
        # closing arc passes through the wall endpoints
        w_max = 1.0 / 3.0
        assert abs(math.hypot(1.0 - geom.arc_center_x, w_max) - geom.arc_radius) < 1e-14

    def test_perimeter_refined_quadrature(self, geom):
        fine = B.build_cusp_table(3.0, 1.0, 1.0, table_size=8192)
        assert abs(geom.perimeter - fine.perimeter) < 1e-8

    def test_flat_exponent_two_rejected(self):
        with pytest.raises(B.GeometryError):
            B.build_cusp_table(2.0, 1.0, 1.0)

    def test_small_radius_rejected(self):
        with pytest.raises(B.GeometryError):
            B.build_cusp_table(3.0, 1.0, 0.2)

    def test_config_block_round_trip(self, geom):
        from cusplevy.reportio import parse_config_text

        block = parse_config_text(geom.config_block())
        assert float(block["beta"]) == geom.beta
        assert float(block["arc_radius"]) == geom.arc_radius


class TestBoundaryPoint:
    def test_cusp_endpoints(self, geom):
        (x, y), (tx, ty), _ = B.boundary_point(geom, 2, 0.0)
        assert (x, y) == (0.0, 0.0)
        assert (tx, ty) == (1.0, 0.0)
        (x, y), (tx, ty), _ = B.boundary_point(geom, 1, geom.perimeter)
        assert (x, y) == (0.0, 0.0)
        assert (tx, ty) == (-1.0, 0.0)

    def test_arc_curvature_constant(self, geom):
        lo, hi = geom.curve_r_range(3)
        for r in np.linspace(lo, hi, 7):
            _, _, kappa = B.boundary_point(geom, 3, float(r))
            assert abs(kappa - 1.0 / geom.arc_radius) < 1e-14

    def test_wall_curvature_symbolic_oracle(self, geom):
        s = sp.symbols("s", positive=True)
        beta = 3
        x, y = s, s**beta / beta
        xp, yp = sp.diff(x, s), sp.diff(y, s)
        xpp, ypp = sp.diff(xp, s), sp.diff(yp, s)
        kappa_expr = sp.simplify(sp.Abs(xp * ypp - yp * xpp) / (xp**2 + yp**2) ** sp.Rational(3, 2))
        kg = geom.kernel_geom()
        for sval in (0.05, 0.3, 0.8):
            want = float(kappa_expr.subs(s, sval))
            got = K.boundary_local(kg, 0, sval)[6]
            assert abs(got - want) < 1e-12
        # curvature vanishes at the cusp tip
        assert K.boundary_local(kg, 0, 0.0)[6] == 0.0

    def test_tangent_c1_consistency(self, geom):
        kg = geom.kernel_geom()
        h = 1e-7
        for curve, par in ((0, 0.4), (1, 0.7), (2, 0.1)):
            x0, y0, tx, ty, *_ = K.boundary_local(kg, curve, par)
            if curve == 2:
                xp, yp, *_ = K.boundary_local(kg, curve, par - h)  # arc param runs backward
            else:
                sign = -1.0 if curve == 0 else 1.0
                xp, yp, *_ = K.boundary_local(kg, curve, par + sign * h)
            fd = np.array([xp - x0, yp - y0])
            fd /= np.linalg.norm(fd)
            assert abs(fd[0] - tx) < 1e-6 and abs(fd[1] - ty) < 1e-6

    def test_out_of_range(self, geom):
        with pytest.raises(ValueError):
            B.boundary_point(geom, 2, geom.perimeter)


class TestCollisionMap:
    def test_grazing_input_rejected(self, geom):
        p = B.sample_cross_section(geom, 0, 1)[0]
        with pytest.raises(ValueError):
            B.collision_map(geom, B.PhasePoint(p.curve, p.r, 0.0))

    def test_positions_on_boundary_and_ray(self, geom):
        # specular reflection and residuals over many random collisions
        kg = geom.kernel_geom()
        curve, par, theta, _ = B.sample_invariant_arrays(geom, 5, 10_000)
        worst_resid = 0.0
        worst_spec = 0.0
        for i in range(curve.size):
            c0, p0, t0 = int(curve[i]), float(par[i]), float(theta[i])
            x0, y0, tx0, ty0, nx0, ny0, _ = K.boundary_local(kg, c0, p0)
            d = (math.cos(t0) * tx0 + math.sin(t0) * nx0,
                 math.cos(t0) * ty0 + math.sin(t0) * ny0)
            c1, p1, t1, status = K.step(kg, c0, p0, t0)
            if status != 0:
                continue
            x1, y1, tx1, ty1, nx1, ny1, _ = K.boundary_local(kg, c1, p1)
            # hit point lies on the outgoing ray
            resid = abs((x1 - x0) * d[1] - (y1 - y0) * d[0])
            worst_resid = max(worst_resid, resid)
            # specular law: tangential component preserved, normal flipped
            d_ref = (math.cos(t1) * tx1 + math.sin(t1) * nx1,
                     math.cos(t1) * ty1 + math.sin(t1) * ny1)
            worst_spec = max(
                worst_spec,
                abs((d[0] * tx1 + d[1] * ty1) - (d_ref[0] * tx1 + d_ref[1] * ty1)),
                abs((d[0] * nx1 + d[1] * ny1) + (d_ref[0] * nx1 + d_ref[1] * ny1)),
            )
        assert worst_resid < 1e-10
        assert worst_spec < 1e-10

    def test_time_reversal_conjugacy(self, geom):
        kg = geom.kernel_geom()
        curve, par, theta, _ = B.sample_invariant_arrays(geom, 6, 500)
        worst = 0.0
        for i in range(curve.size):
            c0, p0, t0 = int(curve[i]), float(par[i]), float(theta[i])
            c1, p1, t1, s1 = K.step(kg, c0, p0, t0)
            c2, p2, t2, s2 = K.step(kg, c1, p1, math.pi - t1)
            if s1 != 0 or s2 != 0:
                continue
            err = (abs(K.global_r(kg, c2, p2) - K.global_r(kg, c0, p0))
                   + abs((math.pi - t2) - t0))
            worst = max(worst, err)
        assert worst < 1e-8

    def test_mirror_equivariance(self, geom):
        # the table is symmetric under z -> -z: conjugating a collision by the
        # mirror map (swap walls, negate arc angle, theta -> pi - theta)
        # commutes with the dynamics
        kg = geom.kernel_geom()

        def mirror(c, p, t):
            if c == 2:
                return c, -p, math.pi - t
            return 1 - c, p, math.pi - t

        curve, par, theta, _ = B.sample_invariant_arrays(geom, 7, 300)
        for i in range(curve.size):
            c0, p0, t0 = int(curve[i]), float(par[i]), float(theta[i])
            a = K.step(kg, *mirror(c0, p0, t0))
            b = K.step(kg, c0, p0, t0)
            if a[3] != 0 or b[3] != 0:
                continue
            bm = mirror(b[0], b[1], b[2])
            assert a[0] == bm[0]
            assert abs(a[1] - bm[1]) < 1e-10
            assert abs(a[2] - bm[2]) < 1e-10

    def test_record_fields(self, geom):
        p = B.sample_cross_section(geom, 1, 1)[0]
        rec = B.collision_map(geom, p)
        assert 0.0 < rec.point.theta < math.pi
        assert rec.flight_time > 0.0
        assert rec.cusp_distance == math.hypot(*rec.position)


class TestInvariantMeasure:
    def test_sampler_marginals(self, geom):
        pts = B.sample_invariant(geom, 9, 100_000)
        theta = np.array([p.theta for p in pts])
        r = np.array([p.r for p in pts])
        assert abs(np.mean(np.cos(theta))) < 3.0 / math.sqrt(theta.size)
        assert ks_statistic(theta, lambda t: (1 - np.cos(t)) / 2) < 0.01
        assert ks_statistic(r, lambda x: np.clip(x / geom.perimeter, 0, 1)) < 0.01

    def test_one_step_invariance(self, geom):
        rep = B.measure_invariance_check(geom, 11, 100_000)
        assert rep["ks_r_marginal"] < 0.02
        assert rep["ks_theta_marginal"] < 0.02

    def test_small_n_report(self, geom):
        rep = B.measure_invariance_check(geom, 11, 100)
        assert set(rep) >= {"ks_r_marginal", "ks_theta_marginal", "flagged", "note"}


class TestFirstReturn:
    def test_decomposition(self, geom):
        for i, p in enumerate(B.sample_cross_section(geom, 13, 25)):
            fr = B.first_return(geom, p)
            assert fr.phi >= 2  # the single dispersing arc cannot see itself
            assert fr.steps[-1].in_cross_section
            assert all(not rec.in_cross_section for rec in fr.steps[:-1])
            assert all(rec.point.curve in (1, 2) for rec in fr.steps[:-1])

    def test_requires_cross_section_start(self, geom):
        with pytest.raises(ValueError):
            B.first_return(geom, B.PhasePoint(1, geom.perimeter - 0.3, 1.0))

    def test_deep_excursions_from_aimed_starts(self, geom):
        phis = []
        for tilt in (1e-2, 1e-3, 1e-4):
            fr = B.first_return(geom, B.cusp_aimed_start(geom, tilt))
            assert fr.status == 0
            phis.append(fr.phi)
        assert phis[0] < phis[1] < phis[2]
        assert phis[2] > 1000

    def test_theta_sweeps_through_deep_excursion(self, geom):
        # along one wall the collision angle sweeps monotonically across
        # (0, pi); the other wall sees the mirrored angles pi - theta
        fr = B.first_return(geom, B.cusp_aimed_start(geom, 1e-4))
        upper = np.array([rec.point.theta for rec in fr.steps[:-1] if rec.point.curve == 1])
        k = upper.size
        assert k > 1000
        bins = [np.median(chunk) for chunk in np.array_split(upper, 8)]
        assert all(b2 > b1 for b1, b2 in zip(bins, bins[1:]))
        assert bins[0] < 0.5 and bins[-1] > 2.6

    def test_return_tail_smoke(self, geom):
        phis, censored = B.collect_returns(geom, 17, 100_000)
        assert censored <= 3
        k = int(phis.size ** (2.0 / 3.0))
        idx = hill_estimator(phis.astype(float), k)
        assert 1.3 <= idx <= 1.7


class TestOrbitArrays:
    def test_trace_matches_single_steps(self, geom):
        kg = geom.kernel_geom()
        state = (2, 0.05, 1.1)
        cols, in_x, out_state, done, status = B.trace_orbit_arrays(geom, state, 50)
        assert done == 50 and status == 0
        c, p, t = state
        for i in range(50):
            c, p, t, s = K.step(kg, c, p, t)
            assert cols["curve"][i] == float(c) + 1.0
            assert cols["theta"][i] == t
        assert (c, p, t) == out_state
