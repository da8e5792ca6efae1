import math
from fractions import Fraction
from itertools import product

import mpmath as mp
import numpy as np
import pytest

from cusplevy import billiard as B
from cusplevy import exprlang as X
from cusplevy import observables as O
from cusplevy.experiments import OBSERVABLE_PRESETS
from cusplevy.systems import BilliardSystem, IntermittentSystem


class TestParser:
    def test_simple(self):
        obs = O.parse_observable("cos(theta)")
        assert obs.evaluate({"theta": np.array([0.0])})[0] == 1.0

    def test_syntax_error_offset(self):
        with pytest.raises(X.ParseError) as err:
            O.parse_observable("1 +")
        assert err.value.offset == 3

    def test_unknown_identifier(self):
        with pytest.raises(X.ParseError):
            O.parse_observable("foo + 1")

    def test_arity_checked(self):
        with pytest.raises(X.ParseError):
            O.parse_observable("min2(theta)")
        with pytest.raises(X.ParseError):
            O.parse_observable("sin(theta, r)")

    def test_independent_evaluator_oracle(self, rng):
        obs = O.parse_observable("sin(theta)^2 + 0.5*r")
        theta = rng.random(100) * math.pi
        r = rng.random(100) * 2
        got = obs.evaluate({"theta": theta, "r": r})
        assert np.allclose(got, np.sin(theta) ** 2 + 0.5 * r, atol=1e-15)

    def test_pretty_round_trip(self):
        for src in ["cos(theta)", "sin(theta)^2 + 0.5*r", "-x/2 + max2(r, y)",
                    *OBSERVABLE_PRESETS.values()]:
            tree = X.parse_expression(src)
            assert X.parse_expression(X.pretty(tree)) == tree

    def test_nonfinite_evaluation_raises(self):
        obs = O.parse_observable("1/x")
        with pytest.raises(X.EvalError):
            obs.evaluate({"x": np.array([0.0])})


class TestCentering:
    def test_constant(self, geom):
        c = O.center_observable(O.parse_observable("5"), geom, 1, 2000)
        assert abs(c.mean_adjustment - 5.0) < 1e-12
        assert abs(c.evaluate({"theta": np.array([1.0])})[0]) < 1e-12

    def test_cos_theta_symmetric(self, geom):
        c = O.center_observable(O.parse_observable("cos(theta)"), geom, 2, 50_000)
        assert abs(c.mean_adjustment) < 4 * c.mean_stderr + 1e-3

    def test_theta_mean(self, geom):
        c = O.center_observable(O.parse_observable("theta"), geom, 3, 50_000)
        assert abs(c.mean_adjustment - math.pi / 2) < 3 * c.mean_stderr

    def test_requires_enough_samples(self, geom):
        with pytest.raises(ValueError):
            O.center_observable(O.parse_observable("theta"), geom, 1, 10)

    def test_quadrature_matches_exact_values(self, geom):
        assert abs(O.mu_mean_quadrature(O.parse_observable("theta"), geom) - math.pi / 2) < 1e-10
        assert abs(O.mu_mean_quadrature(O.parse_observable("cos(theta)"), geom)) < 1e-12
        assert abs(O.mu_mean_quadrature(O.parse_observable("7"), geom) - 7.0) < 1e-12


class TestIvProfile:
    def test_zero_observable(self, geom):
        prof = O.iv_profile(O.parse_observable("0"), geom, 1.5, 256)
        assert np.all(prof.iv == 0.0)
        assert O.classify_convergence(prof) == "degenerate"

    def test_unit_observable_endpoint(self, geom):
        prof = O.iv_profile(O.parse_observable("1"), geom, 1.5, 512)
        want = float(mp.quad(lambda t: mp.sin(t) ** (mp.mpf(2) / 3), [0, mp.pi]))
        assert abs(prof.i1_pi - want) < 1e-7
        assert abs(prof.iv_pi - want) < 1e-7
        assert prof.err_bound <= 1e-8

    def test_odd_cancellation(self, geom):
        # v = u(theta) on the upper wall and -u(pi - theta) on the lower wall
        pi = repr(math.pi)
        text = f"(2-curve)*sin(theta) - (curve-1)*sin({pi} - theta)"
        prof = O.iv_profile(O.parse_observable(text), geom, 1.5, 256)
        assert np.max(np.abs(prof.iv)) < 1e-10

    def test_linearity(self, geom):
        v = O.parse_observable("sin(theta)")
        w = O.parse_observable("theta*theta")
        combo = O.parse_observable("2*sin(theta) - 0.5*theta*theta")
        pv = O.iv_profile(v, geom, 1.5, 256)
        pw = O.iv_profile(w, geom, 1.5, 256)
        pc = O.iv_profile(combo, geom, 1.5, 256)
        assert np.max(np.abs(pc.iv - (2 * pv.iv - 0.5 * pw.iv))) < 2e-8

    def test_psi_endpoints_exact(self, geom):
        prof = O.iv_profile(O.parse_observable("1"), geom, 1.5, 256)
        assert prof.psi[0] == 0.0
        assert prof.psi[-1] == 1.0
        assert np.all(np.diff(prof.psi) > 0.0)

    def test_csv_round_trip_columns(self, geom):
        prof = O.iv_profile(O.parse_observable("1"), geom, 1.5, 64)
        lines = prof.to_csv().splitlines()
        assert lines[0] == "s,I_v,I_1,Psi"
        assert len(lines) == 66


@pytest.fixture(scope="module")
def prof(geom):
    return O.iv_profile(O.parse_observable("1"), geom, 1.5, 512)


@pytest.fixture(scope="module")
def profiles(geom):
    out = {}
    for name, text in OBSERVABLE_PRESETS.items():
        obs = O.center_observable_quadrature(O.parse_observable(text), geom)
        out[name] = O.iv_profile(obs, geom, 1.5, 512)
    return out


class TestPsiInverse:
    def test_endpoints(self, prof):
        assert O.psi_inverse(prof, 0.0) == 0.0
        assert O.psi_inverse(prof, 1.0) == math.pi

    def test_round_trip(self, prof):
        for u in np.linspace(0.005, 0.995, 100):
            s = O.psi_inverse(prof, float(u))
            assert abs(prof.psi_at(s) - u) < 1e-8

    def test_median_against_quadrature_oracle(self, prof):
        total = mp.quad(lambda t: mp.sin(t) ** (mp.mpf(2) / 3), [0, mp.pi])
        med = mp.findroot(
            lambda s: mp.quad(lambda t: mp.sin(t) ** (mp.mpf(2) / 3), [0, s]) - total / 2, mp.pi / 2
        )
        assert abs(O.psi_inverse(prof, 0.5) - float(med)) < 1e-8

    def test_out_of_range(self, prof):
        with pytest.raises(ValueError):
            O.psi_inverse(prof, 1.5)


class TestClassification:
    def test_trichotomy(self, profiles):
        assert O.classify_convergence(profiles["monotone_trace"]) == "M1"
        assert O.classify_convergence(profiles["corridor_trace"]) == "M2_only"
        assert O.classify_convergence(profiles["offside_trace"]) == "neither"

    def test_sign_and_scale_invariance(self, geom, profiles):
        for name, text in OBSERVABLE_PRESETS.items():
            base = O.classify_convergence(profiles[name])
            for variant in (f"-({text})", f"3.7*({text})"):
                obs = O.center_observable_quadrature(O.parse_observable(variant), geom)
                prof = O.iv_profile(obs, geom, 1.5, 512)
                assert O.classify_convergence(prof) == base


class TestExcursionOps:
    def test_induced_v_constant(self, geom):
        p = B.sample_cross_section(geom, 1, 1)[0]
        fr = B.first_return(geom, p)
        v = O.parse_observable("2.5")
        assert O.induced_V(v, fr) == 2.5 * fr.phi

    def test_prediction_endpoints(self, geom):
        obs = O.center_observable_quadrature(
            O.parse_observable(OBSERVABLE_PRESETS["monotone_trace"]), geom)
        prof = O.iv_profile(obs, geom, 1.5, 256)
        assert O.excursion_shape_prediction(prof, 1000, 0) == 0.0
        assert O.excursion_shape_prediction(prof, 1000, 1000) == 1000 * prof.slope_ratio
        with pytest.raises(ValueError):
            O.excursion_shape_prediction(prof, 10, 11)

    def test_deep_excursion_tracks_prediction(self, geom):
        obs = O.center_observable_quadrature(
            O.parse_observable(OBSERVABLE_PRESETS["monotone_trace"]), geom)
        prof = O.iv_profile(obs, geom, 1.5, 512)
        phi, cols, status = B.excursion_arrays(geom, B.cusp_aimed_start(geom, 1e-4))
        assert status == 0 and phi > 3000
        sums = O.excursion_partial_sums_from_cols(obs, cols, phi)
        ells = np.linspace(0, phi, 64).astype(int)
        pred = np.array([O.excursion_shape_prediction(prof, phi, int(l)) for l in ells])
        meas = np.concatenate([[0.0], sums])[ells]
        assert np.max(np.abs(meas - pred)) < 0.05 * phi ** 0.75


class TestDiagnostics:
    def test_m1_examples(self):
        assert O.diag_M1([1.0, 2.0, 3.0]) == 0.0
        assert O.diag_M1([0.0, 1.0, -1.0, 2.0]) == 2.0
        assert O.diag_M1([5.0]) == 0.0
        with pytest.raises(ValueError):
            O.diag_M1([])

    def test_m1_brute_force_oracle(self, rng):
        for _ in range(300):
            v = rng.standard_normal(int(rng.integers(1, 12)))
            drops = max(v[i] - v[j] for i in range(v.size) for j in range(i, v.size))
            rises = max(v[j] - v[i] for i in range(v.size) for j in range(i, v.size))
            assert O.diag_M1(v) == min(drops, rises)

    def test_m2_examples(self):
        assert O.diag_M2([2.0, -1.0, 1.0], 1.0) == 2.0
        assert O.diag_M2_definitional([2.0, -1.0, 1.0], 1.0) == 2.0
        # sums inside [0, V] give exactly zero
        assert O.diag_M2([0.5, 0.2, 1.0], 1.0) == 0.0

    def test_m2_formulas_agree_exactly_in_rationals(self, rng):
        for _ in range(500):
            v = [Fraction(int(x), 16) for x in rng.integers(-40, 40, int(rng.integers(1, 10)))]
            big = max(max(v), Fraction(0))
            small = min(min(v), Fraction(0))
            concise = big - small - abs(v[-1])
            ext = [Fraction(0)] + v
            a = max(-u for u in ext) + max(u - v[-1] for u in ext)
            b = max(ext) + max(v[-1] - u for u in ext)
            assert concise == min(a, b)

    def test_m2_zero_iff_corridor(self, rng):
        for _ in range(300):
            v = rng.standard_normal(int(rng.integers(1, 10)))
            m2 = O.diag_M2(v, float(v[-1]))
            lo, hi = min(0.0, float(v[-1])), max(0.0, float(v[-1]))
            inside = np.all((v >= lo) & (v <= hi))
            assert (m2 == 0.0) == bool(inside)
            assert m2 >= 0.0

    def test_m1_zero_iff_monotone_exhaustive(self):
        for k in range(1, 7):
            for signs in product((-1.0, 0.0, 1.0), repeat=k):
                sums = np.cumsum(signs)
                m1 = O.diag_M1(sums)
                mono = np.all(np.diff(sums) >= 0) or np.all(np.diff(sums) <= 0)
                assert (m1 == 0.0) == bool(mono)


class TestKernelDiagPipeline:
    def test_matches_direct_diagnostics(self, rng):
        from cusplevy.backend import kernels as K

        vals = rng.standard_normal(400)
        in_x = rng.random(400) < 0.25
        in_x[0] = True
        m1 = np.empty(400)
        m2 = np.empty(400)
        phi = np.empty(400, dtype=np.int64)
        nd, _ = K.excursion_diag(np.ascontiguousarray(vals),
                                 np.ascontiguousarray(in_x).view(np.uint8),
                                 K.DIAG_EMPTY, m1, m2, phi)
        bounds = np.flatnonzero(in_x)
        for j in range(nd):
            seg = vals[bounds[j]:bounds[j + 1]]
            sums = np.cumsum(seg)
            assert phi[j] == seg.size
            assert abs(m1[j] - O.diag_M1(sums)) < 1e-12
            assert abs(m2[j] - O.diag_M2(sums, float(sums[-1]))) < 1e-12


class TestMaxDiag:
    def test_which_validated(self, geom):
        obs = O.parse_observable("1")
        with pytest.raises(ValueError):
            O.max_diag_statistic(geom, obs, "M3", 10, seed=0)

    def test_billiard_statistics(self, geom):
        obs = O.center_observable_quadrature(
            O.parse_observable(OBSERVABLE_PRESETS["monotone_trace"]), geom)
        sys_b = BilliardSystem(geom)
        phi_stat = O.max_diag_statistic(sys_b, obs, "phi", 3000, seed=4)
        m1_stat = O.max_diag_statistic(sys_b, obs, "M1", 3000, seed=4)
        assert phi_stat > 0.2
        assert 0.0 <= m1_stat < phi_stat

    def test_lsv_monotone_excursions(self):
        from cusplevy.intermittent import IntermittentMap

        sys_i = IntermittentSystem(IntermittentMap(1.5))
        # v strictly negative left of the cross-section: excursion sums are monotone
        obs = O.Observable("x-0.5", O.parse_observable("x-0.5").tree)
        assert O.max_diag_statistic(sys_i, obs, "M1", 3000, seed=9) == 0.0
