import cmath
import math

import mpmath as mp
import numpy as np
import pytest
from scipy.stats import levy_stable

from cusplevy import stable as S


@pytest.fixture(scope="module")
def p15():
    return S.StableParams(1.5, 1.0)


class TestParams:
    def test_validation(self):
        with pytest.raises(ValueError):
            S.StableParams(1.0, 1.0)
        with pytest.raises(ValueError):
            S.StableParams(2.0, 1.0)
        with pytest.raises(ValueError):
            S.StableParams(1.5, 0.0)
        with pytest.raises(ValueError):
            S.StableParams(1.5, 1.0, skew=-1.0)


class TestCharacteristicFunction:
    def test_at_zero_is_one_exactly(self, p15):
        assert S.cf_stable(p15, 0.0) == 1.0 + 0.0j

    def test_symbolic_value_at_one(self, p15):
        # tan(3*pi/4) = -1, so the exponent is -(1 + i)
        expected = cmath.exp(-(1.0 + 1.0j))
        assert abs(S.cf_stable(p15, 1.0) - expected) < 1e-12

    def test_conjugate_symmetry(self, p15):
        for u in (0.3, 2.7):
            assert abs(S.cf_stable(p15, -u) - S.cf_stable(p15, u).conjugate()) < 1e-15

    def test_modulus_bounded(self, p15):
        us = np.linspace(-8, 8, 333)
        assert np.all(np.abs(S.cf_stable(p15, us)) <= 1.0 + 1e-15)


class TestGeometricScale:
    def test_against_independent_gamma_oracle(self):
        # beta=3, |dQ|=1, I_v(pi)=1, alpha=3/2
        got = S.sigma_alpha_from_geometry(3.0, 1.0, 1.0)
        alpha = mp.mpf(3) / 2
        want = float(mp.gamma(1 - alpha) * mp.cos(mp.pi * alpha / 2) / (3 * 2 ** (alpha - 1)))
        assert abs(got - want) / want < 1e-6
        assert abs(got - float(mp.sqrt(2 * mp.pi) / (3 * mp.sqrt(2)))) < 1e-12

    def test_homogeneity_in_iv(self):
        base = S.sigma_alpha_from_geometry(3.0, 1.0, 1.0)
        doubled = S.sigma_alpha_from_geometry(3.0, 1.0, 2.0)
        assert abs(doubled - base * 2.0**1.5) < 1e-12 * doubled

    def test_perimeter_scaling(self):
        base = S.sigma_alpha_from_geometry(3.0, 1.0, 1.0)
        half = S.sigma_alpha_from_geometry(3.0, 2.0, 1.0)
        assert abs(half - base / 2.0) < 1e-15

    def test_positive_across_range(self):
        for beta in (2.1, 2.5, 3.0, 5.0, 9.0):
            assert S.sigma_alpha_from_geometry(beta, 0.7, 1.3) > 0.0

    def test_rejects_bad_inputs(self):
        with pytest.raises(ValueError):
            S.sigma_alpha_from_geometry(2.0, 1.0, 1.0)
        with pytest.raises(ValueError):
            S.sigma_alpha_from_geometry(3.0, -1.0, 1.0)


class TestSampler:
    def test_deterministic(self, p15):
        a = S.sample_stable(p15, 42, 1000)
        b = S.sample_stable(p15, 42, 1000)
        assert np.array_equal(a, b)
        c = S.sample_stable(p15, 43, 1000)
        assert not np.array_equal(a, c)

    def test_empirical_cf_matches(self, p15):
        draws = S.sample_stable(p15, 7, 100_000)
        for u in (0.5, 1.0, 2.0):
            assert abs(S.empirical_cf(draws, u) - S.cf_stable(p15, u)) < 0.02

    def test_right_skew(self, p15):
        draws = S.sample_stable(p15, 3, 100_000)
        assert np.median(draws) < np.mean(draws)

    def test_against_scipy_cdf(self, p15):
        draws = S.sample_stable(p15, 11, 50_000)
        ks = S.ks_statistic(draws, lambda x: levy_stable.cdf(x, 1.5, 1.0))
        assert ks < 0.012


class TestCdf:
    def test_tail_limits(self, p15):
        assert S.cdf_stable(p15, -1000.0) < 1e-3
        assert S.cdf_stable(p15, 1000.0) > 1.0 - 1e-3

    def test_monotone_on_grid(self, p15):
        grid = np.linspace(-20.0, 20.0, 1000)
        vals = S.cdf_stable_batch(p15, grid)
        assert np.all(np.diff(vals) >= 0.0)
        assert np.all((vals >= 0.0) & (vals <= 1.0))

    @pytest.mark.parametrize("alpha", [1.2, 1.5, 1.8])
    def test_against_scipy(self, alpha):
        p = S.StableParams(alpha, 1.0)
        xs = np.linspace(-15, 15, 31)
        mine = S.cdf_stable_batch(p, xs)
        ref = levy_stable.cdf(xs, alpha, 1.0)
        assert np.max(np.abs(mine - ref)) < 2e-4

    @pytest.mark.parametrize("alpha", [1.2, 1.5, 1.8])
    def test_sampler_consistency(self, alpha):
        p = S.StableParams(alpha, 1.0)
        draws = S.sample_stable(p, 7, 100_000)
        cdf = S.make_cdf_interpolant(p, float(draws.min()) - 1, float(draws.max()) + 1)
        assert S.ks_statistic(draws, cdf) < 0.01


class TestKsStatistic:
    def test_inverse_transform_scale(self, rng):
        u = rng.random(10_000)
        assert S.ks_statistic(u, lambda x: np.clip(x, 0, 1)) < 0.02

    def test_degenerate_single_sample(self):
        assert S.ks_statistic([0.0], lambda x: np.clip(x, 0, 1)) == 1.0

    def test_disjoint_supports(self, rng):
        u = rng.random(1000) + 10.0
        assert S.ks_statistic(u, lambda x: np.clip(x, 0, 1)) > 0.999

    def test_two_sample(self, rng):
        a = rng.random(5000)
        b = rng.random(5000) + 10.0
        assert S.ks_two_sample(a, a) == 0.0
        assert S.ks_two_sample(a, b) == 1.0


class TestHill:
    def _pareto(self, alpha, n, seed=0):
        from cusplevy.rng import substream

        u = substream(seed, 99).random(n)
        return u ** (-1.0 / alpha)

    def test_pareto_15(self):
        x = self._pareto(1.5, 100_000)
        assert 1.4 <= S.hill_estimator(x, 1000) <= 1.6

    def test_pareto_10(self):
        x = self._pareto(1.0, 100_000)
        assert 0.93 <= S.hill_estimator(x, 1000) <= 1.07

    def test_recovers_within_band_at_k_two_thirds(self):
        n = 100_000
        k = int(n ** (2.0 / 3.0))
        for alpha in (1.2, 1.5, 1.8):
            x = self._pareto(alpha, n, seed=int(alpha * 10))
            assert abs(S.hill_estimator(x, k) - alpha) < 0.1

    def test_constant_samples_error(self):
        with pytest.raises(ValueError):
            S.hill_estimator(np.ones(100), 10)

    def test_k_range_error(self):
        with pytest.raises(ValueError):
            S.hill_estimator(np.arange(1.0, 10.0), 9)
        with pytest.raises(ValueError):
            S.hill_estimator(np.arange(1.0, 10.0), 0)


class TestFit:
    def test_location_scale_recovery(self):
        p = S.StableParams(1.5, 2.0)
        draws = 3.0 + S.sample_stable(p, 5, 60_000)
        loc, scale = S.fit_stable_location_scale(draws, 1.5)
        assert abs(loc - 3.0) < 0.1
        assert abs(scale - 2.0) < 0.1
