import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cusplevy import paths as P


def limit_path():
    return P.StepPath(0.0, 1.0, [0.5], [0.0, 1.0])


def family(which, n):
    a_n = 1.0 + 1.0 / n
    if which == "j1":
        return P.StepPath(0, 1, [0.5 - 1 / n], [0.0, a_n])
    if which == "m1":
        return P.StepPath(0, 1, [0.5 - 1 / n, 0.5], [0.0, 0.75, a_n])
    if which == "m2":
        return P.StepPath(0, 1, [0.5 - 1 / n, 0.5, 0.5 + 1 / n], [0.0, 0.75, 1 / 3, a_n])
    if which == "c":
        return P.StepPath(0, 1, [0.5 - 1 / n, 0.5], [0.0, 1.25, a_n])
    raise AssertionError


@st.composite
def step_paths(draw):
    k = draw(st.integers(min_value=0, max_value=6))
    times = sorted(set(draw(st.lists(st.floats(0.01, 1.0), min_size=k, max_size=k))))
    values = draw(st.lists(st.floats(-2, 2), min_size=len(times) + 1, max_size=len(times) + 1))
    return P.StepPath(0.0, 1.0, times, values)


class TestStepPath:
    def test_validation(self):
        with pytest.raises(ValueError):
            P.StepPath(0, 1, [0.5, 0.5], [0, 1, 2])
        with pytest.raises(ValueError):
            P.StepPath(0, 1, [0.0], [0, 1])  # jump at the left endpoint
        with pytest.raises(ValueError):
            P.StepPath(0, 1, [1.5], [0, 1])
        with pytest.raises(ValueError):
            P.StepPath(0, 1, [0.5], [0, 1, 2])
        with pytest.raises(ValueError):
            P.StepPath(1, 0, [], [0])

    def test_right_continuity(self):
        p = limit_path()
        assert p(0.5) == 1.0
        assert p.left_limit(0.5) == 0.0
        assert p(0.49) == 0.0
        assert p(1.0) == 1.0

    def test_canonical_drops_zero_jumps(self):
        p = P.StepPath(0, 1, [0.3, 0.6], [1.0, 1.0, 2.0])
        q = p.canonical()
        assert q.times.tolist() == [0.6]
        assert q.values.tolist() == [1.0, 2.0]


class TestPathFromSums:
    def test_zero_sums(self):
        p = P.path_from_sums(np.zeros(5), 5, 1.0)
        assert p.same_as(P.StepPath(0, 1, [], [0.0]))

    def test_direct_evaluation(self):
        norm = 3.0 ** (2.0 / 3.0)
        p = P.path_from_sums([1.0, 2.0, 3.0], 3, norm)
        assert p(0.0) == 0.0
        assert abs(p(1 / 3) - 1 / norm) < 1e-15
        assert abs(p(2 / 3) - 2 / norm) < 1e-15
        assert abs(p(1.0) - 3.0 ** (1.0 / 3.0)) < 1e-15

    def test_constant_increments_collapse(self):
        c = 0.7
        p = P.path_from_sums([c, c, c, c], 4, 1.0)
        assert p.times.tolist() == [0.25]
        assert p.values.tolist() == [0.0, c]

    def test_errors(self):
        with pytest.raises(ValueError):
            P.path_from_sums([1.0], 0, 1.0)
        with pytest.raises(ValueError):
            P.path_from_sums([1.0], 2, 1.0)


class TestCompletedGraph:
    def test_half_indicator(self):
        g = P.completed_graph(limit_path())
        assert np.array_equal(
            g.vertices, np.array([[0.0, 0.0], [0.5, 0.0], [0.5, 1.0], [1.0, 1.0]])
        )

    def test_constant_path_single_segment(self):
        g = P.completed_graph(P.StepPath(0, 1, [], [0.3]))
        assert g.vertices.shape == (2, 2)

    def test_equal_levels_merge(self):
        p = P.StepPath(0, 1, [0.4, 0.7], [1.0, 1.0, 2.0])
        g = P.completed_graph(p)
        assert g.vertices.shape[0] == 4  # plateau, vertical, plateau only

    @settings(max_examples=150, deadline=None)
    @given(step_paths())
    def test_reconstruction_identity(self, p):
        assert P.completed_graph(p).reconstruct().same_as(p)


class TestUniform:
    def test_identical(self):
        assert P.dist_uniform(limit_path(), limit_path()) == 0.0

    def test_family_value_exact(self):
        for n in (10, 100):
            a_n = 1 + 1 / n
            assert P.dist_uniform(family("j1", n), limit_path()) == a_n

    def test_constant_shift(self, rng):
        p = P.random_step_path(rng)
        q = P.StepPath(p.a, p.b, p.times, p.values + 0.37)
        assert abs(P.dist_uniform(p, q) - 0.37) < 1e-15

    def test_domain_mismatch(self):
        with pytest.raises(P.DomainMismatchError):
            P.dist_uniform(limit_path(), P.StepPath(0, 2, [0.5], [0, 1]))


class TestM2:
    def test_self_distance_zero(self, rng):
        for _ in range(20):
            p = P.random_step_path(rng)
            assert P.dist_M2(p, p) == 0.0

    def test_endpoint_jump_value(self):
        gbar = P.StepPath(0, 1, [1.0], [0.0, 1.0])
        assert P.dist_M2(limit_path(), gbar) == 0.5

    def test_appendix_family_rate(self):
        vals = [P.dist_M2(family("m2", n), limit_path()) for n in (10, 100, 1000)]
        assert vals[1] <= 0.05
        assert vals[0] > vals[1] > vals[2]

    def test_figure_c_floor(self):
        for n in (10, 100, 1000):
            assert P.dist_M2(family("c", n), limit_path()) >= 0.2

    def test_against_sampled_oracle(self, rng):
        for _ in range(25):
            p, q = P.random_step_path(rng), P.random_step_path(rng)
            exact = P.dist_M2(p, q)
            approx = P.dist_M2_sampled(p, q, 800)
            assert abs(exact - approx) < 3e-3

    def test_symmetry_exact(self, rng):
        for _ in range(25):
            p, q = P.random_step_path(rng), P.random_step_path(rng)
            assert P.dist_M2(p, q) == P.dist_M2(q, p)


class TestM1:
    def test_identical_zero(self, rng):
        for refinement in (16, 64):
            p = P.random_step_path(rng)
            assert P.dist_M1(p, p, refinement) == 0.0

    def test_refinement_below_jumps_rejected(self):
        p = P.StepPath(0, 1, np.linspace(0.1, 0.9, 9), np.arange(10.0))
        with pytest.raises(ValueError):
            P.dist_M1(p, limit_path(), 4)

    def test_appendix_staircase_rate(self):
        for n in (10, 100):
            gn, g = family("m1", n), limit_path()
            mesh = P.skorokhod_mesh(gn, g, 64)
            assert P.dist_M1(gn, g, 64) <= 1.0 / n + mesh

    def test_monotone_staircase_vs_single_jump(self):
        k, width = 8, 0.08
        times = 0.5 + width * (np.arange(k) / (k - 1) - 0.5)
        times = np.clip(times, 1e-6, 1.0)
        stair = P.StepPath(0, 1, times, np.linspace(0, 1, k + 1))
        mesh = P.skorokhod_mesh(stair, limit_path(), 64)
        assert P.dist_M1(stair, limit_path(), 64) <= width + mesh

    def test_nonincreasing_in_refinement(self, rng):
        for _ in range(10):
            p, q = P.random_step_path(rng), P.random_step_path(rng)
            r = 32
            mesh = P.skorokhod_mesh(p, q, r)
            assert P.dist_M1(p, q, 2 * r) <= P.dist_M1(p, q, r) + 1e-12
            assert abs(P.dist_M1(p, q, 2 * r) - P.dist_M1(p, q, r)) <= mesh + 1e-12

    def test_interval_certified(self, rng):
        p, q = P.random_step_path(rng), P.random_step_path(rng)
        lo, hi = P.dist_M1(p, q, 64, interval=True)
        assert 0.0 <= lo <= hi
        assert P.dist_M2(p, q) <= hi + 1e-12


class TestJ1:
    def test_identical_zero(self):
        assert P.dist_J1(limit_path(), limit_path(), 32) == 0.0

    def test_jump_matching_family(self):
        for n in (10, 100, 1000):
            gn = family("j1", n)
            mesh = P.skorokhod_mesh(gn, limit_path(), 64)
            val = P.dist_J1(gn, limit_path(), 64)
            assert val <= 1.0 / n + mesh
            # the explicit jump-matching time change is found exactly
            assert abs(val - 1.0 / n) < 1e-12

    def test_two_jump_obstruction(self):
        for n in (10, 100):
            gn = family("m1", n)
            mesh = P.skorokhod_mesh(gn, limit_path(), 64)
            lo, hi = P.dist_J1(gn, limit_path(), 64, interval=True)
            assert lo >= 0.25 - mesh
            assert lo <= hi

    def test_never_exceeds_uniform(self, rng):
        for _ in range(20):
            p, q = P.random_step_path(rng), P.random_step_path(rng)
            assert P.dist_J1(p, q, 32) <= P.dist_uniform(p, q) + 1e-12


class TestOrderingAndAxioms:
    def test_ordering_on_random_pairs(self, rng):
        for _ in range(60):
            p, q = P.random_step_path(rng), P.random_step_path(rng)
            mesh = P.skorokhod_mesh(p, q, 48)
            m2 = P.dist_M2(p, q)
            m1 = P.dist_M1(p, q, 48)
            j1 = P.dist_J1(p, q, 48)
            du = P.dist_uniform(p, q)
            assert m2 <= m1 + mesh + 1e-12
            assert m1 <= j1 + 2 * mesh + 1e-12
            assert j1 <= du + 1e-12

    def test_symmetry_all(self, rng):
        for _ in range(10):
            p, q = P.random_step_path(rng), P.random_step_path(rng)
            assert P.dist_M1(p, q, 48) == P.dist_M1(q, p, 48)
            assert P.dist_J1(p, q, 48) == P.dist_J1(q, p, 48)
            assert P.dist_uniform(p, q) == P.dist_uniform(q, p)

    def test_triangle_inequalities(self, rng):
        for _ in range(15):
            p, q, r = (P.random_step_path(rng) for _ in range(3))
            assert P.dist_M2(p, r) <= P.dist_M2(p, q) + P.dist_M2(q, r) + 1e-12
            assert P.dist_uniform(p, r) <= P.dist_uniform(p, q) + P.dist_uniform(q, r) + 1e-12
            mesh = max(P.skorokhod_mesh(a, b, 48) for a, b in ((p, q), (q, r), (p, r)))
            assert P.dist_M1(p, r, 48) <= P.dist_M1(p, q, 48) + P.dist_M1(q, r, 48) + 2 * mesh
            assert P.dist_J1(p, r, 48) <= P.dist_J1(p, q, 48) + P.dist_J1(q, r, 48) + 2 * mesh


class TestFlattenEndpoints:
    def test_monotone_bound_is_width(self):
        p = P.StepPath(0, 1, [0.2, 0.5, 0.8], [0.0, 0.5, 1.0, 1.5])
        flat, bound, a_term, b_term = P.flatten_endpoints(p, 0.1, 0.9)
        assert a_term == 0.0
        assert abs(bound - 0.8) < 1e-15

    def test_half_indicator_bound(self):
        flat, bound, _, _ = P.flatten_endpoints(limit_path(), 0.0, 1.0)
        assert bound == 1.0
        assert P.dist_M2(P.restrict(limit_path(), 0.0, 1.0), flat) == 0.5

    def test_random_property(self, rng):
        for _ in range(150):
            p = P.random_step_path(rng)
            a = float(rng.uniform(0.0, 0.45))
            b = float(rng.uniform(a + 0.1, 1.0))
            flat, bound, _, _ = P.flatten_endpoints(p, a, b)
            assert P.dist_M2(P.restrict(p, a, b), flat) <= bound + 1e-12

    def test_bad_interval(self):
        with pytest.raises(ValueError):
            P.flatten_endpoints(limit_path(), 0.5, 0.5)


class TestSupProcess:
    def test_nondecreasing_path(self):
        p = P.StepPath(0, 1, [0.3, 0.6], [0.0, 1.0, 2.0])
        for t in (0.1, 0.3, 0.9):
            assert P.sup_process(p, t) == p(t)

    def test_interior_max_sticks(self):
        p = P.StepPath(0, 1, [0.3, 0.6], [0.0, 5.0, 1.0])
        assert P.sup_process(p, 0.2) == 0.0
        assert P.sup_process(p, 0.45) == 5.0
        assert P.sup_process(p, 1.0) == 5.0

    def test_grid_oracle(self, rng):
        for _ in range(20):
            p = P.random_step_path(rng)
            t = float(rng.uniform(0, 1))
            grid = np.linspace(0, t, 2000)
            assert abs(P.sup_process(p, t) - float(np.max(p(grid)))) < 1e-9


class TestSerialization:
    def test_round_trip(self, rng):
        for _ in range(20):
            p = P.random_step_path(rng)
            q = P.path_from_csv(P.path_to_csv(p))
            assert q.same_as(p)
            assert q.b == p.b

    def test_first_row_is_domain_start(self):
        text = P.path_to_csv(limit_path())
        rows = [line for line in text.splitlines() if line and not line.startswith(("#", "time"))]
        assert rows[0].startswith("0.0,")
