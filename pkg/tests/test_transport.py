import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from largeness import (
    DiscreteMeasure,
    MassMismatch,
    MatrixSpace,
    NotMultiple,
    SizeLimit,
    SpaceMismatch,
    TransportPlan,
    assignment_oracle,
    canonicalize_to_forest,
    check_cyclical_monotonicity,
    grid_cube,
    is_forest,
    plan_graph,
    random_measure,
    wasserstein,
)
from conftest import disjoint_pair, granular_pair


@pytest.fixture
def two_point():
    return MatrixSpace([[0.0, 1.0], [1.0, 0.0]], label="pair")


class TestSolverBasics:
    def test_diracs(self, line9):
        for p in (1.0, 2.0, 3.0):
            d, plan = wasserstein(
                DiscreteMeasure.dirac(line9, 0), DiscreteMeasure.dirac(line9, 8), p=p
            )
            assert d == pytest.approx(line9.dist(0, 8))
            assert plan.src.tolist() == [0] and plan.dst.tolist() == [8]

    def test_segment_identification(self, two_point):
        """W_1 between Bernoulli-type measures is the difference of weights."""
        for t, s in [(0.3, 0.8), (0.0, 1.0), (0.5, 0.5), (0.9, 0.1)]:
            mu = DiscreteMeasure(two_point, [0, 1], [t, 1.0 - t])
            nu = DiscreteMeasure(two_point, [0, 1], [s, 1.0 - s])
            d, _ = wasserstein(mu, nu, p=1.0)
            assert d == pytest.approx(abs(t - s), abs=1e-12)

    def test_identical_measures_zero(self, line9, rng):
        mu = random_measure(line9, rng)
        d, plan = wasserstein(mu, mu, p=2.0)
        assert d == pytest.approx(0.0, abs=1e-12)
        assert np.array_equal(plan.src, plan.dst)

    def test_mass_mismatch(self, line9):
        mu = DiscreteMeasure(line9, [0], [1.0])
        nu = DiscreteMeasure(line9, [1], [0.9])
        with pytest.raises(MassMismatch):
            wasserstein(mu, nu)

    def test_space_mismatch(self, line9, circle16):
        mu = DiscreteMeasure.dirac(line9, 0)
        nu = DiscreteMeasure.dirac(circle16, 0)
        with pytest.raises(SpaceMismatch):
            wasserstein(mu, nu)

    def test_plan_marginals(self, line9, rng):
        for _ in range(20):
            mu, nu = granular_pair(line9, rng)
            _, plan = wasserstein(mu, nu, p=2.0)
            assert plan.marginal_error() <= 1e-9


class TestOracle:
    def test_diracs_unit(self, line9):
        mu = DiscreteMeasure.dirac(line9, 0)
        nu = DiscreteMeasure.dirac(line9, 4)
        assert assignment_oracle(mu, nu, p=1.0, granularity=1) == pytest.approx(0.5)

    def test_two_thirds_example(self, two_point):
        mu = DiscreteMeasure(two_point, [0, 1], [2.0 / 3.0, 1.0 / 3.0])
        nu = DiscreteMeasure(two_point, [0, 1], [1.0 / 3.0, 2.0 / 3.0])
        d = assignment_oracle(mu, nu, p=1.0, granularity=1 / 3)
        assert d == pytest.approx(1.0 / 3.0, abs=1e-12)

    def test_not_multiple(self, two_point):
        mu = DiscreteMeasure(two_point, [0, 1], [0.55, 0.45])
        nu = DiscreteMeasure(two_point, [0, 1], [0.5, 0.5])
        with pytest.raises(NotMultiple):
            assignment_oracle(mu, nu, p=1.0, granularity=1 / 4)

    def test_size_limit(self, line9):
        mu = DiscreteMeasure.dirac(line9, 0)
        nu = DiscreteMeasure.dirac(line9, 8)
        with pytest.raises(SizeLimit):
            assignment_oracle(mu, nu, p=1.0, granularity=1e-4)

    def test_matches_solver(self, rng):
        g = grid_cube(1, 33)
        for _ in range(50):
            mu, nu = granular_pair(g, rng)
            d, _ = wasserstein(mu, nu, p=1.0)
            assert d == pytest.approx(
                assignment_oracle(mu, nu, p=1.0, granularity=1 / 16), abs=1e-9
            )


class TestMetricAxioms:
    @given(st.integers(0, 2**31 - 1))
    @settings(max_examples=30, deadline=None)
    def test_triangle_inequality(self, seed):
        g = grid_cube(1, 17)
        r = np.random.default_rng(seed)
        mu = random_measure(g, r, max_support=4)
        nu = random_measure(g, r, max_support=4)
        rho = random_measure(g, r, max_support=4)
        for p in (1.0, 2.0):
            ab, _ = wasserstein(mu, nu, p=p)
            bc, _ = wasserstein(nu, rho, p=p)
            ac, _ = wasserstein(mu, rho, p=p)
            assert ac <= ab + bc + 1e-8

    def test_symmetry(self, line9, rng):
        for _ in range(10):
            mu, nu = granular_pair(line9, rng)
            d1, _ = wasserstein(mu, nu, p=2.0)
            d2, _ = wasserstein(nu, mu, p=2.0)
            assert d1 == pytest.approx(d2, abs=1e-10)


class TestPlanGraph:
    def test_identity_plan_no_edges(self, line9):
        mu = DiscreteMeasure.dirac(line9, 3)
        _, plan = wasserstein(mu, mu)
        graph = plan_graph(plan)
        assert len(graph.edges) == 0

    def test_single_edge(self, line9):
        _, plan = wasserstein(
            DiscreteMeasure.dirac(line9, 0), DiscreteMeasure.dirac(line9, 5)
        )
        graph = plan_graph(plan)
        assert len(graph.edges) == 1

    def test_admissibility_random(self, line9, rng):
        for _ in range(30):
            mu, nu = granular_pair(line9, rng)
            _, plan = wasserstein(mu, nu, p=1.0)
            ok, reasons = plan_graph(plan).admissibility_check()
            assert ok, reasons


class TestForest:
    def test_forest_input_unchanged(self, line9):
        mu = DiscreteMeasure(line9, [0, 4], [0.5, 0.5])
        nu = DiscreteMeasure(line9, [2, 8], [0.5, 0.5])
        _, plan = wasserstein(mu, nu, p=1.0)
        assert is_forest(plan)
        out = canonicalize_to_forest(plan)
        assert np.array_equal(out.src, plan.src)
        assert np.array_equal(out.dst, plan.dst)
        assert np.allclose(out.mass, plan.mass)

    def test_square_cycle_cancelled(self):
        # unit square, sources on one diagonal, targets on the other: all
        # four cross distances are 1, so the 4-edge plan is cost-degenerate
        sq = MatrixSpace.from_coords(
            np.array([[0.0, 0.0], [1.0, 1.0], [1.0, 0.0], [0.0, 1.0]])
        )
        mu = DiscreteMeasure(sq, [0, 1], [0.5, 0.5])
        nu = DiscreteMeasure(sq, [2, 3], [0.5, 0.5])
        plan = TransportPlan(
            source=mu,
            target=nu,
            p=1.0,
            src=np.array([0, 0, 1, 1]),
            dst=np.array([2, 3, 2, 3]),
            mass=np.array([0.25, 0.25, 0.25, 0.25]),
        )
        out = canonicalize_to_forest(plan)
        assert is_forest(out)
        assert len(out.src) <= 3
        assert out.marginal_error() <= 1e-12
        assert out.cost() == pytest.approx(plan.cost(), abs=1e-12)

    def test_antiparallel_pair_drains_to_diagonals(self, two_point):
        mu = DiscreteMeasure(two_point, [0, 1], [0.5, 0.5])
        nu = DiscreteMeasure(two_point, [0, 1], [0.5, 0.5])
        plan = TransportPlan(
            source=mu,
            target=nu,
            p=1.0,
            src=np.array([0, 1]),
            dst=np.array([1, 0]),
            mass=np.array([0.5, 0.5]),
        )
        out = canonicalize_to_forest(plan)
        assert is_forest(out)
        assert out.marginal_error() <= 1e-12
        assert out.cost() == pytest.approx(0.0, abs=1e-12)
        assert np.array_equal(out.src, out.dst)

    def test_circulation_drains_to_diagonals(self, line9):
        # an oriented cycle is pure waste: cancelling it must hand each
        # point its mass back without touching the marginals
        mu = DiscreteMeasure(line9, [0, 4, 8], [1 / 3] * 3)
        nu = DiscreteMeasure(line9, [0, 4, 8], [1 / 3] * 3)
        circ = TransportPlan(
            source=mu,
            target=nu,
            p=2.0,
            src=np.array([0, 4, 8]),
            dst=np.array([4, 8, 0]),
            mass=np.array([1 / 3] * 3),
        )
        out = canonicalize_to_forest(circ)
        assert is_forest(out)
        assert out.marginal_error() <= 1e-12
        assert out.cost() == pytest.approx(0.0, abs=1e-12)

    def test_hub_cycle_is_kept_when_forced(self):
        # monotone coupling on the line at p=2 relays all mass of the two
        # middle points: uniquely optimal, and its graph cycle cannot be
        # cancelled without corrupting marginals; it must survive intact
        g = grid_cube(1, 33)
        mu = DiscreteMeasure(g, [0, 13, 19], [0.5, 0.25, 0.25])
        nu = DiscreteMeasure(g, [13, 19, 32], [0.25, 0.25, 0.5])
        _, plan = wasserstein(mu, nu, p=2.0)
        assert not is_forest(plan)
        out = canonicalize_to_forest(plan)
        assert not is_forest(out)
        assert out.marginal_error() <= 1e-12
        assert out.cost() == pytest.approx(plan.cost(), abs=1e-12)

    def test_random_optimal_plans(self, rng):
        g = grid_cube(1, 33)
        for _ in range(40):
            mu, nu = disjoint_pair(g, rng)
            _, plan = wasserstein(mu, nu, p=2.0)
            out = canonicalize_to_forest(plan)
            assert is_forest(out)
            assert out.marginal_error() <= 1e-12
            assert abs(out.cost() - plan.cost()) <= 1e-9

    def test_averaged_optima_cancel_to_forest(self, rng):
        # on the line at p=1, monotone and crossed matchings tie whenever
        # both targets sit right of both sources; their average is optimal
        # but carries an alternating 4-cycle that must cancel away
        g = grid_cube(1, 33)
        for _ in range(20):
            a, b = sorted(rng.choice(16, size=2, replace=False).tolist())
            c, d = sorted((17 + rng.choice(16, size=2, replace=False)).tolist())
            mu = DiscreteMeasure(g, [a, b], [0.5, 0.5])
            nu = DiscreteMeasure(g, [c, d], [0.5, 0.5])
            best, _ = wasserstein(mu, nu, p=1.0)
            mix = TransportPlan(
                source=mu,
                target=nu,
                p=1.0,
                src=np.array([a, a, b, b]),
                dst=np.array([c, d, c, d]),
                mass=np.array([0.25, 0.25, 0.25, 0.25]),
            )
            assert mix.cost() == pytest.approx(best, abs=1e-9)
            assert not is_forest(mix)
            out = canonicalize_to_forest(mix)
            assert is_forest(out)
            assert len(out.mass) < len(mix.mass)
            assert out.marginal_error() <= 1e-12
            assert abs(out.cost() - mix.cost()) <= 1e-9

    def test_masses_stay_integer_multiples(self, rng):
        g = grid_cube(1, 33)
        for _ in range(25):
            mu, nu = disjoint_pair(g, rng, granularity=1 / 8)
            _, plan = wasserstein(mu, nu, p=1.0)
            out = canonicalize_to_forest(plan)
            assert is_forest(out)
            units = out.mass * 8
            assert np.allclose(units, np.round(units), atol=1e-9)


class TestCyclicalMonotonicity:
    def test_crossing_plan_fails_with_gap_two(self):
        line = MatrixSpace([[0.0, 1.0], [1.0, 0.0]], label="unit-line")
        mu = DiscreteMeasure(line, [0, 1], [0.5, 0.5])
        nu = DiscreteMeasure(line, [0, 1], [0.5, 0.5])
        crossing = TransportPlan(
            source=mu,
            target=nu,
            p=2.0,
            src=np.array([0, 1]),
            dst=np.array([1, 0]),
            mass=np.array([0.5, 0.5]),
        )
        report = check_cyclical_monotonicity(crossing)
        assert not report.passed
        assert report.gap == pytest.approx(2.0)
        assert report.witness is not None

    def test_single_edge_vacuous(self, line9):
        _, plan = wasserstein(
            DiscreteMeasure.dirac(line9, 0), DiscreteMeasure.dirac(line9, 7)
        )
        assert check_cyclical_monotonicity(plan).passed

    def test_solver_plans_pass(self, rng):
        g = grid_cube(1, 33)
        for _ in range(40):
            mu = random_measure(g, rng, max_support=6, granularity=1 / 16)
            nu = random_measure(g, rng, max_support=6, granularity=1 / 16)
            _, plan = wasserstein(mu, nu, p=2.0)
            assert check_cyclical_monotonicity(plan, max_len=4).passed

    def test_size_limit_guard(self, rng):
        g = grid_cube(1, 101)
        mu = random_measure(g, rng, max_support=40)
        nu = random_measure(g, rng, max_support=40)
        _, plan = wasserstein(mu, nu, p=1.0)
        with pytest.raises(SizeLimit):
            check_cyclical_monotonicity(plan, max_len=5)


def test_distance_scales_with_p(two_point):
    # same coupling cost 1 at every p: distance = (mass moved)^(1/p)
    mu = DiscreteMeasure(two_point, [0, 1], [0.75, 0.25])
    nu = DiscreteMeasure(two_point, [0, 1], [0.25, 0.75])
    for p in (1.0, 2.0, 4.0):
        d, _ = wasserstein(mu, nu, p=p)
        assert d == pytest.approx(0.5 ** (1.0 / p))
