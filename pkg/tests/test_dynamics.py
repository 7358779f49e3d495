"""Orbit metrics, separated-set growth, entropy slopes, mmdim dial."""

import math

import numpy as np
import pytest

from largeness import (
    BowenSpace,
    DomainError,
    DynamicalMap,
    ParameterDomain,
    audit_pushforward_separation,
    bowen_metric,
    circle_space,
    entropy_estimate,
    grid_cube,
    identity_map,
    map_from_function,
    mmdim_experiment,
    multiplication_map,
    separated_count,
    separation_profile,
)


class TestMaps:
    def test_multiplication_table(self):
        sp = circle_space(16)
        x3 = multiplication_map(sp, 3)
        assert x3.multiplier == 3
        assert x3.exact
        assert list(x3.table[:6]) == [0, 3, 6, 9, 12, 15]

    def test_iterate(self):
        sp = circle_space(100)
        x2 = multiplication_map(sp, 2)
        assert x2.iterate(np.array([3]), 4)[0] == 48
        assert x2.iterate(np.array([3]), 0)[0] == 3

    def test_identity(self):
        sp = circle_space(10)
        ident = identity_map(sp)
        assert ident.multiplier == 1
        assert list(ident.table) == list(range(10))

    def test_rounded_function_is_marked_inexact(self):
        sp = circle_space(32)
        tent = map_from_function(sp, lambda x: min(2 * x, 2 - 2 * x), label="tent")
        assert not tent.exact
        assert tent.table[8] == 16  # x=1/4 -> 1/2

    def test_domain_checks(self):
        with pytest.raises(DomainError):
            multiplication_map(grid_cube(1, 9), 2)
        with pytest.raises(ParameterDomain):
            multiplication_map(circle_space(8), 0)


class TestBowenMetric:
    def test_n_zero_is_base_metric(self):
        sp = circle_space(32)
        bowen = bowen_metric(sp, multiplication_map(sp, 2), 0)
        P = np.arange(16)
        Q = (P * 7 + 3) % 32
        assert bowen.dist_pairs(P, Q) == pytest.approx(sp.dist_pairs(P, Q))

    def test_identity_map_never_expands(self):
        sp = circle_space(32)
        bowen = bowen_metric(sp, identity_map(sp), 5)
        P = np.arange(32)
        Q = np.roll(P, 11)
        assert bowen.dist_pairs(P, Q) == pytest.approx(sp.dist_pairs(P, Q))

    def test_doubling_example(self):
        # d_[1](0, 1) on Z/16: max(1/16, d(0, 2)) = 1/8
        sp = circle_space(16)
        bowen = bowen_metric(sp, multiplication_map(sp, 2), 1)
        assert bowen.dist(0, 1) == pytest.approx(1 / 8)
        assert bowen.dist(0, 8) == pytest.approx(1 / 2)

    def test_orbit_max_matches_direct_computation(self):
        sp = circle_space(64)
        x3 = multiplication_map(sp, 3)
        bowen = bowen_metric(sp, x3, 4)
        rng = np.random.default_rng(7)
        for _ in range(20):
            a, b = rng.integers(0, 64, size=2)
            terms = []
            xa, xb = np.array([a]), np.array([b])
            for _ in range(5):
                terms.append(sp.dist(int(xa[0]), int(xb[0])))
                xa, xb = x3.table[xa], x3.table[xb]
            assert bowen.dist(int(a), int(b)) == pytest.approx(max(terms))

    def test_diameter_equals_base(self):
        sp = circle_space(40)
        assert bowen_metric(sp, multiplication_map(sp, 2), 6).diameter() == sp.diameter()

    def test_validation(self):
        sp = circle_space(8)
        with pytest.raises(ParameterDomain):
            BowenSpace(sp, identity_map(sp), -1)
        with pytest.raises(DomainError):
            BowenSpace(sp, identity_map(circle_space(9)), 1)


class TestSeparatedCount:
    def test_fast_path_matches_generic(self):
        """The translation-invariance shortcut must agree with the plain greedy."""
        sp = circle_space(97)
        x3 = multiplication_map(sp, 3)
        generic = DynamicalMap(table=x3.table, label="x3-generic", multiplier=None)
        for n, eps in [(0, 0.1), (1, 0.07), (2, 0.05), (3, 1 / 16), (4, 1 / 32)]:
            assert separated_count(sp, x3, n, eps) == separated_count(sp, generic, n, eps)

    def test_monotone_in_n(self):
        sp = circle_space(256)
        x2 = multiplication_map(sp, 2)
        counts = [separated_count(sp, x2, n, 1 / 16) for n in range(6)]
        assert counts == sorted(counts)

    def test_antitone_in_eps(self):
        sp = circle_space(256)
        x2 = multiplication_map(sp, 2)
        counts = [separated_count(sp, x2, 3, eps) for eps in (1 / 4, 1 / 8, 1 / 16, 1 / 32)]
        assert counts == sorted(counts)

    def test_doubling_counts_double(self):
        sp = circle_space(4096)
        x2 = multiplication_map(sp, 2)
        counts = [separated_count(sp, x2, n, 1 / 8) for n in range(1, 8)]
        for a, b in zip(counts, counts[1:]):
            assert b == 2 * a

    def test_eps_positive(self):
        sp = circle_space(8)
        with pytest.raises(DomainError):
            separated_count(sp, identity_map(sp), 1, 0.0)


class TestEntropy:
    def test_doubling(self):
        sp = circle_space(4096)
        prof = separation_profile(sp, multiplication_map(sp, 2), range(1, 9), [1 / 8, 1 / 16, 1 / 32])
        est = entropy_estimate(prof)
        assert abs(est.value - math.log(2)) / math.log(2) < 0.15

    def test_tripling(self):
        sp = circle_space(3 ** 7)
        prof = separation_profile(sp, multiplication_map(sp, 3), range(1, 7), [1 / 9, 1 / 27])
        est = entropy_estimate(prof)
        assert abs(est.value - math.log(3)) / math.log(3) < 0.15

    def test_identity_is_zero(self):
        sp = circle_space(4096)
        prof = separation_profile(sp, identity_map(sp), range(1, 7), [1 / 8, 1 / 16])
        assert abs(entropy_estimate(prof).value) < 0.01

    def test_saturation_is_flagged(self):
        # counts hit the resolution cap almost immediately on a tiny grid
        sp = circle_space(64)
        prof = separation_profile(sp, multiplication_map(sp, 2), range(1, 7), [1 / 8])
        est = entropy_estimate(prof)
        assert any("InsufficientGrowth" in w for w in est.warnings)

    def test_threads_agree(self):
        sp = circle_space(512)
        x2 = multiplication_map(sp, 2)
        a = separation_profile(sp, x2, range(1, 5), [1 / 8, 1 / 16], threads=1)
        b = separation_profile(sp, x2, range(1, 5), [1 / 8, 1 / 16], threads=4)
        assert sorted(a.rows) == sorted(b.rows)


class TestMmdim:
    def test_dial_tracks_beta_p(self):
        """With beta p = 0.8 the measured ratio stays near 0.8 and the
        finest radius lands at or above it."""
        sp = circle_space(4096)
        x2 = multiplication_map(sp, 2)
        tbl = mmdim_experiment(sp, x2, 2.0, [2 ** -4, 2 ** -6, 2 ** -8], [10], beta=0.4)
        ratios = [r for *_, r in tbl.rows]
        assert len(ratios) == 3
        assert all(0.6 < r <= 1.0 for r in ratios)
        assert ratios[-1] >= 2 * 0.4
        assert ratios[-1] >= ratios[0]

    def test_identity_ratios_vanish(self):
        sp = circle_space(4096)
        tbl = mmdim_experiment(sp, identity_map(sp), 2.0, [2 ** -4, 2 ** -6], [10], beta=0.9)
        assert [r for *_, r in tbl.rows] == [0.0, 0.0]
        assert any("exceeds diameter" in w for w in tbl.warnings)

    def test_ratio_lookup(self):
        sp = circle_space(512)
        tbl = mmdim_experiment(sp, multiplication_map(sp, 2), 2.0, [2 ** -4], [4], beta=0.4)
        n, eps, *_ = tbl.rows[0]
        assert tbl.ratio_at(n, eps) == tbl.rows[0][-1]
        with pytest.raises(KeyError):
            tbl.ratio_at(99, 0.5)

    def test_parameter_domain(self):
        sp = circle_space(64)
        x2 = multiplication_map(sp, 2)
        with pytest.raises(ParameterDomain):
            mmdim_experiment(sp, x2, 2.0, [0.1], [2], beta=0.0)
        with pytest.raises(ParameterDomain):
            mmdim_experiment(sp, x2, 0.5, [0.1], [2], beta=0.5)


class TestPushforwardSeparation:
    def test_doubling_audit_passes(self):
        sp = circle_space(512)
        audit = audit_pushforward_separation(
            sp, multiplication_map(sp, 2), 2.0, k=2, n=3, eps=1 / 32
        )
        assert audit.passed
        assert audit.min_margin >= -1e-9
        assert audit.pairs_checked == 20
