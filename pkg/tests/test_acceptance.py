"""Release gate: thirteen numbered checks, one summary line each.

Every test records a pass/fail line (printed after the run) and asserts
at the stated tolerance.  Parameters are frozen; loosening them is a
release decision, not a test fix.
"""

import json
import math
import time

import numpy as np
import pytest

from conftest import disjoint_pair, granular_pair, record_acceptance
from largeness import (
    DiscreteMeasure,
    FiniteSubset,
    MatrixSpace,
    TransportPlan,
    WeightSequence,
    assignment_oracle,
    audit_gray_code,
    audit_homothetic_embedding,
    audit_intertwining,
    audit_power_embedding,
    audit_ultrametric_embedding,
    banach_cube,
    build_partition,
    canonicalize_to_forest,
    check_cyclical_monotonicity,
    circle_space,
    covering_profile,
    cube_packing,
    entropy_estimate,
    grid_cube,
    hausdorff_distance,
    hilbert_cube,
    homothetic_hc_embedding,
    identity_map,
    is_forest,
    mcrit_estimate,
    multiplication_map,
    occupancy_map,
    occupancy_w2_bound,
    separation_profile,
    ultrametric_embedding,
    wasserstein,
)
from largeness.cli import main as cli_main

GRID33 = grid_cube(1, 33)
UNIT = 1.0 / 16.0


def test_01_solver_matches_oracle():
    rng = np.random.default_rng(101)
    start = time.perf_counter()
    worst = 0.0
    for trial in range(200):
        mu, nu = granular_pair(GRID33, rng, granularity=UNIT, max_support=8)
        p = 1.0 if trial % 2 == 0 else 2.0
        dist, _ = wasserstein(mu, nu, p)
        ref = assignment_oracle(mu, nu, p, granularity=UNIT)
        worst = max(worst, abs(dist - ref))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-9 and elapsed < 10.0
    record_acceptance(
        1, "solver equals unit-mass oracle (200 instances)", ok,
        f"max |gap| {worst:.2e}, {elapsed:.1f} s",
    )
    assert worst <= 1e-9
    assert elapsed < 10.0


def test_02_power_embedding_bounds():
    start = time.perf_counter()
    two = MatrixSpace.from_coords(np.array([[0.0], [1.0]]))
    violations = 0
    pairs = 0
    for k in (1, 2, 3, 4):
        for p in (1.0, 2.0):
            rep = audit_power_embedding(two, k, p, exhaustive=True)
            violations += len(rep.violations)
            pairs += rep.sample_count
    circle = circle_space(64)
    for k in (1, 2, 3):
        for p in (1.0, 2.0):
            rep = audit_power_embedding(circle, k, p, sample_pairs=500, seed=2)
            violations += len(rep.violations)
            pairs += rep.sample_count
    elapsed = time.perf_counter() - start
    ok = violations == 0 and elapsed < 60.0
    record_acceptance(
        2, "bi-Lipschitz bounds on measure powers", ok,
        f"{pairs} pairs, {violations} violations, {elapsed:.1f} s",
    )
    assert violations == 0
    assert elapsed < 60.0


def test_03_intertwining_exact():
    space = circle_space(64)
    doubling = tuple((2 * i) % 64 for i in range(64))
    gap = audit_intertwining(space, doubling, 3, sample_tuples=100)
    ok = gap == 0.0
    record_acceptance(3, "embedding intertwines the doubling map", ok, f"max atom gap {gap!r}")
    assert gap == 0.0


def test_04_gray_code_constants():
    worst_M = 0.0
    for k in range(2, 11):
        rep = audit_gray_code(k)
        assert rep.violations == []
        assert rep.empirical_m == 1.0 / (2 ** k - 1)
        worst_M = max(worst_M, rep.empirical_M)
    ok = worst_M <= 1.0
    record_acceptance(
        4, "Gray-code constants m = 1/(2^k-1), M <= 1 (k = 2..10)", ok,
        f"max M {worst_M:.6f}",
    )
    assert ok


def test_05_ultrametric_similarity():
    worst = 0.0
    pairs = 0
    for k in (2, 3, 4):
        for p in (1.0, 2.0):
            rep = audit_ultrametric_embedding(k, 6, p, sample_pairs=34, seed=3)
            assert rep.violations == []
            factor = ultrametric_embedding(k, 6).exact_factor(p)
            worst = max(worst, abs(rep.empirical_m - factor), abs(rep.empirical_M - factor))
            pairs += rep.sample_count
    ok = worst <= 1e-9
    record_acceptance(
        5, "ultrametric embedding is an exact similarity", ok,
        f"{pairs} pairs, max |ratio - factor| {worst:.2e}",
    )
    assert ok


def test_06_forest_canonicalization():
    rng = np.random.default_rng(202)
    worst_marg = 0.0
    worst_drift = 0.0
    worst_unit = 0.0
    all_forest = True
    for trial in range(100):
        mu, nu = disjoint_pair(GRID33, rng, granularity=UNIT, max_support=8)
        p = 1.0 if trial % 2 == 0 else 2.0
        _, plan = wasserstein(mu, nu, p)
        out = canonicalize_to_forest(plan)
        all_forest &= is_forest(out)
        worst_marg = max(worst_marg, out.marginal_error())
        worst_drift = max(worst_drift, abs(out.cost() - plan.cost()))
        units = out.mass / UNIT
        worst_unit = max(worst_unit, float(np.abs(units - np.round(units)).max()))
    for _ in range(100):
        # cost-tied pair of vertex plans; their average carries a 4-cycle
        a, b = sorted(rng.choice(16, size=2, replace=False).tolist())
        c, d = sorted((17 + rng.choice(16, size=2, replace=False)).tolist())
        mu = DiscreteMeasure(GRID33, [a, b], [0.5, 0.5])
        nu = DiscreteMeasure(GRID33, [c, d], [0.5, 0.5])
        mixed = TransportPlan(
            source=mu, target=nu, p=1.0,
            src=np.array([a, a, b, b]), dst=np.array([c, d, c, d]),
            mass=np.full(4, 0.25),
        )
        dist, _ = wasserstein(mu, nu, 1.0)
        assert mixed.cost() == pytest.approx(dist, abs=1e-12)  # still optimal
        out = canonicalize_to_forest(mixed)
        all_forest &= is_forest(out)
        worst_marg = max(worst_marg, out.marginal_error())
        worst_drift = max(worst_drift, abs(out.cost() - mixed.cost()))
        units = out.mass / UNIT
        worst_unit = max(worst_unit, float(np.abs(units - np.round(units)).max()))
    ok = all_forest and worst_marg <= 1e-12 and worst_drift <= 1e-9 and worst_unit <= 1e-9
    record_acceptance(
        6, "forest canonicalization (200 optimal plans)", ok,
        f"marginal {worst_marg:.2e}, drift {worst_drift:.2e}, unit residue {worst_unit:.2e}",
    )
    assert all_forest
    assert worst_marg <= 1e-12
    assert worst_drift <= 1e-9
    assert worst_unit <= 1e-9


def test_07_cyclical_monotonicity():
    rng = np.random.default_rng(303)
    failures = 0
    for trial in range(500):
        mu, nu = granular_pair(GRID33, rng, granularity=UNIT, max_support=6)
        p = 1.0 if trial % 2 == 0 else 2.0
        _, plan = wasserstein(mu, nu, p)
        if not check_cyclical_monotonicity(plan, max_len=4).passed:
            failures += 1
    line = MatrixSpace([[0.0, 1.0], [1.0, 0.0]], label="unit-line")
    half = DiscreteMeasure(line, [0, 1], [0.5, 0.5])
    crossing = TransportPlan(
        source=half, target=half, p=2.0,
        src=np.array([0, 1]), dst=np.array([1, 0]), mass=np.array([0.5, 0.5]),
    )
    rep = check_cyclical_monotonicity(crossing)
    counterexample_ok = (not rep.passed) and rep.gap == pytest.approx(2.0)
    ok = failures == 0 and counterexample_ok
    record_acceptance(
        7, "cyclical monotonicity (500 instances + crossing gap 2)", ok,
        f"{failures} failures, crossing gap {rep.gap:.3f}",
    )
    assert failures == 0
    assert counterexample_ok


def test_08_entropy_estimates():
    start = time.perf_counter()
    sp2 = circle_space(2 ** 14)
    prof2 = separation_profile(
        sp2, multiplication_map(sp2, 2), range(1, 13), [1 / 8, 1 / 16, 1 / 32]
    )
    rel2 = abs(entropy_estimate(prof2).value - math.log(2)) / math.log(2)
    sp3 = circle_space(3 ** 9)
    prof3 = separation_profile(
        sp3, multiplication_map(sp3, 3), range(1, 13), [1 / 9, 1 / 27]
    )
    rel3 = abs(entropy_estimate(prof3).value - math.log(3)) / math.log(3)
    profi = separation_profile(sp2, identity_map(sp2), range(1, 7), [1 / 8, 1 / 16])
    ident = abs(entropy_estimate(profi).value)
    elapsed = time.perf_counter() - start
    ok = rel2 < 0.15 and rel3 < 0.15 and ident < 0.01 and elapsed < 120.0
    record_acceptance(
        8, "entropy: x2 -> log 2, x3 -> log 3, identity -> 0", ok,
        f"rel errors {rel2:.2e} / {rel3:.2e}, identity {ident:.2e}, {elapsed:.1f} s",
    )
    assert rel2 < 0.15
    assert rel3 < 0.15
    assert ident < 0.01
    assert elapsed < 120.0


def test_09_critical_parameter_trends():
    target_i = 1.0 / (2.0 * math.log(2.0))
    start = time.perf_counter()
    estimates = []
    for depth in (4, 6, 8):
        sp = hilbert_cube(grid_cube(1, 201), WeightSequence("geometric", depth, 0.5))
        prof = covering_profile(
            sp, [2 ** (-k / 2) for k in range(3, 10)], sample_size=20000, seed=0
        )
        estimates.append(mcrit_estimate(prof, "I_sigma", sigma=2.0).point_estimate)
    hc_elapsed = time.perf_counter() - start
    monotone = estimates == sorted(estimates) and estimates[-1] <= target_i
    rel_i = abs(estimates[-1] - target_i) / target_i

    start = time.perf_counter()
    sp = banach_cube(grid_cube(1, 5), WeightSequence("polynomial", 12, 2.0))
    prof = covering_profile(
        sp, [2 ** (-k / 2) for k in range(4, 13)], sample_size=20000, seed=0
    )
    est_p = mcrit_estimate(prof, "P").point_estimate
    bc_elapsed = time.perf_counter() - start
    rel_p = abs(est_p - 0.5) / 0.5

    ok = monotone and rel_i < 0.25 and rel_p < 0.30 and hc_elapsed < 300 and bc_elapsed < 300
    record_acceptance(
        9, "critical-parameter trends (weighted l2 and sup cubes)", ok,
        f"I_2 {', '.join(f'{v:.4f}' for v in estimates)} -> {target_i:.4f} "
        f"(rel {rel_i:.2f}); P {est_p:.4f} (rel {rel_p:.2f}); "
        f"{hc_elapsed:.0f} s + {bc_elapsed:.0f} s",
    )
    assert monotone
    assert rel_i < 0.25
    assert rel_p < 0.30
    assert hc_elapsed < 300
    assert bc_elapsed < 300


def test_10_occupancy_bounds():
    rng = np.random.default_rng(404)
    space = grid_cube(1, 100)
    eps = 0.08
    part = build_partition(space, eps)
    worst_h = 0.0
    for _ in range(200):
        A = FiniteSubset(space, rng.integers(0, 100, size=6))
        picks = [
            int(rng.choice(part.cells[cid]))
            for cid in np.flatnonzero(occupancy_map(A, part))
        ]
        B = FiniteSubset(space, np.array(picks))
        assert np.array_equal(occupancy_map(A, part), occupancy_map(B, part))
        worst_h = max(worst_h, hausdorff_distance(A, B))
    subset_ok = worst_h <= 2 * eps

    worst_slack = -math.inf
    measure_ok = True
    for _ in range(100):
        mu, nu = granular_pair(space, rng)
        bound, _ = occupancy_w2_bound(mu, nu, part)
        w2, _ = wasserstein(mu, nu, 2.0)
        worst_slack = max(worst_slack, w2 - bound)
        measure_ok &= w2 <= bound + 1e-9
    ok = subset_ok and measure_ok
    record_acceptance(
        10, "occupancy: fiber diameter and l1-to-W2 bounds", ok,
        f"max Hausdorff {worst_h:.4f} vs {2 * eps}, max W2 slack {worst_slack:.2e}",
    )
    assert subset_ok
    assert measure_ok


def test_11_cube_packings():
    families = {
        "dyadic": [2.0 ** -n for n in range(1, 11)],
        "polynomial": [float(n) ** -2 for n in range(1, 11)],
    }
    checked = 0
    for dim in (1, 2):
        for sides in families.values():
            plain = cube_packing(sides, dim)
            assert plain.interiors_disjoint()
            assert plain.inside_unit_cube()
            sep = cube_packing(sides, dim, separation=True)
            assert sep.interiors_disjoint()
            assert sep.inside_unit_cube()
            assert sep.min_gap() >= sep.max_diameter() - 1e-12
            checked += 1
    record_acceptance(
        11, "cube packings disjoint; separated mode gap >= diameter", True,
        f"{checked} side-family/dimension combinations",
    )
    assert checked == 4


def test_12_homothetic_embedding():
    weights = tuple(float(n) ** -2 for n in range(1, 5))
    emb = homothetic_hc_embedding(weights, 1, 200)
    rep = audit_homothetic_embedding(emb, sample_pairs=100, seed=5, rtol=0.02)
    spread = max(
        abs(rep.empirical_M - rep.theoretical_m), abs(rep.empirical_m - rep.theoretical_m)
    ) / rep.theoretical_m
    ok = rep.violations == [] and spread <= 0.02
    record_acceptance(
        12, "homothetic embedding: diagonal plans, W2 = K d_a within 2%", ok,
        f"100 pairs, max ratio spread {spread:.2e}, K {rep.extras['K']:.4f}",
    )
    assert rep.violations == []
    assert spread <= 0.02


def test_13_cli_determinism(tmp_path, capsys):
    inputs = tmp_path / "inputs"
    inputs.mkdir()
    mu_path = inputs / "mu.csv"
    nu_path = inputs / "nu.csv"
    mu_path.write_text("point_index,mass\n0,0.25\n5,0.75\n")
    nu_path.write_text("point_index,mass\n2,0.5\n8,0.5\n")
    battery = [
        ("cover", ["cover", "--spec", '{"kind":"grid","dim":1,"resolution":65}',
                   "--eps", "0.25,0.125,0.0625"]),
        ("crit", ["crit", "--spec", '{"kind":"grid","dim":1,"resolution":257}',
                  "--eps", "0.125,0.0625,0.03125,0.015625,0.0078125", "--family", "D"]),
        ("wass", ["wass", str(mu_path), str(nu_path),
                  "--spec", '{"kind":"grid","dim":1,"resolution":9}',
                  "--p", "2.0", "--forest", "--monotone"]),
        ("embed_gray", ["embed", "--kind", "gray", "--k", "4"]),
        ("embed_hc", ["embed", "--kind", "hc", "--weights", "polynomial",
                      "--parameter", "2.0", "--depth", "3", "--resolution", "60",
                      "--samples", "30"]),
        ("dyn", ["dyn", "--spec", '{"kind":"circle","resolution":4096}',
                 "--map", "x2", "--mode", "entropy", "--eps", "0.125,0.0625",
                 "--n-grid", "1,2,3,4,5,6"]),
        ("dyn_mmdim", ["dyn", "--spec", '{"kind":"circle","resolution":4096}',
                       "--map", "x2", "--mode", "mmdim", "--eps", "0.0625,0.015625",
                       "--n-grid", "8", "--beta", "0.4", "--p", "2.0"]),
        ("subsets", ["subsets", "--spec", '{"kind":"grid","dim":1,"resolution":100}',
                     "--mode", "partition", "--eps", "0.1"]),
        ("subsets_occ", ["subsets", "--spec", '{"kind":"grid","dim":1,"resolution":100}',
                         "--mode", "occupancy", "--eps", "0.1", "--a", "3,17,40,77"]),
    ]
    stdouts = {}
    for run in ("a", "b"):
        for name, argv in battery:
            out_dir = tmp_path / run / name
            code = cli_main(["--seed", "7", "--out", str(out_dir)] + argv)
            captured = capsys.readouterr()
            assert code == 0, captured.err
            stdouts[(run, name)] = captured.out.replace(str(out_dir), "OUT")
    files_a = sorted(p.relative_to(tmp_path / "a") for p in (tmp_path / "a").rglob("*") if p.is_file())
    files_b = sorted(p.relative_to(tmp_path / "b") for p in (tmp_path / "b").rglob("*") if p.is_file())
    assert files_a == files_b
    diffs = [
        str(rel)
        for rel in files_a
        if (tmp_path / "a" / rel).read_bytes() != (tmp_path / "b" / rel).read_bytes()
    ]
    stdout_same = all(stdouts[("a", n)] == stdouts[("b", n)] for n, _ in battery)
    ok = not diffs and stdout_same
    record_acceptance(
        13, "identical seeds give byte-identical outputs", ok,
        f"{len(files_a)} files compared" + (f"; differing: {diffs}" if diffs else ""),
    )
    assert not diffs
    assert stdout_same
