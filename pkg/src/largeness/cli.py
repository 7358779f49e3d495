"""Batch experiment driver.

Subcommands build a space (or other object) from flags / a JSON config,
run one experiment, and leave delimited outputs plus rendered figures in
the output directory.  stdout carries a single machine-readable JSON
object; diagnostics go to stderr.  Identical config and seed give
byte-identical files.

Exit codes: 0 ok, 2 metric-axiom violation, 3 insufficient profile data,
4 measure mass mismatch, 5 embedding bound violation, 1 other errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys

import numpy as np

from . import covering, dynamics, embeddings, plotting, scales, subsets, transport
from .errors import (
    AxiomViolation,
    DegenerateProfile,
    InsufficientData,
    LargenessError,
    MassMismatch,
)
from .measures import DiscreteMeasure
from .spaces import (
    BanachCubeSpace,
    HilbertCubeSpace,
    parse_space_spec,
    validate_metric,
)

EXIT_AXIOM = 2
EXIT_DATA = 3
EXIT_MASS = 4
EXIT_EMBED = 5


def _atomic_write(path: str, data: bytes) -> str:
    tmp = f"{path}.tmp-{os.getpid()}"
    with open(tmp, "wb") as fh:
        fh.write(data)
    os.replace(tmp, path)
    return path


def _write_csv(path: str, header: list[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(v) if isinstance(v, float) else v for v in row])
    return _atomic_write(path, buf.getvalue().encode())


def _write_json(path: str, obj) -> str:
    data = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    return _atomic_write(path, data.encode())


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, sort_keys=True) + "\n")


def _parse_floats(text: str) -> list[float]:
    return [float(tok) for tok in text.replace(";", ",").split(",") if tok.strip()]


def _parse_ints(text: str) -> list[int]:
    return [int(tok) for tok in text.replace(";", ",").split(",") if tok.strip()]


def _load_config(path: str | None) -> dict:
    if not path:
        return {}
    with open(path, "r", encoding="utf-8") as fh:
        obj = json.load(fh)
    if not isinstance(obj, dict):
        raise ValueError("config file must hold a JSON object")
    return obj


def _pick(args, config: dict, name: str, default=None):
    """Flag value if given, else config value, else default (flags win)."""
    val = getattr(args, name, None)
    if val is not None:
        return val
    if name in config:
        return config[name]
    return default


def _space_from(args, config: dict):
    raw = _pick(args, config, "spec")
    if raw is None:
        raise ValueError("a space spec is required (--spec or config 'spec')")
    if isinstance(raw, str):
        raw = json.loads(raw)
    base_dir = os.path.dirname(args.config) if args.config else "."
    return parse_space_spec(raw, base_dir=base_dir or ".", product_budget=args.point_budget)


def _load_measure(path: str, space) -> DiscreteMeasure:
    rows = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        for rec in csv.reader(fh):
            if not rec or rec[0].strip().startswith("#"):
                continue
            try:
                idx = int(rec[0])
            except ValueError:
                continue  # header line
            rows.append((idx, float(rec[1])))
    if not rows:
        raise ValueError(f"{path}: no usable rows")
    support = np.array([r[0] for r in rows], dtype=np.int64)
    masses = np.array([r[1] for r in rows], dtype=float)
    return DiscreteMeasure(space, support, masses)


def _load_indices(text: str) -> list[int]:
    if os.path.exists(text):
        out = []
        with open(text, "r", encoding="utf-8", newline="") as fh:
            for rec in csv.reader(fh):
                for tok in rec:
                    tok = tok.strip()
                    if tok and not tok.startswith("#"):
                        try:
                            out.append(int(tok))
                        except ValueError:
                            pass  # header token
        return out
    return _parse_ints(text)


# ---------------------------------------------------------------- subcommands


def cmd_space(args, config) -> int:
    space = _space_from(args, config)
    report = validate_metric(space, seed=args.seed)
    out = {
        "label": space.label,
        "point_count": int(space.point_count),
        "diameter": float(space.diameter()),
        "validation": {
            "exhaustive": report.exhaustive,
            "triples_checked": int(report.triples_checked),
        },
    }
    if isinstance(space, (HilbertCubeSpace, BanachCubeSpace)):
        out["truncation_error"] = float(space.truncation_error())
    _emit(out)
    return 0


def cmd_cover(args, config) -> int:
    space = _space_from(args, config)
    eps = _parse_floats(_pick(args, config, "eps", ""))
    sample = int(_pick(args, config, "sample", covering.DEFAULT_SAMPLE_SIZE))
    profile = covering.covering_profile(
        space, eps, sample_size=sample, seed=args.seed, threads=args.threads
    )
    sandwich = None
    try:
        rep = covering.sandwich_check(profile)
        sandwich = {"passed": rep.passed, "pairs": len(rep.pairs)}
    except LargenessError:
        pass
    csv_path = os.path.join(args.out, "cover_profile.csv")
    _write_csv(
        csv_path,
        ["epsilon", "cover_upper", "packing_lower", "sample_size"],
        [
            (e.epsilon, int(e.cover_upper), int(e.packing_lower), int(e.sample_size))
            for e in profile.entries
        ],
    )
    fig_path = os.path.join(args.out, "cover_profile.png")
    plotting.save_figure(plotting.profile_figure(profile), fig_path)
    _emit(
        {
            "space": space.label,
            "entries": len(profile.entries),
            "sandwich": sandwich,
            "csv": csv_path,
            "figure": fig_path,
        }
    )
    return 0


def cmd_crit(args, config) -> int:
    space = _space_from(args, config)
    eps = _parse_floats(_pick(args, config, "eps", ""))
    family = _pick(args, config, "family", "D")
    sigma = _pick(args, config, "sigma")
    sample = int(_pick(args, config, "sample", covering.DEFAULT_SAMPLE_SIZE))
    profile = covering.covering_profile(
        space, eps, sample_size=sample, seed=args.seed, threads=args.threads
    )
    estimate = scales.mcrit_estimate(
        profile, family, sigma=None if sigma is None else float(sigma)
    )
    csv_path = os.path.join(args.out, "crit_profile.csv")
    _write_csv(
        csv_path,
        ["epsilon", "s_of_epsilon", "family", "sigma"],
        [
            (e, s, family, "" if sigma is None else float(sigma))
            for e, s in estimate.per_eps
        ],
    )
    json_path = os.path.join(args.out, "crit_estimate.json")
    _write_json(json_path, estimate.summary())
    fig_path = os.path.join(args.out, "crit_fit.png")
    plotting.save_figure(plotting.crit_figure(estimate), fig_path)
    out = estimate.summary()
    out.update({"csv": csv_path, "json": json_path, "figure": fig_path})
    _emit(out)
    return 0


def cmd_wass(args, config) -> int:
    space = _space_from(args, config)
    mu = _load_measure(args.mu, space)
    nu = _load_measure(args.nu, space)
    p = float(_pick(args, config, "p", 1.0))
    distance, plan = transport.wasserstein(mu, nu, p=p)
    paths: dict = {}
    plan_csv = os.path.join(args.out, "plan.csv")
    _write_csv(
        plan_csv,
        ["source_index", "target_index", "mass"],
        [(int(s), int(t), float(m)) for s, t, m in zip(plan.src, plan.dst, plan.mass)],
    )
    paths["plan_csv"] = plan_csv
    fig_path = os.path.join(args.out, "plan.png")
    plotting.save_figure(plotting.plan_figure(plan), fig_path)
    paths["figure"] = fig_path
    monotone = None
    if args.forest:
        forest = transport.canonicalize_to_forest(plan)
        forest_csv = os.path.join(args.out, "forest_plan.csv")
        _write_csv(
            forest_csv,
            ["source_index", "target_index", "mass"],
            [
                (int(s), int(t), float(m))
                for s, t, m in zip(forest.src, forest.dst, forest.mass)
            ],
        )
        paths["forest_csv"] = forest_csv
    if args.monotone:
        rep = transport.check_cyclical_monotonicity(plan)
        monotone = {
            "passed": rep.passed,
            "gap": float(rep.gap),
            "tuples_checked": int(rep.tuples_checked),
        }
        paths["monotone_json"] = _write_json(
            os.path.join(args.out, "monotone.json"), monotone
        )
    _emit(
        {
            "distance": float(distance),
            "p": p,
            "edges": int(plan.src.size),
            "monotone": monotone,
            **paths,
        }
    )
    return 0


def cmd_embed(args, config) -> int:
    kind = args.kind
    seed = args.seed
    samples = int(_pick(args, config, "samples", 100))
    placement = None
    if kind == "power":
        space = _space_from(args, config)
        report = embeddings.audit_power_embedding(
            space,
            k=int(_pick(args, config, "k", 2)),
            p=float(_pick(args, config, "p", 1.0)),
            sample_pairs=samples,
            seed=seed,
            exhaustive=bool(args.exhaustive),
        )
    elif kind == "gray":
        report = embeddings.audit_gray_code(
            int(_pick(args, config, "k", 3)), solver_pairs=min(samples, 50), seed=seed
        )
    elif kind == "ultrametric":
        report = embeddings.audit_ultrametric_embedding(
            k=int(_pick(args, config, "k", 2)),
            depth=int(_pick(args, config, "depth", 8)),
            p=float(_pick(args, config, "p", 1.0)),
            sample_pairs=samples,
            seed=seed,
        )
    elif kind == "geometric":
        space = _space_from(args, config)
        report = embeddings.audit_geometric_embedding(
            space,
            beta=float(_pick(args, config, "beta", 1.0 / 3.0)),
            eps=float(_pick(args, config, "eps_param", 0.9)),
            depth=int(_pick(args, config, "depth", 6)),
            sample_pairs=samples,
            seed=seed,
        )
    elif kind == "hc":
        weights = _weight_values(args, config)
        emb = embeddings.homothetic_hc_embedding(
            weights,
            dim=int(_pick(args, config, "dim", 1)),
            resolution=int(_pick(args, config, "resolution", 200)),
        )
        report = embeddings.audit_homothetic_embedding(
            emb, sample_pairs=samples, seed=seed
        )
        placement = emb.placement
    elif kind == "subset":
        emb = embeddings.closed_subset_embedding(
            dim=int(_pick(args, config, "dim", 1)),
            d_prime=float(_pick(args, config, "d_prime", 2.0)),
            depth=int(_pick(args, config, "depth", 4)),
            resolution=int(_pick(args, config, "resolution", 50)),
        )
        report = embeddings.audit_subset_embedding(emb, sample_pairs=samples, seed=seed)
        placement = emb.placement
    else:  # pragma: no cover - argparse restricts choices
        raise ValueError(f"unknown embed kind {kind!r}")

    json_path = os.path.join(args.out, f"embed_{kind}.json")
    _write_json(json_path, report.to_json())
    out = report.to_json()
    out.update({"kind": kind, "json": json_path})
    if placement is not None:
        csv_path = os.path.join(args.out, f"embed_{kind}_placement.csv")
        d = placement.dim
        _write_csv(
            csv_path,
            [f"offset_{i}" for i in range(d)] + ["ratio"],
            [
                tuple(float(x) for x in placement.offsets[i]) + (float(s),)
                for i, s in enumerate(placement.sides)
            ],
        )
        out["placement_csv"] = csv_path
    _emit(out)
    return 0 if report.passed else EXIT_EMBED


def _weight_values(args, config) -> np.ndarray:
    kind = _pick(args, config, "weights", "polynomial")
    depth = int(_pick(args, config, "depth", 4))
    param = float(_pick(args, config, "parameter", 2.0))
    n = np.arange(1, depth + 1, dtype=float)
    if kind == "polynomial":
        return n**-param
    if kind == "geometric":
        return param**n
    raise ValueError(f"unknown weight kind {kind!r}")


def cmd_dyn(args, config) -> int:
    space = _space_from(args, config)
    map_name = _pick(args, config, "map", "x2")
    if map_name == "identity":
        dmap = dynamics.identity_map(space)
    elif map_name.startswith("x"):
        dmap = dynamics.multiplication_map(space, int(map_name[1:]))
    else:
        raise ValueError(f"unknown map {map_name!r} (use identity or xN)")
    eps = _parse_floats(_pick(args, config, "eps", ""))
    n_grid = _parse_ints(_pick(args, config, "n_grid", "1,2,3,4,5,6"))
    mode = _pick(args, config, "mode", "entropy")
    csv_path = os.path.join(args.out, "dyn_table.csv")
    fig_path = os.path.join(args.out, "dyn_table.png")
    if mode == "entropy":
        profile = dynamics.separation_profile(
            space, dmap, n_grid, eps, threads=args.threads
        )
        estimate = dynamics.entropy_estimate(profile)
        # log_ratio column: growth against the previous n at the same eps.
        rows = []
        prev: dict = {}
        for n, e, count in profile.rows:
            ratio = ""
            if e in prev and prev[e][1] > 0:
                dn = n - prev[e][0]
                if dn > 0:
                    ratio = math.log(count / prev[e][1]) / dn
            prev[e] = (n, count)
            rows.append((int(n), float(e), int(count), ratio))
        _write_csv(csv_path, ["n", "epsilon", "count", "log_ratio"], rows)
        plotting.save_figure(plotting.dynamics_figure(profile), fig_path)
        value = estimate.value
        _emit(
            {
                "mode": mode,
                "map": dmap.label,
                "entropy_estimate": None if math.isnan(value) else float(value),
                "warnings": estimate.warnings,
                "csv": csv_path,
                "figure": fig_path,
            }
        )
        return 0
    if mode == "mmdim":
        p = float(_pick(args, config, "p", 2.0))
        beta = float(_pick(args, config, "beta", 0.9))
        table = dynamics.mmdim_experiment(
            space, dmap, p=p, eps_grid=eps, n_grid=n_grid, beta=beta
        )
        _write_csv(
            csv_path,
            ["n", "epsilon", "count", "log_ratio"],
            [(int(n), float(e), int(c), float(r)) for n, e, _k, _eta, c, r in table.rows],
        )
        plotting.save_figure(plotting.mmdim_figure(table), fig_path)
        best = max((r for *_x, r in table.rows), default=float("nan"))
        _emit(
            {
                "mode": mode,
                "map": dmap.label,
                "p": p,
                "beta": beta,
                "two_beta": 2.0 * beta,
                "max_ratio": float(best),
                "warnings": table.warnings,
                "csv": csv_path,
                "figure": fig_path,
            }
        )
        return 0
    raise ValueError(f"unknown dyn mode {mode!r}")


def cmd_subsets(args, config) -> int:
    space = _space_from(args, config)
    mode = _pick(args, config, "mode", "hausdorff")
    if mode == "hausdorff":
        A = subsets.FiniteSubset(space, _load_indices(args.a))
        B = subsets.FiniteSubset(space, _load_indices(args.b))
        _emit({"mode": mode, "distance": float(subsets.hausdorff_distance(A, B))})
        return 0
    eps = float(_pick(args, config, "eps", 0.125))
    partition = subsets.build_partition(space, eps)
    if mode == "partition":
        csv_path = os.path.join(args.out, "partition.csv")
        _write_csv(
            csv_path,
            ["point_index", "block_id"],
            [(i, int(b)) for i, b in enumerate(partition.cell_of)],
        )
        _emit(
            {
                "mode": mode,
                "blocks": int(partition.cell_count),
                "epsilon": eps,
                "fiber_bound": float(partition.fiber_bound()),
                "max_diameter": float(max(partition.diameters)),
                "csv": csv_path,
            }
        )
        return 0
    if mode == "occupancy":
        A = subsets.FiniteSubset(space, _load_indices(args.a))
        bits = subsets.occupancy_map(A, partition)
        csv_path = os.path.join(args.out, "occupancy.csv")
        _write_csv(
            csv_path, ["block_id"], [(int(b),) for b in np.flatnonzero(bits)]
        )
        _emit(
            {
                "mode": mode,
                "blocks": int(partition.cell_count),
                "occupied": int(bits.sum()),
                "csv": csv_path,
            }
        )
        return 0
    if mode == "wcover":
        report = subsets.wasserstein_covering_bound(
            space,
            eps,
            d_prime=float(_pick(args, config, "d_prime", 1.0)),
            eta=float(_pick(args, config, "eta", 1.0)),
            candidates=int(_pick(args, config, "candidates", 150)),
            max_support=int(_pick(args, config, "max_support", 5)),
            p=float(_pick(args, config, "p", 2.0)),
            seed=args.seed,
        )
        _emit(
            {
                "mode": mode,
                "epsilon": eps,
                "log_bound": float(report.log_bound),
                "observed_packing": int(report.observed_packing),
                "within_bound": report.within_bound(),
            }
        )
        return 0
    raise ValueError(f"unknown subsets mode {mode!r}")


# ---------------------------------------------------------------- entry point


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="largeness",
        description="Desk-scale experiments on metric spaces, measures and transports.",
    )
    ap.add_argument("--seed", type=int, required=True, help="RNG seed (mandatory)")
    ap.add_argument("--out", default=".", help="output directory")
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--point-budget", type=int, default=None, dest="point_budget")
    ap.add_argument("--config", default=None, help="JSON config file; flags win")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("space", help="build and validate a space")
    sp.add_argument("--spec", default=None, help="JSON space spec")
    sp.set_defaults(fn=cmd_space)

    cv = sub.add_parser("cover", help="covering/packing profile")
    cv.add_argument("--spec", default=None)
    cv.add_argument("--eps", default=None, help="comma-separated epsilons")
    cv.add_argument("--sample", type=int, default=None)
    cv.set_defaults(fn=cmd_cover)

    cr = sub.add_parser("crit", help="critical-parameter estimate")
    cr.add_argument("--spec", default=None)
    cr.add_argument("--eps", default=None)
    cr.add_argument("--family", default=None, choices=sorted(scales.FAMILIES))
    cr.add_argument("--sigma", type=float, default=None)
    cr.add_argument("--sample", type=int, default=None)
    cr.set_defaults(fn=cmd_crit)

    wa = sub.add_parser("wass", help="Wasserstein distance between measure files")
    wa.add_argument("mu", help="CSV point_index,mass")
    wa.add_argument("nu", help="CSV point_index,mass")
    wa.add_argument("--spec", default=None)
    wa.add_argument("--p", type=float, default=None)
    wa.add_argument("--forest", action="store_true")
    wa.add_argument("--monotone", action="store_true")
    wa.set_defaults(fn=cmd_wass)

    em = sub.add_parser("embed", help="embedding audits")
    em.add_argument(
        "--kind",
        required=True,
        choices=["power", "gray", "ultrametric", "geometric", "hc", "subset"],
    )
    em.add_argument("--spec", default=None)
    em.add_argument("--k", type=int, default=None)
    em.add_argument("--p", type=float, default=None)
    em.add_argument("--beta", type=float, default=None)
    em.add_argument("--eps-param", type=float, default=None, dest="eps_param")
    em.add_argument("--depth", type=int, default=None)
    em.add_argument("--dim", type=int, default=None)
    em.add_argument("--resolution", type=int, default=None)
    em.add_argument("--d-prime", type=float, default=None, dest="d_prime")
    em.add_argument("--weights", default=None, choices=["polynomial", "geometric"])
    em.add_argument("--parameter", type=float, default=None)
    em.add_argument("--samples", type=int, default=None)
    em.add_argument("--exhaustive", action="store_true")
    em.set_defaults(fn=cmd_embed)

    dy = sub.add_parser("dyn", help="entropy / metric-mean-dimension tables")
    dy.add_argument("--spec", default=None)
    dy.add_argument("--map", default=None, help="identity or xN")
    dy.add_argument("--mode", default=None, choices=["entropy", "mmdim"])
    dy.add_argument("--eps", default=None)
    dy.add_argument("--n-grid", default=None, dest="n_grid")
    dy.add_argument("--p", type=float, default=None)
    dy.add_argument("--beta", type=float, default=None)
    dy.set_defaults(fn=cmd_dyn)

    su = sub.add_parser("subsets", help="Hausdorff/occupancy experiments")
    su.add_argument("--spec", default=None)
    su.add_argument(
        "--mode", default=None, choices=["hausdorff", "partition", "occupancy", "wcover"]
    )
    su.add_argument("--a", default=None, help="subset: indices or CSV path")
    su.add_argument("--b", default=None)
    su.add_argument("--eps", type=float, default=None)
    su.add_argument("--d-prime", type=float, default=None, dest="d_prime")
    su.add_argument("--eta", type=float, default=None)
    su.add_argument("--candidates", type=int, default=None)
    su.add_argument("--max-support", type=int, default=None, dest="max_support")
    su.add_argument("--p", type=float, default=None)
    su.set_defaults(fn=cmd_subsets)
    return ap


def main(argv=None) -> int:
    ap = _build_parser()
    args = ap.parse_args(argv)
    try:
        config = _load_config(args.config)
        if args.seed < 0:
            raise ValueError("seed must be a non-negative integer")
        os.makedirs(args.out, exist_ok=True)
        return args.fn(args, config)
    except AxiomViolation as exc:
        print(f"axiom violation ({exc.kind}) witness {exc.witness}: {exc}", file=sys.stderr)
        return EXIT_AXIOM
    except (InsufficientData, DegenerateProfile) as exc:
        print(f"insufficient data: {exc}", file=sys.stderr)
        return EXIT_DATA
    except MassMismatch as exc:
        print(f"mass mismatch: {exc}", file=sys.stderr)
        return EXIT_MASS
    except (LargenessError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
