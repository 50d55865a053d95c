"""Command-line surface: gen / fit / sweep / compare.

Every run writes a manifest.json with all effective option values (defaults
materialized), so a run can be reproduced exactly from its manifest.
Validation failures exit nonzero before any output path is touched.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__
from .data import (
    ClassSpec,
    Dataset,
    default_material_specs,
    generate_synthetic,
    load_csv,
    save_dataset_csv,
    save_report,
    write_json,
)
from .evaluate import OutlierPolicy, evaluate
from .kmeans import DEFAULT_SEED, ClusteringConfig, fit
from .metrics import DistanceSpec, METRIC_KINDS, validate_spec
from .normalize import fit_transform
from .sweep import (
    DEFAULT_INSTANCE_SIZES,
    DEFAULT_P_GRID,
    DSD_OPERATING_P,
    SweepPlan,
    emit_figure_data,
    run_metric_comparison,
    run_p_sweep,
)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="matclust",
        description="K-means clustering toolkit with a parameterized distance layer",
    )
    parser.add_argument("--version", action="version", version=f"matclust {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a synthetic materials-style dataset")
    gen.add_argument("--classes", type=int, default=3)
    gen.add_argument("--dims", type=int, default=25)
    gen.add_argument("--count", type=int, default=5097)
    gen.add_argument("--seed", type=int, default=DEFAULT_SEED)
    gen.add_argument("-o", "--output", default="mat.csv", help="output CSV path")

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("-i", "--input", required=True, help="input dataset CSV")
        p.add_argument("-o", "--output-dir", default=".", help="directory for outputs")
        p.add_argument("--seed", type=int, default=DEFAULT_SEED)
        p.add_argument("--k", type=int, default=3)
        p.add_argument("--max-iter", type=int, default=100)
        p.add_argument("--tol", type=float, default=1e-9)
        p.add_argument(
            "--outlier-policy", choices=["none", "sigma", "quantile"], default="sigma"
        )
        p.add_argument("--outlier-c", type=float, default=3.0)
        p.add_argument("--outlier-q", type=float, default=0.99)
        p.add_argument("--no-normalize", action="store_true")

    fit_p = sub.add_parser("fit", help="fit one clustering and evaluate it")
    add_common(fit_p)
    fit_p.add_argument("--metric", choices=list(METRIC_KINDS), default="dsd")
    fit_p.add_argument("--p", type=float, default=None)

    sweep_p = sub.add_parser("sweep", help="run the p-grid x instance-size sweep")
    add_common(sweep_p)
    sweep_p.add_argument(
        "--p-values", type=float, nargs="+", default=list(DEFAULT_P_GRID)
    )
    sweep_p.add_argument(
        "--instances", type=int, nargs="+", default=list(DEFAULT_INSTANCE_SIZES)
    )
    sweep_p.add_argument("--jobs", type=int, default=os.cpu_count() or 1)

    cmp_p = sub.add_parser("compare", help="compare all six metric kinds")
    add_common(cmp_p)
    cmp_p.add_argument(
        "--instances", type=int, nargs="+", default=list(DEFAULT_INSTANCE_SIZES)
    )
    cmp_p.add_argument("--jobs", type=int, default=os.cpu_count() or 1)

    return parser


def _policy_from_args(args) -> OutlierPolicy:
    return OutlierPolicy(kind=args.outlier_policy, c=args.outlier_c, q=args.outlier_q).validate()


def _manifest(args, extra: dict) -> dict:
    doc = {"tool_version": __version__, "command": args.command}
    doc.update(
        {k: v for k, v in sorted(vars(args).items()) if k != "command"}
    )
    doc.update(extra)
    return doc


def _load_normalized(args) -> tuple[Dataset, object]:
    dataset = load_csv(args.input)
    if args.no_normalize:
        return dataset, None
    stats, normalized = fit_transform(dataset.points)
    return (
        Dataset(
            points=normalized,
            labels=dataset.labels,
            attribute_names=dataset.attribute_names,
            provenance=dataset.provenance,
        ),
        stats,
    )


def _cmd_gen(args) -> int:
    if args.count < 1:
        raise ValueError("--count must be >= 1")
    specs: list[ClassSpec] = default_material_specs(args.classes, args.dims, args.count)
    dataset = generate_synthetic(specs, args.seed)
    out = Path(args.output)
    save_dataset_csv(dataset, out)
    write_json(_manifest(args, {"rows_written": dataset.n_points}), f"{out}.manifest.json")
    print(f"wrote {dataset.n_points} rows x {dataset.dimension} attributes to {out}")
    return 0


def _cmd_fit(args) -> int:
    spec = DistanceSpec(args.metric, args.p)
    if spec.kind in ("minkowski", "dsd") and spec.p is None:
        spec = DistanceSpec(spec.kind, DSD_OPERATING_P if spec.kind == "dsd" else 2.0)
    validate_spec(spec)
    policy = _policy_from_args(args)
    dataset, stats = _load_normalized(args)

    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)

    config = ClusteringConfig(
        k=args.k, metric=spec, seed=args.seed, max_iter=args.max_iter, shift_tol=args.tol
    )
    model = fit(dataset.points, config)
    report = evaluate(dataset.points, model, policy)

    (out / "model.json").write_text(model.to_json() + "\n", encoding="utf-8")
    save_report(report, out / "report.csv", "csv")
    save_report(report, out / "report.json", "json")
    if stats is not None:
        (out / "stats.json").write_text(stats.to_json() + "\n", encoding="utf-8")
    write_json(
        _manifest(args, {"p_effective": spec.p, "converged": model.converged}),
        out / "manifest.json",
    )
    print(
        f"fit k={args.k} metric={spec.kind}"
        + (f" p={spec.p}" if spec.p is not None else "")
        + f" seed={args.seed}: accuracy {report.cluster_accuracy_pct:.4g}%"
        f" / outliers {report.outlier_pct:.4g}% ({model.iterations_run} iterations)"
    )
    return 0


def _run_sweep_like(args, mode: str) -> int:
    policy = _policy_from_args(args)
    dataset, stats = _load_normalized(args)

    plan = SweepPlan(
        p_values=tuple(getattr(args, "p_values", DEFAULT_P_GRID)),
        instance_sizes=tuple(args.instances),
        k=args.k,
        seed=args.seed,
        policy=policy,
        max_iter=args.max_iter,
        shift_tol=args.tol,
        jobs=args.jobs,
    )
    plan.validate(dataset.n_points)

    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)

    if mode == "sweep":
        result = run_p_sweep(plan, dataset.points)
    else:
        result = run_metric_comparison(plan, dataset.points)

    save_report(result, out / "sweep.csv", "csv")
    save_report(result, out / "sweep.json", "json")
    figures = emit_figure_data(result, out)
    if stats is not None:
        (out / "stats.json").write_text(stats.to_json() + "\n", encoding="utf-8")
    write_json(_manifest(args, {"rows": len(result.rows)}), out / "manifest.json")
    print(f"{mode}: {len(result.rows)} rows -> {out / 'sweep.csv'}; figures: {', '.join(figures)}")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "gen":
            return _cmd_gen(args)
        if args.command == "fit":
            return _cmd_fit(args)
        if args.command == "sweep":
            return _run_sweep_like(args, "sweep")
        if args.command == "compare":
            return _run_sweep_like(args, "compare")
        parser.error(f"unknown command {args.command!r}")
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
