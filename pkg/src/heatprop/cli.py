"""Command-line front end.

Subcommands:
    classify          label free nodes of a graph from seed labels
    blockmodel-check  closed-form temperatures and consistency verdicts
    bench             SBM or file-based experiment sweeps with CSV/JSON reports

Exit codes: 0 success, 2 usage error, 3 data error, 4 numerical error.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import bench as bench_mod
from .bench import (
    ExperimentSpec,
    FileSource,
    GlobalFraction,
    PerClassCounts,
    SbmParams,
    atomic_write_text,
    run_experiment,
    sample_seeds,
    write_report_csv,
    write_report_json,
)
from .blockmodel import BlockModelParams, closed_form, consistency_check, uncentered_failure_check
from .classifier import CENTERING_MODES, classify
from .dirichlet import ALL_NODES, FREE_NODES, GROUNDED, SolverConfig
from .errors import DataError, NumericalError
from .graph import LabeledNodes, build_graph, read_edge_list, read_labels

MODE_FLAGS = {"none": "none", "all": ALL_NODES, "free": FREE_NODES}


def _int_list(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="heatprop",
        description="Semi-supervised node classification by graph heat diffusion.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="classify free nodes of a graph")
    p.add_argument("--graph", required=True, help="edge-list file: src dst [weight]")
    p.add_argument("--labels", required=True,
                   help="label file: node label (1-based labels)")
    grp = p.add_mutually_exclusive_group()
    grp.add_argument("--seeds", help="seed file: node label; these become the boundary")
    grp.add_argument("--seed-fraction", type=float,
                     help="sample this fraction of labeled nodes as seeds")
    p.add_argument("--rng-seed", type=int, default=0, help="rng seed for --seed-fraction")
    p.add_argument("--centering", choices=sorted(MODE_FLAGS), default="all")
    p.add_argument("--method", choices=["fixed-point", "grounded-solve"],
                   default=GROUNDED)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--max-iter", type=int, default=100_000)
    p.add_argument("--output", required=True, help="output JSON path")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("blockmodel-check",
                       help="closed-form temperatures and consistency verdicts")
    p.add_argument("--sizes", type=_int_list, help="comma-separated block sizes")
    p.add_argument("--seeds", type=_int_list, help="comma-separated seed counts")
    p.add_argument("--p", type=float, help="intra-block weight")
    p.add_argument("--q", type=float, help="inter-block weight")
    p.add_argument("--grid", help="file of parameter sets: sizes seeds p q per line")
    p.set_defaults(func=cmd_blockmodel_check)

    p = sub.add_parser("bench", help="run classification experiments")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--sbm-sizes", type=_int_list,
                     help="SBM block sizes, comma-separated")
    src.add_argument("--graph", help="edge-list file (with --labels)")
    p.add_argument("--labels", help="ground-truth label file for --graph")
    p.add_argument("--sbm-p", type=float, default=1e-2)
    p.add_argument("--sbm-q", type=float, default=1e-3)
    seed_grp = p.add_mutually_exclusive_group(required=True)
    seed_grp.add_argument("--seeds-per-class", type=_int_list,
                          help="seed counts per class, comma-separated")
    seed_grp.add_argument("--seed-fraction", type=float,
                          help="global seed fraction with >=1 per class guard")
    p.add_argument("--sweep", help="sweep spec file: key=value lines "
                                   "(param=seed_ratio|size_ratio|seed_fraction, values=...)")
    p.add_argument("--modes", default="none,all",
                   help="comma-separated centering modes among none,all,free")
    p.add_argument("--reps", type=int, default=20)
    p.add_argument("--rng-seed", type=int, default=0)
    p.add_argument("--method", choices=["fixed-point", "grounded-solve"],
                   default=GROUNDED)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--max-iter", type=int, default=100_000)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out-csv")
    p.add_argument("--out-json")
    p.set_defaults(func=cmd_bench)
    return parser


def cmd_classify(args) -> int:
    edges, id_map = read_edge_list(args.graph)
    g = build_graph(edges)
    labels = read_labels(args.labels, id_map)
    num_classes = max(labels.values())
    if args.seeds:
        seed_labels = read_labels(args.seeds, id_map)
        seeds = LabeledNodes(labels=seed_labels, num_classes=max(seed_labels.values()))
    elif args.seed_fraction is not None:
        full = LabeledNodes(labels=labels, num_classes=num_classes)
        rng = np.random.default_rng(args.rng_seed)
        seeds = sample_seeds(full, GlobalFraction(args.seed_fraction), rng)
    else:
        # every labeled node is a seed
        seeds = LabeledNodes(labels=labels, num_classes=num_classes)
    cfg = SolverConfig(method=args.method, tolerance=args.tol,
                       max_iterations=args.max_iter)
    pred = classify(g, seeds, mode=MODE_FLAGS[args.centering], cfg=cfg)
    inverse = {v: k for k, v in id_map.items()}
    payload = {
        "predictions": {str(inverse[i]): lab for i, lab in sorted(pred.labels.items())},
        "id_map": {str(orig): compact for orig, compact in sorted(id_map.items())},
        "centering": MODE_FLAGS[args.centering],
        "score_summary": {
            "num_labels": int(pred.scores.scores.shape[1]),
            "min": float(pred.scores.scores.min()),
            "max": float(pred.scores.scores.max()),
            "column_means": [float(m) for m in pred.scores.scores.mean(axis=0)],
        },
        "diagnostics": {
            "residuals": [float(r) for r in pred.scores.residuals],
            "iterations": [int(i) for i in pred.scores.iterations],
        },
    }
    atomic_write_text(args.output, json.dumps(payload, indent=2, sort_keys=True) + "\n")
    print(f"wrote {len(pred.labels)} predictions to {args.output}")
    return 0


def _check_one_blockmodel(sizes, seed_counts, p, q) -> bool:
    """Print verdicts for one parameter set; returns True if degenerate."""
    params = BlockModelParams(sizes=tuple(sizes), seed_counts=tuple(seed_counts),
                              p=p, q=q)
    print(f"sizes={sizes} seeds={seed_counts} p={p} q={q}")
    if p == q:
        print("  WARNING: p = q, no block structure; verdicts are degenerate")
    for l in range(1, params.num_blocks + 1):
        sol = closed_form(params, l)
        temps = ", ".join(f"T_{k + 1}={t:.6f}"
                          for k, t in enumerate(sol.block_temperatures))
        print(f"  hot block {l}: {temps}, mean={sol.mean_temperature:.6f}")
    cons = consistency_check(params)
    if cons.consistent:
        print("  centered: consistent")
    elif cons.ties:
        print(f"  centered: tie witness {cons.witness}")
    else:
        print(f"  centered: INCONSISTENT, block {cons.witness[0]} "
              f"won by label {cons.witness[1]}")
    unc = uncentered_failure_check(params)
    if unc.correct:
        print("  uncentered: correct")
    else:
        print(f"  uncentered: FAILS, block {unc.confused_block} "
              f"confused with label {unc.hot_block}")
    return p == q


def cmd_blockmodel_check(args) -> int:
    if args.grid:
        with open(args.grid) as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                parts = line.split()
                if len(parts) != 4:
                    raise DataError(f"{args.grid}:{lineno}: expected `sizes seeds p q`")
                _check_one_blockmodel(_int_list(parts[0]), _int_list(parts[1]),
                                      float(parts[2]), float(parts[3]))
        return 0
    if not (args.sizes and args.seeds and args.p is not None and args.q is not None):
        raise DataError("--sizes, --seeds, --p, --q are required without --grid")
    _check_one_blockmodel(args.sizes, args.seeds, args.p, args.q)
    return 0


def _parse_sweep_file(path) -> dict[str, str]:
    spec = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise DataError(f"{path}:{lineno}: expected key=value")
            key, value = line.split("=", 1)
            spec[key.strip()] = value.strip()
    return spec


def _sweep_values(text: str) -> list[float]:
    if ":" in text:
        lo, hi = text.split(":", 1)
        return [float(v) for v in range(int(lo), int(hi) + 1)]
    return [float(v) for v in text.split(",") if v]


def _sweep_points(args, source, seed_rule):
    """Yield (point name, source, seed rule) per sweep value."""
    if not args.sweep:
        yield "base", source, seed_rule
        return
    spec = _parse_sweep_file(args.sweep)
    param = spec.get("param")
    if param is None or "values" not in spec:
        raise DataError(f"{args.sweep}: needs `param=` and `values=` entries")
    values = _sweep_values(spec["values"])
    for v in values:
        if param == "seed_ratio":
            if not isinstance(seed_rule, PerClassCounts):
                raise DataError("seed_ratio sweep needs --seeds-per-class")
            counts = list(seed_rule.counts)
            counts[0] = int(round(v * seed_rule.counts[0]))
            yield f"seed_ratio={v:g}", source, PerClassCounts(tuple(counts))
        elif param == "size_ratio":
            if not isinstance(source, SbmParams):
                raise DataError("size_ratio sweep needs --sbm-sizes")
            total = sum(source.sizes)
            k = len(source.sizes)
            m = int(round(total / (v + k - 1)))
            sizes = (total - (k - 1) * m,) + (m,) * (k - 1)
            yield (f"size_ratio={v:g}",
                   SbmParams(sizes=sizes, p=source.p, q=source.q, seed=source.seed),
                   seed_rule)
        elif param == "seed_fraction":
            yield f"seed_fraction={v:g}", source, GlobalFraction(v)
        else:
            raise DataError(f"unknown sweep param {param!r}")


def cmd_bench(args) -> int:
    if args.sbm_sizes:
        source = SbmParams(sizes=tuple(args.sbm_sizes), p=args.sbm_p, q=args.sbm_q)
    else:
        if not args.labels:
            raise DataError("--graph requires --labels")
        edges, id_map = read_edge_list(args.graph)
        g = build_graph(edges)
        labels = read_labels(args.labels, id_map)
        source = FileSource(
            graph=g,
            labels=LabeledNodes(labels=labels, num_classes=max(labels.values())),
        )
    if args.seeds_per_class:
        seed_rule = PerClassCounts(tuple(args.seeds_per_class))
    else:
        seed_rule = GlobalFraction(args.seed_fraction)
    modes = tuple(MODE_FLAGS[m.strip()] if m.strip() in MODE_FLAGS else m.strip()
                  for m in args.modes.split(","))
    cfg = SolverConfig(method=args.method, tolerance=args.tol,
                       max_iterations=args.max_iter)
    points = []
    for name, src, rule in _sweep_points(args, source, seed_rule):
        spec = ExperimentSpec(source=src, seed_rule=rule, modes=modes,
                              repetitions=args.reps, master_seed=args.rng_seed,
                              solver=cfg)
        report = run_experiment(spec, workers=args.workers)
        points.append((name, report))
        line = "  ".join(
            f"{mode}: {st.macro_mean:.4f}±{st.macro_std:.4f}"
            for mode, st in report.stats.items()
        )
        print(f"{name}: {line}")
    if args.out_csv:
        write_report_csv(args.out_csv, points)
        print(f"wrote {args.out_csv}")
    if args.out_json:
        write_report_json(args.out_json, points)
        print(f"wrote {args.out_json}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 4
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
