"""``dimcheck`` command line: dim, synth, verify, bench, report."""
from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import __version__
from . import intrinsic_dim as idim
from .dataset import DataError, SyntheticSpec, generate, load_csv, save_csv
from .learners import TrainingError
from .rig import (ExperimentPlan, RigError, aggregate, read_records, run_experiment,
                  standard_learners, write_records)
from .stats import (COHEN_D, DIRECTION, METRICS, StatsError, cohens_threshold, mark_winners,
                    render_text, write_table_csv, write_winners_csv)

log = logging.getLogger("dimcheck")

TABLE_NAMES = {"recall": "recall", "false_alarm": "pf", "auc": "auc"}
DEFAULT_LEARNERS = "tree,forest,svm,dnn,dnn_weighted"


class CliError(Exception):
    pass


def _write_json(path: Path, obj) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _manifest(out: Path, args, extra: dict | None = None) -> None:
    flags = {k: v for k, v in sorted(vars(args).items()) if k != "func"}
    _write_json(out / "manifest.json",
                {"tool": "dimcheck", "version": __version__, "command": args.command,
                 "flags": flags, **(extra or {})})


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _load(path, args):
    return load_csv(path, label_column=args.label_col, positive_label=args.positive_label)


def cmd_dim(args) -> int:
    out = Path(args.out)
    results = []
    for path in args.csv:
        data = _load(path, args)
        est = idim.estimate_dimension(data, norm=args.norm, smoothing_window=args.window,
                                      steps=args.steps, min_pairs=args.min_pairs,
                                      normalize=args.normalize)
        idim.export_curve(est, out / "curves" / f"{data.name}.csv")
        summary = est.summary(data.name)
        results.append(summary)
        print(f"{data.name}\t{est.value:.4f}")
    _write_json(out / "estimates.json", results if len(results) > 1 else results[0])
    _manifest(out, args)
    return 0


def cmd_synth(args) -> int:
    data = generate(SyntheticSpec(args.kind, args.dim, args.samples, args.seed))
    save_csv(data, args.output)
    print(f"wrote {data.n_rows} x {data.n_features} {args.kind} to {args.output}")
    return 0


def cmd_verify(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rows, summary = [], []
    for d in args.dims:
        values = []
        for k in range(args.seeds):
            seed = args.seed + k
            data = generate(SyntheticSpec("uniform_cube", d, args.samples, seed))
            est = idim.estimate_dimension(data, norm=args.norm, smoothing_window=args.window,
                                          steps=args.steps, min_pairs=args.min_pairs)
            values.append(est.value)
            rows.append([d, seed, repr(est.value)])
        mean = float(np.mean(values))
        summary.append([d, len(values), repr(mean), repr(float(np.min(values))),
                        repr(float(np.max(values))), repr(mean / d)])
        print(f"d={d:<4d} mean estimate {mean:.3f}  (ratio {mean / d:.3f})")
    with (out / "verify.csv").open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["d", "seed", "estimate"])
        w.writerows(rows)
    with (out / "verify_summary.csv").open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["d", "seeds", "mean_estimate", "min_estimate", "max_estimate", "ratio"])
        w.writerows(summary)
    _manifest(out, args)
    return 0


def _thresholds(tables, records, args) -> dict[str, float]:
    th = {}
    for metric in METRICS:
        if args.threshold is not None:
            th[metric] = args.threshold
            continue
        if args.d_source == "raw":
            pool = [getattr(r.metrics, metric) for r in records]
        else:
            pool = tables[metric].values()
        pool = [v for v in pool if v is not None]
        th[metric] = cohens_threshold(pool, args.d_fraction) if len(pool) >= 2 else 0.0
    return th


def _write_tables(out: Path, agg, records, args) -> str:
    th = _thresholds(agg.tables, records, args)
    text = []
    for metric in METRICS:
        table = agg.tables[metric]
        marking = mark_winners(table, th[metric], DIRECTION[metric])
        stem = f"metric_{TABLE_NAMES[metric]}"
        write_table_csv(table, out / "tables" / f"{stem}.csv")
        write_winners_csv(table, marking, out / "tables" / f"{stem}_winners.csv")
        text.append(render_text(table, marking))
    with (out / "tables" / "learner_summary.csv").open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["learner", "metric", "median", "iqr"])
        for (learner, metric), val in sorted(agg.summary.items()):
            w.writerow([learner, metric, *(("", "") if val is None else (repr(val[0]), repr(val[1])))])
    report = "\n".join(text)
    (out / "tables" / "report.txt").write_text(report, encoding="utf-8")
    return report


def cmd_bench(args) -> int:
    if len(args.csv) % 2:
        raise CliError("bench expects TRAIN TEST pairs")
    pairs = []
    for tr_path, te_path in zip(args.csv[::2], args.csv[1::2]):
        tr, te = _load(tr_path, args), _load(te_path, args)
        name = tr.name[:-6] if tr.name.endswith("_train") else tr.name
        pairs.append((tr.take(np.arange(tr.n_rows), name), te.take(np.arange(te.n_rows), name)))
    names = [t.strip() for t in args.learners.split(",") if t.strip()]
    plan = ExperimentPlan(pairs, standard_learners(names), args.repeats, args.bins, args.seed)
    failures = []
    records = run_experiment(plan, failures)
    out = Path(args.out)
    write_records(records, out / "records.jsonl")
    # wall times vary run to run, so they live outside records.jsonl
    write_records(records, out / "timings.jsonl", with_time=True)
    if failures:
        _write_json(out / "failures.json", [f.__dict__ for f in failures])
    if not records:
        raise CliError("every learner failed; no records produced")
    report = _write_tables(out, aggregate(records), records, args)
    _manifest(out, args, {"records": len(records), "failures": len(failures)})
    print(report, end="")
    return 0


def cmd_report(args) -> int:
    path = Path(args.records)
    if not path.is_file():
        raise CliError(f"no such records file: {path}")
    records = read_records(path)
    if not records:
        raise CliError(f"{path}: no records")
    out = Path(args.out)
    report = _write_tables(out, aggregate(records), records, args)
    _manifest(out, args, {"records": len(records)})
    print(report, end="")
    return 0


def _add_data_flags(p):
    p.add_argument("--label-col", default="label", help="label column name or index (default: label)")
    p.add_argument("--positive-label", default="1", help="label value treated as class 1 (default: 1)")


def _add_estimator_flags(p):
    p.add_argument("--norm", default="L1", type=str.upper, choices=["L1", "L2"])
    p.add_argument("--steps", type=int, default=idim.DEFAULT_STEPS)
    p.add_argument("--window", type=int, default=idim.DEFAULT_WINDOW, help="odd smoothing window")
    p.add_argument("--min-pairs", type=int, default=idim.DEFAULT_MIN_PAIRS,
                   help="drop radii with fewer pairs than this (1 keeps every C(r) > 0)")


def _add_winner_flags(p):
    p.add_argument("--d-fraction", type=float, default=COHEN_D,
                   help="effect-size multiplier on the pooled standard deviation (default 0.35)")
    p.add_argument("--d-source", choices=["medians", "raw"], default="medians",
                   help="pool table medians or raw per-bin values for the standard deviation")
    p.add_argument("--threshold", type=float, default=None, help="absolute threshold for every metric")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dimcheck", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dim", help="estimate intrinsic dimensionality of CSV datasets")
    p.add_argument("csv", nargs="+")
    _add_data_flags(p)
    _add_estimator_flags(p)
    p.add_argument("--normalize", action="store_true", help="min-max scale features first")
    p.add_argument("--out", default="dim_out")
    p.set_defaults(func=cmd_dim)

    p = sub.add_parser("synth", help="write a synthetic dataset as CSV")
    p.add_argument("output")
    p.add_argument("--kind", choices=["uniform_cube", "embedded_line"], default="uniform_cube")
    p.add_argument("--dim", type=int, default=5)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("verify", help="estimate uniform cubes of known dimension")
    p.add_argument("--dims", type=_int_list, default=[5, 10, 20, 40])
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seeds", type=int, default=10, help="number of seeds per dimension")
    p.add_argument("--seed", type=int, default=0, help="first seed")
    _add_estimator_flags(p)
    p.add_argument("--out", default="verify_out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="run the repeated learner comparison on TRAIN TEST pairs")
    p.add_argument("csv", nargs="+", metavar="TRAIN TEST")
    _add_data_flags(p)
    p.add_argument("--learners", default=DEFAULT_LEARNERS,
                   help="comma list of tree, forest, svm, dnn, dnn_weighted")
    p.add_argument("--repeats", type=int, default=10)
    p.add_argument("--bins", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    _add_winner_flags(p)
    p.add_argument("--out", default="bench_out")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("report", help="winner-marked tables from a records.jsonl file")
    p.add_argument("records")
    _add_winner_flags(p)
    p.add_argument("--out", default="report_out")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (CliError, DataError, idim.EstimationError, RigError, StatsError, TrainingError,
            ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
