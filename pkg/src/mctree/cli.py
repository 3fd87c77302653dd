"""``mctree`` command line.

Exit codes: 0 success, 1 usage error, 2 I/O error, 3 internal invariant failure.
"""

import argparse
import csv
import json
import logging
import sys

import numpy as np

from . import __version__
from .data import DataFormatError, load_csv
from .experiment import CsvSource, ExperimentSpec, SyntheticSource, emit_report, run_experiment
from .oracle import oracle_check
from .tree import ALGORITHMS, DecisionTree, algorithm, build_tree

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_INVARIANT = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _int_list(text):
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _algos(text):
    if text == "all":
        return list(ALGORITHMS)
    keys = [k.strip() for k in text.split(",") if k.strip()]
    for k in keys:
        if k not in ALGORITHMS:
            raise argparse.ArgumentTypeError(f"unknown algorithm {k!r} (known: {', '.join(ALGORITHMS)})")
    return keys


def _cv(text):
    try:
        reps, folds = text.lower().split("x")
        return int(reps), int(folds)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected RxF such as 10x10, got {text!r}") from None


def _positive(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def build_parser():
    p = _Parser(prog="mctree", description=__doc__.splitlines()[0].strip("`"))
    p.add_argument("--version", action="version", version=f"mctree {__version__}")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add_common(sp):
        sp.add_argument("--spec", help="JSON experiment spec; replaces the data/algorithm flags")
        sp.add_argument("--algos", type=_algos, default=list(ALGORITHMS),
                        help="comma-separated algorithm keys or 'all'")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--workers", type=_positive, default=1)
        sp.add_argument("--out", default="report.json")
        sp.add_argument("--format", choices=("json", "csv"), default="json")

    s = sub.add_parser("synth", help="synthetic sweep")
    add_common(s)
    s.add_argument("--classes", type=_int_list, default=[2])
    s.add_argument("--dims", type=_int_list, default=[4])
    s.add_argument("--noise-dims", type=_int_list, default=[0])
    s.add_argument("--train-sizes", type=_int_list, default=[1000])
    s.add_argument("--test-size", type=_positive, default=2000)
    s.add_argument("--replicates", type=_positive, default=30)
    s.add_argument("--scaling", choices=("on", "off", "best"), default="on")

    r = sub.add_parser("real", help="evaluate on a CSV dataset")
    add_common(r)
    r.add_argument("--csv")
    r.add_argument("--label", default="-1", help="label column name or index")
    r.add_argument("--no-header", action="store_true")
    ev = r.add_mutually_exclusive_group()
    ev.add_argument("--cv", type=_cv, help="repetitions x folds, e.g. 10x10")
    ev.add_argument("--holdout", type=float, help="training fraction")
    r.add_argument("--scaling", choices=("on", "off", "best"), default="best")

    o = sub.add_parser("oracle-check", help="scan vs brute-force equivalence")
    o.add_argument("--trials", type=_positive, default=1000)
    o.add_argument("--seed", type=int, default=0)

    t = sub.add_parser("train", help="fit one tree and save it as JSON")
    t.add_argument("--csv", required=True)
    t.add_argument("--label", default="-1")
    t.add_argument("--no-header", action="store_true")
    t.add_argument("--algo", type=_algos, default=["maxcut-node-means"])
    t.add_argument("--standardize", action="store_true")
    t.add_argument("--model", required=True, help="output JSON path")

    pr = sub.add_parser("predict", help="predict with a saved tree")
    pr.add_argument("--model", required=True)
    pr.add_argument("--csv", required=True)
    pr.add_argument("--label", default=None, help="label column to score against (optional)")
    pr.add_argument("--no-header", action="store_true")
    pr.add_argument("--out", default=None, help="write predictions here instead of stdout")
    return p


def _label_arg(text):
    return int(text) if text.lstrip("-").isdigit() else text


def _spec_from_args(args):
    if args.spec:
        with open(args.spec, encoding="utf-8") as fh:
            spec = ExperimentSpec.from_dict(json.load(fh))
        spec.output = args.out
        return spec
    if args.command == "synth":
        source = SyntheticSource(args.classes, args.dims, args.noise_dims, args.train_sizes,
                                 args.test_size, args.replicates)
    else:
        if not args.csv:
            raise UsageError("real: --csv is required unless --spec is given")
        source = CsvSource(args.csv, _label_arg(args.label), not args.no_header)
        if args.holdout is not None:
            source.mode, source.train_fraction = "holdout", args.holdout
        elif args.cv is not None:
            source.repetitions, source.folds = args.cv
    return ExperimentSpec(source, args.algos, args.scaling, args.seed, workers=args.workers,
                          output=args.out)


def _cmd_experiment(args):
    spec = _spec_from_args(args)
    report = run_experiment(spec)
    paths = emit_report(report, spec.output or args.out, args.format)
    for agg in report["aggregates"]:
        flag = next((s["flag"] for s in report["significance"]
                     if s["group"] == agg["group"] and s["algorithm"] == agg["algorithm"]), "")
        acc = agg.get("mean_accuracy", float("nan"))
        secs = agg.get("mean_build_seconds", float("nan"))
        leaves = agg.get("mean_leaves", float("nan"))
        print(f"{agg['group']:>4} {agg['name']:<28} acc={acc:.4f} build={secs:.4f}s "
              f"leaves={leaves:.1f} {flag}")
    print("wrote " + ", ".join(paths))
    return EXIT_OK


def _cmd_oracle(args):
    summary = oracle_check(args.seed, args.trials)
    if summary["passed"]:
        print(f"oracle-check passed: {summary['trials']} trials, {summary['checks']} comparisons "
              f"(backend {summary['backend']})")
        return EXIT_OK
    print("oracle-check FAILED; counterexample:", file=sys.stderr)
    print(json.dumps(summary["failure"]), file=sys.stderr)
    return EXIT_INVARIANT


def _cmd_train(args):
    data = load_csv(args.csv, _label_arg(args.label), not args.no_header)
    tree = build_tree(data, algorithm(args.algo[0], args.standardize))
    tree.to_json(args.model)
    print(f"{tree.config.name}: {tree.n_leaves} leaves, depth {tree.depth} -> {args.model}")
    return EXIT_OK


def _read_features(path, has_header, label):
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [r for r in csv.reader(fh) if r]
    header = rows.pop(0) if has_header and rows else None
    label_idx = None
    if label is not None:
        lab = _label_arg(label)
        if isinstance(lab, str):
            if header is None or lab not in header:
                raise DataFormatError(f"{path}: no column named {lab!r}")
            label_idx = header.index(lab)
        else:
            label_idx = lab % len(rows[0])
    feats, truth = [], []
    for i, row in enumerate(rows):
        if label_idx is not None:
            truth.append(row[label_idx].strip())
            row = row[:label_idx] + row[label_idx + 1:]
        try:
            feats.append([float(v) for v in row])
        except ValueError:
            raise DataFormatError(f"{path}: row {i + 1 + bool(header)} has a non-numeric cell") from None
    if len({len(r) for r in feats}) > 1:
        raise DataFormatError(f"{path}: ragged rows")
    return np.array(feats, dtype=float), truth


def _cmd_predict(args):
    tree = DecisionTree.from_json(args.model)
    x, truth = _read_features(args.csv, not args.no_header, args.label)
    if x.ndim != 2 or x.shape[1] != tree.d:
        raise UsageError(f"model expects {tree.d} features, file has {x.shape[-1]}")
    pred = tree.predict(x)
    names = tree.label_names or tuple(str(i) for i in range(tree.class_count))
    lines = [str(names[p]) for p in pred]
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")
    else:
        sys.stdout.write("\n".join(lines) + "\n")
    if truth:
        acc = float(np.mean([a == b for a, b in zip(lines, truth)]))
        print(f"accuracy {acc:.4f} on {len(truth)} rows", file=sys.stderr)
    return EXIT_OK


COMMANDS = {
    "synth": _cmd_experiment,
    "real": _cmd_experiment,
    "oracle-check": _cmd_oracle,
    "train": _cmd_train,
    "predict": _cmd_predict,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (UsageError, ValueError) as exc:
        if isinstance(exc, DataFormatError):
            print(f"mctree: {exc}", file=sys.stderr)
            return EXIT_IO
        print(f"mctree: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"mctree: {exc}", file=sys.stderr)
        return EXIT_IO
    except AssertionError as exc:
        print(f"mctree: internal invariant failed: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
