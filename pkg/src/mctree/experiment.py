"""Experiment runner: synthetic sweeps and real CSV data, timing, significance flags."""

import csv
import itertools
import json
import logging
import os
import platform
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import __version__, splits
from .data import load_csv, make_fold_plan, split_by_count, split_train_test
from .stats import holm_bonferroni, mean_ci95, paired_t_one_tailed
from .synth import SynthConfig, generate
from .tree import ALGORITHMS, algorithm, build_tree

log = logging.getLogger(__name__)

SCHEMA = "report/v1"
BEST_FLAG = "//"
WORSE_FLAG = "\\\\"


@dataclass
class SyntheticSource:
    classes: list = field(default_factory=lambda: [2])
    dims: list = field(default_factory=lambda: [4])
    noise_dims: list = field(default_factory=lambda: [0])
    train_sizes: list = field(default_factory=lambda: [1000])
    test_size: int = 2000
    replicates: int = 30
    flip_fraction: float = 0.01
    class_sep: float = 1.0


@dataclass
class CsvSource:
    path: str
    label: object = -1
    has_header: bool = True
    mode: str = "cv"            # "cv" or "holdout"
    repetitions: int = 10
    folds: int = 10
    train_fraction: float = 0.8


@dataclass
class ExperimentSpec:
    source: object
    algorithms: list = field(default_factory=lambda: list(ALGORITHMS))
    standardize: str = "on"     # "on", "off" or "best"
    seed: int = 0
    alpha: float = 0.05
    workers: int = 1
    output: str = None

    def validate(self):
        if not self.algorithms:
            raise ValueError("at least one algorithm is required")
        for key in self.algorithms:
            algorithm(key)
        if self.standardize not in ("on", "off", "best"):
            raise ValueError("standardize must be 'on', 'off' or 'best'")
        src = self.source
        if isinstance(src, SyntheticSource):
            if src.replicates < 1:
                raise ValueError("replicates must be >= 1")
            if src.test_size < 1:
                raise ValueError("test_size must be >= 1")
        elif isinstance(src, CsvSource):
            if src.mode not in ("cv", "holdout"):
                raise ValueError("csv eval mode must be 'cv' or 'holdout'")
            if src.mode == "cv" and (src.folds < 2 or src.repetitions < 1):
                raise ValueError("cross-validation needs folds >= 2 and repetitions >= 1")
        else:
            raise ValueError("unknown data source")

    def to_dict(self):
        src = asdict(self.source)
        if "path" in src:
            src["path"] = os.fspath(src["path"])
        src["kind"] = "synthetic" if isinstance(self.source, SyntheticSource) else "csv"
        return {
            "source": src,
            "algorithms": list(self.algorithms),
            "standardize": self.standardize,
            "seed": self.seed,
            "alpha": self.alpha,
            "workers": self.workers,
            "output": self.output,
        }

    @classmethod
    def from_dict(cls, d):
        d = dict(d)
        src = dict(d.pop("source"))
        kind = src.pop("kind", "synthetic")
        source = SyntheticSource(**src) if kind == "synthetic" else CsvSource(**src)
        return cls(source=source, **d)


def _scalings(mode):
    return {"on": (True,), "off": (False,), "best": (False, True)}[mode]


def _derive_seed(*parts):
    return int(np.random.SeedSequence([int(p) for p in parts]).generate_state(1)[0])


def _plan(spec):
    """Groups and their (train, test) instances, all algorithms share each instance."""
    src = spec.source
    if isinstance(src, SyntheticSource):
        grid = itertools.product(src.classes, src.dims, src.noise_dims, src.train_sizes)
        for g, (c, k, noise, n_train) in enumerate(grid):
            params = {"classes": c, "dims": k, "noise_dims": noise, "train_size": n_train,
                      "test_size": src.test_size}

            def instances(g=g, c=c, k=k, noise=noise, n_train=n_train):
                for r in range(src.replicates):
                    cfg = SynthConfig(n_train + src.test_size, c, k, noise, src.flip_fraction,
                                      src.class_sep, seed=_derive_seed(spec.seed, g, r))
                    data = generate(cfg)
                    yield r, split_by_count(data, n_train, _derive_seed(spec.seed, g, r, 1))

            yield f"g{g}", params, instances
    else:
        data = load_csv(src.path, src.label, src.has_header)
        params = {"path": os.fspath(src.path), "n": data.n, "d": data.d, "classes": data.class_count,
                  "label_names": list(data.label_names)}
        if src.mode == "holdout":
            params["eval"] = f"holdout {src.train_fraction}"

            def instances():
                yield 0, split_train_test(data, src.train_fraction, spec.seed)
        else:
            params["eval"] = f"cv {src.repetitions}x{src.folds}"
            plan = make_fold_plan(data.n, src.repetitions, src.folds, spec.seed)

            def instances():
                for i, (_, _, tr, te) in enumerate(plan.splits()):
                    yield i, (data.subset(tr), data.subset(te))

        yield "g0", params, instances


def _run_cell(train, test, key, standardize):
    try:
        t0 = time.perf_counter()
        tree = build_tree(train, algorithm(key, standardize))
        elapsed = time.perf_counter() - t0
        acc = float(np.mean(tree.predict(test.features) == test.labels))
        return {"status": "ok", "accuracy": acc, "build_seconds": elapsed,
                "leaves": tree.n_leaves, "depth": tree.depth}
    except Exception as exc:  # recorded in the report, never fatal for the run
        return {"status": "failed", "reason": f"{type(exc).__name__}: {exc}"}


def _instance_cells(args):
    group, inst, train, test, algos, scalings = args
    out = []
    for key in algos:
        for std in scalings:
            cell = {"group": group, "instance": inst, "algorithm": key,
                    "name": ALGORITHMS[key].name, "standardized": std}
            cell.update(_run_cell(train, test, key, std))
            out.append(cell)
    return out


def _choose_scaling(trials, scalings):
    """Per algorithm: the scaling with the best mean accuracy, then the lower mean time."""
    if len(scalings) == 1:
        return scalings[0], {}
    summary = {}
    for std in scalings:
        ok = [c for c in trials if c["standardized"] == std and c["status"] == "ok"]
        if not ok:
            continue
        summary["on" if std else "off"] = {
            "accuracy": float(np.mean([c["accuracy"] for c in ok])),
            "build_seconds": float(np.mean([c["build_seconds"] for c in ok])),
            "failed": sum(c["standardized"] == std and c["status"] != "ok" for c in trials),
        }
    ranked = sorted(
        summary.items(),
        key=lambda kv: (kv[1]["failed"], -kv[1]["accuracy"], kv[1]["build_seconds"]),
    )
    chosen = ranked[0][0] == "on" if ranked else scalings[0]
    return chosen, summary


def significance(acc_by_algo, alpha=0.05):
    """Holm-corrected one-tailed paired tests behind the // and \\\\ flags.

    ``acc_by_algo`` maps algorithm key -> per-instance accuracies (paired by
    position). The top-mean algorithm is tested as better than every other
    one (// when all nulls reject); every other algorithm is tested as worse
    than each of the rest (\\\\ when at least one null rejects).
    """
    keys = list(acc_by_algo)
    acc = {k: np.asarray(v, dtype=float) for k, v in acc_by_algo.items()}
    means = {k: float(acc[k].mean()) for k in keys}
    top_mean = max(means.values())
    tops = [k for k in keys if means[k] == top_mean]
    result = {}
    for k in keys:
        others = [o for o in keys if o != k]
        is_top = k in tops
        direction = "greater" if is_top else "less"
        comparisons = []
        for o in others:
            t, p = paired_t_one_tailed(acc[k] - acc[o], direction)
            # infinite t (zero-spread differences) is stored as null to keep the JSON strict
            comparisons.append({"against": o, "t": t if np.isfinite(t) else None, "p": p})
        reject = holm_bonferroni([c["p"] for c in comparisons], alpha).tolist() if others else []
        for c, r in zip(comparisons, reject):
            c["reject"] = bool(r)
        flag = ""
        if is_top:
            if len(tops) == 1 and others and all(reject):
                flag = BEST_FLAG
        elif any(reject):
            flag = WORSE_FLAG
        result[k] = {"mean_accuracy": means[k], "direction": direction,
                     "comparisons": comparisons, "flag": flag}
    return result


def run_experiment(spec):
    spec.validate()
    scalings = _scalings(spec.standardize)
    report = {
        "schema": SCHEMA,
        "environment": {
            "version": __version__,
            "seed": spec.seed,
            "backend": splits.BACKEND,
            "python": platform.python_version(),
            "numpy": np.__version__,
            "timing": "wall-clock seconds of tree construction only, single-threaded per build",
            "scaling_selection": "per algorithm and group: highest mean accuracy, then lowest mean build time",
        },
        "spec": spec.to_dict(),
        "groups": [],
        "cells": [],
        "aggregates": [],
        "significance": [],
        "warnings": [],
    }
    for gid, params, instances in _plan(spec):
        jobs = [(gid, i, tr, te, spec.algorithms, scalings) for i, (tr, te) in instances()]
        if spec.workers > 1:
            with ProcessPoolExecutor(spec.workers) as pool:
                trials = [c for batch in pool.map(_instance_cells, jobs) for c in batch]
        else:
            trials = [c for job in jobs for c in _instance_cells(job)]
        n_inst = len(jobs)
        group = {"id": gid, "params": params, "instances": n_inst, "scaling": {}}

        kept = []
        per_algo = {}
        for key in spec.algorithms:
            mine = [c for c in trials if c["algorithm"] == key]
            std, summary = _choose_scaling(mine, scalings)
            group["scaling"][key] = {"standardized": std, "candidates": summary}
            chosen = [c for c in mine if c["standardized"] == std]
            kept.extend(chosen)
            per_algo[key] = chosen
        report["groups"].append(group)
        report["cells"].extend(kept)

        for key, cells in per_algo.items():
            ok = [c for c in cells if c["status"] == "ok"]
            agg = {"group": gid, "algorithm": key, "name": ALGORITHMS[key].name,
                   "standardized": group["scaling"][key]["standardized"],
                   "cells": len(cells), "failed": len(cells) - len(ok)}
            if ok:
                accs = [c["accuracy"] for c in ok]
                agg.update({
                    "mean_accuracy": float(np.mean(accs)),
                    "mean_build_seconds": float(np.mean([c["build_seconds"] for c in ok])),
                    "mean_leaves": float(np.mean([c["leaves"] for c in ok])),
                    "mean_depth": float(np.mean([c["depth"] for c in ok])),
                })
                if len(accs) >= 2:
                    _, lo, hi = mean_ci95(accs)
                    agg["accuracy_ci95"] = [lo, hi]
            report["aggregates"].append(agg)

        complete = {k: [c["accuracy"] for c in sorted(cs, key=lambda c: c["instance"])]
                    for k, cs in per_algo.items() if all(c["status"] == "ok" for c in cs)}
        dropped = sorted(set(per_algo) - set(complete))
        if dropped:
            report["warnings"].append(f"{gid}: {', '.join(dropped)} excluded from significance (failed cells)")
        if n_inst < 2:
            msg = f"{gid}: {n_inst} instance(s); significance flags omitted"
            warnings.warn(msg)
            report["warnings"].append(msg)
        elif len(complete) >= 2:
            sig = significance(complete, spec.alpha)
            for key, entry in sig.items():
                entry.update({"group": gid, "algorithm": key, "name": ALGORITHMS[key].name})
                report["significance"].append(entry)
        log.info("finished group %s (%d instances)", gid, n_inst)
    return report


def _aggregates_path(path):
    root, ext = os.path.splitext(os.fspath(path))
    return f"{root}.aggregates{ext or '.csv'}"


def emit_report(report, path, fmt="json"):
    """Write ``report`` as JSON, or as two CSV files (cells and aggregates)."""
    if fmt == "json":
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(report, fh, indent=2, sort_keys=True)
            fh.write("\n")
        return [os.fspath(path)]
    if fmt != "csv":
        raise ValueError(f"unknown report format {fmt!r}")
    cell_cols = ["group", "instance", "algorithm", "name", "standardized", "status",
                 "accuracy", "build_seconds", "leaves", "depth", "reason"]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.DictWriter(fh, fieldnames=cell_cols, extrasaction="ignore")
        w.writeheader()
        for cell in report["cells"]:
            w.writerow(cell)
    flags = {(s["group"], s["algorithm"]): s["flag"] for s in report["significance"]}
    agg_cols = ["group", "algorithm", "name", "standardized", "cells", "failed", "mean_accuracy",
                "ci95_lo", "ci95_hi", "mean_build_seconds", "mean_leaves", "mean_depth", "flag"]
    agg_path = _aggregates_path(path)
    with open(agg_path, "w", newline="", encoding="utf-8") as fh:
        w = csv.DictWriter(fh, fieldnames=agg_cols, extrasaction="ignore")
        w.writeheader()
        for agg in report["aggregates"]:
            row = dict(agg)
            if "accuracy_ci95" in agg:
                row["ci95_lo"], row["ci95_hi"] = agg["accuracy_ci95"]
            row["flag"] = flags.get((agg["group"], agg["algorithm"]), "")
            w.writerow(row)
    return [os.fspath(path), agg_path]
