"""Labeled datasets, CSV ingestion, standardization and resampling plans."""

import csv
from dataclasses import dataclass, field

import numpy as np


class DataFormatError(ValueError):
    """Raised for malformed input files (ragged rows, bad cells, empty files)."""


@dataclass(frozen=True)
class LabeledDataset:
    """Dense feature matrix with integer class labels in ``0..class_count-1``.

    ``label_names`` maps class ids back to the raw values read from disk
    (first-appearance order).
    """

    features: np.ndarray
    labels: np.ndarray
    class_count: int
    label_names: tuple = ()
    feature_names: tuple = ()

    def __post_init__(self):
        x = np.ascontiguousarray(self.features, dtype=np.float64)
        y = np.ascontiguousarray(self.labels, dtype=np.intp)
        if x.ndim != 2:
            raise ValueError(f"features must be 2-D, got shape {x.shape}")
        if y.ndim != 1 or y.shape[0] != x.shape[0]:
            raise ValueError("labels must be 1-D with one entry per feature row")
        if not np.isfinite(x).all():
            raise ValueError("features contain NaN or Inf")
        if self.class_count < 1:
            raise ValueError("class_count must be >= 1")
        if y.size and (y.min() < 0 or y.max() >= self.class_count):
            raise ValueError("labels out of range for class_count")
        x.flags.writeable = False
        y.flags.writeable = False
        object.__setattr__(self, "features", x)
        object.__setattr__(self, "labels", y)
        object.__setattr__(self, "label_names", tuple(self.label_names))
        object.__setattr__(self, "feature_names", tuple(self.feature_names))

    @property
    def n(self):
        return self.features.shape[0]

    @property
    def d(self):
        return self.features.shape[1]

    def subset(self, rows):
        return LabeledDataset(
            self.features[rows],
            self.labels[rows],
            self.class_count,
            self.label_names,
            self.feature_names,
        )

    def with_features(self, features):
        return LabeledDataset(features, self.labels, self.class_count, self.label_names, self.feature_names)


def load_csv(path, label_column=-1, has_header=True):
    """Read a dense CSV file into a :class:`LabeledDataset`.

    ``label_column`` is a header name or an integer index (negative indices
    count from the end). Label values are mapped to ids in order of first
    appearance.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [r for r in csv.reader(fh) if r and any(cell.strip() for cell in r)]
    if not rows:
        raise DataFormatError(f"{path}: empty file")

    header = None
    first_data_row = 1
    if has_header:
        header = [h.strip() for h in rows[0]]
        rows = rows[1:]
        first_data_row = 2
    if not rows:
        raise DataFormatError(f"{path}: no data rows")

    width = len(header) if header is not None else len(rows[0])
    if isinstance(label_column, str) and not label_column.lstrip("-").isdigit():
        if header is None:
            raise DataFormatError("label column given by name but file has no header")
        if label_column not in header:
            raise DataFormatError(f"{path}: no column named {label_column!r}")
        label_idx = header.index(label_column)
    else:
        label_idx = int(label_column)
        if not -width <= label_idx < width:
            raise DataFormatError(f"{path}: label column {label_idx} out of range for {width} columns")
        label_idx %= width

    names = {}
    feats = np.empty((len(rows), width - 1), dtype=np.float64)
    labels = np.empty(len(rows), dtype=np.intp)
    for r, row in enumerate(rows):
        line = r + first_data_row
        if len(row) != width:
            raise DataFormatError(f"{path}: row {line} has {len(row)} cells, expected {width}")
        raw_label = row[label_idx].strip()
        labels[r] = names.setdefault(raw_label, len(names))
        cells = row[:label_idx] + row[label_idx + 1:]
        for j, cell in enumerate(cells):
            try:
                feats[r, j] = float(cell)
            except ValueError:
                col = j if j < label_idx else j + 1
                raise DataFormatError(
                    f"{path}: row {line}, column {col + 1}: cannot parse {cell!r} as a number"
                ) from None

    feature_names = ()
    if header is not None:
        feature_names = tuple(header[:label_idx] + header[label_idx + 1:])
    return LabeledDataset(feats, labels, len(names), tuple(names), feature_names)


def save_csv(data, path):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        names = data.feature_names or tuple(f"x{j}" for j in range(data.d))
        w.writerow(list(names) + ["label"])
        for row, y in zip(data.features, data.labels):
            w.writerow([repr(float(v)) for v in row] + [int(y)])


@dataclass(frozen=True)
class StandardizerParams:
    means: np.ndarray
    stdevs: np.ndarray

    def to_dict(self):
        return {"means": self.means.tolist(), "stdevs": self.stdevs.tolist()}

    @classmethod
    def from_dict(cls, d):
        return cls(np.asarray(d["means"], dtype=float), np.asarray(d["stdevs"], dtype=float))


def standardize_fit(train):
    """Per-column mean and population standard deviation (divisor n)."""
    x = train.features if isinstance(train, LabeledDataset) else np.asarray(train, dtype=float)
    if x.shape[0] < 1:
        raise ValueError("cannot standardize an empty dataset")
    return StandardizerParams(x.mean(axis=0), x.std(axis=0))


def apply_standardizer(x, params):
    """Array-level standardization; zero-variance columns are only centered."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape[-1] != params.means.shape[0]:
        raise ValueError(f"expected {params.means.shape[0]} features, got {x.shape[-1]}")
    scale = np.where(params.stdevs > 0, params.stdevs, 1.0)
    return (x - params.means) / scale


def standardize_apply(data, params):
    return data.with_features(apply_standardizer(data.features, params))


def split_train_test(data, train_fraction, seed):
    """Unstratified random split; the first floor(fraction * n) permuted rows train."""
    n = data.n
    if not 0 < train_fraction < 1:
        raise ValueError("train_fraction must lie in (0, 1)")
    n_train = int(np.floor(train_fraction * n))
    if n_train < 1 or n_train >= n:
        raise ValueError(f"train fraction {train_fraction} leaves an empty side for n={n}")
    return split_by_count(data, n_train, seed)


def split_by_count(data, n_train, seed):
    """Random split with exactly ``n_train`` training rows."""
    if not 1 <= n_train < data.n:
        raise ValueError(f"cannot take {n_train} training rows out of {data.n}")
    perm = np.random.default_rng(seed).permutation(data.n)
    return data.subset(perm[:n_train]), data.subset(perm[n_train:])


@dataclass(frozen=True)
class FoldPlan:
    repetitions: int
    folds: int
    seed: int
    assignments: np.ndarray = field(repr=False)  # (repetitions, n) fold ids

    def splits(self):
        """Yield ``(rep, fold, train_idx, test_idx)`` for every fit."""
        for rep in range(self.repetitions):
            a = self.assignments[rep]
            for f in range(self.folds):
                yield rep, f, np.flatnonzero(a != f), np.flatnonzero(a == f)


def make_fold_plan(n, repetitions, folds, seed):
    if folds < 1:
        raise ValueError("folds must be >= 1")
    if folds > n:
        raise ValueError(f"cannot make {folds} folds from {n} rows")
    if repetitions < 1:
        raise ValueError("repetitions must be >= 1")
    rng = np.random.default_rng(seed)
    assignments = np.empty((repetitions, n), dtype=np.intp)
    round_robin = np.arange(n) % folds
    for rep in range(repetitions):
        perm = rng.permutation(n)
        assignments[rep, perm] = round_robin
    return FoldPlan(repetitions, folds, seed, assignments)
