"""Single-feature threshold search under the Gini and Max-Cut criteria.

The scans run in a compiled kernel when ``mctree._kernels`` is built and fall
back to vectorized numpy otherwise. Set ``MCTREE_PURE_PYTHON=1`` to force the
fallback. Both backends produce identical results.

Tie rules shared by every search here: best score first, then the most
balanced split (smallest ``|left - right|``), then the smallest threshold,
then the lowest feature index. Thresholds sit midway between consecutive
distinct sorted values.
"""

import enum
import os
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _kernels_py

if os.environ.get("MCTREE_PURE_PYTHON"):
    _kernels = None
else:
    try:
        from . import _kernels
    except ImportError:
        _kernels = None

BACKEND = "cython" if _kernels is not None else "numpy"
_impl = _kernels if _kernels is not None else _kernels_py


class Criterion(str, enum.Enum):
    GINI = "gini"
    MAXCUT = "maxcut"

    @property
    def code(self):
        return 0 if self is Criterion.GINI else 1


@dataclass(frozen=True)
class SplitCandidate:
    feature_index: int
    threshold: float
    score: float
    left_count: int
    right_count: int

    @property
    def imbalance(self):
        return abs(self.left_count - self.right_count)


@dataclass(frozen=True)
class MaxCutScanState:
    """Per-class totals used by the Max-Cut recurrence.

    ``class_sums[c]`` is the sum of values whose label is not ``c`` and
    ``class_counts[c]`` the number of such values.
    """

    class_sums: np.ndarray
    class_counts: np.ndarray


def midpoint(lo, hi):
    """Threshold between two consecutive distinct values.

    Falls back to ``lo`` when the two are adjacent floats and the midpoint
    rounds onto ``hi``; ``x <= threshold`` must still put ``lo`` left and
    ``hi`` right.
    """
    t = 0.5 * (lo + hi)
    if not lo <= t < hi:
        t = lo
    return float(t)


def gini_impurity(counts):
    """Gini impurity ``sum_c p_c (1 - p_c)`` of a vector of class counts."""
    counts = np.asarray(counts, dtype=np.float64)
    total = counts.sum()
    if total <= 0:
        raise ValueError("gini impurity of an empty node is undefined")
    p = counts / total
    return float((p * (1.0 - p)).sum())


def _as_1d(values, labels):
    x = np.ascontiguousarray(values, dtype=np.float64).ravel()
    y = np.ascontiguousarray(labels, dtype=np.intp).ravel()
    if x.shape != y.shape:
        raise ValueError(f"values and labels differ in length ({x.size} vs {y.size})")
    if x.size < 2:
        raise ValueError("need at least two observations to split")
    return x, y


def _encode(labels):
    """Map arbitrary hashable labels to dense ids ``0..k-1``."""
    y = np.asarray(labels)
    if y.dtype.kind in "iu" and y.size and y.min() >= 0:
        return y.astype(np.intp), int(y.max()) + 1
    _, inv = np.unique(y, return_inverse=True)
    return inv.astype(np.intp).ravel(), int(inv.max()) + 1


def _single_feature(values, labels, criterion):
    y, n_classes = _encode(labels)
    x, y = _as_1d(values, y)
    return select_best_split(x[:, None], y, criterion, n_classes=n_classes)


def best_gini_split(values, labels):
    """Threshold minimizing the cardinality-weighted Gini impurity, or None."""
    return _single_feature(values, labels, Criterion.GINI)


def max_cut_scan(values, labels):
    """Threshold maximizing the one-dimensional Max-Cut value, or None.

    O(n log n): one sort followed by a linear pass of the recurrence
    ``theta_i = theta_{i-1} + S[y_i] - x_i * N[y_i]`` with ``theta_0 = 0``.
    """
    return _single_feature(values, labels, Criterion.MAXCUT)


def scan_state(values, labels, n_classes=None):
    y, k = _encode(labels)
    x = np.asarray(values, dtype=np.float64).ravel()
    n_classes = k if n_classes is None else n_classes
    s, N = _kernels_py._rest_stats(x, y, n_classes)
    return MaxCutScanState(s, N.astype(np.int64))


def max_cut_prefix_values(values, labels):
    """Cut value after each sorted prefix ``1..n-1`` (ties in value included)."""
    y, n_classes = _encode(labels)
    x, y = _as_1d(values, y)
    order = np.argsort(x, kind="stable")
    xs = np.ascontiguousarray(x[order])
    ys = np.ascontiguousarray(y[order])
    return np.asarray(_impl.max_cut_prefix(xs, ys, n_classes))


def select_best_split(features, labels, criterion, n_classes=None, backend=None):
    """Best split over every column of ``features``.

    Gini candidates minimize weighted impurity, Max-Cut candidates maximize
    the cut value. Returns None when no column offers a threshold, when the
    node is pure, or (Max-Cut) when the best cut is zero.
    """
    criterion = Criterion(criterion)
    X = np.ascontiguousarray(features, dtype=np.float64)
    if X.ndim != 2:
        raise ValueError("features must be a 2-D matrix")
    y = np.ascontiguousarray(labels, dtype=np.intp)
    n, d = X.shape
    if y.shape != (n,):
        raise ValueError(f"labels length {y.size} does not match {n} rows")
    if n < 2 or d < 1:
        return None
    if n_classes is None:
        n_classes = int(y.max()) + 1
    if np.all(y == y[0]):
        return None
    impl = _impl if backend is None else backend
    order = np.argsort(X, axis=0, kind="stable")
    j, pos, score = impl.best_split(X, order, y, n_classes, criterion.code)
    if j < 0:
        return None
    if criterion is Criterion.MAXCUT and not score > 0:
        return None
    lo = X[order[pos, j], j]
    hi = X[order[pos + 1, j], j]
    return SplitCandidate(int(j), midpoint(lo, hi), float(score), int(pos + 1), int(n - pos - 1))


# -- brute-force references -------------------------------------------------

def _candidate_thresholds(x):
    u = np.unique(x)
    return [midpoint(a, b) for a, b in zip(u[:-1], u[1:])]


def _choose(cands, maximize):
    """cands: list of (exact_or_float_score, left, right, threshold)."""
    best = None
    for score, nl, nr, t in cands:
        key = (-score if maximize else score, abs(nl - nr), t)
        if best is None or key < best[0]:
            best = (key, score, nl, nr, t)
    return best


def brute_force_gini(values, labels):
    """Direct enumeration with exact rational arithmetic."""
    y, _ = _encode(labels)
    x, y = _as_1d(values, y)
    if len(set(y.tolist())) < 2:
        return None
    n = len(x)
    cands = []
    for t in _candidate_thresholds(x):
        left = Counter(y[x <= t].tolist())
        right = Counter(y[x > t].tolist())
        nl, nr = sum(left.values()), sum(right.values())
        imp = Fraction(0)
        for side, m in ((left, nl), (right, nr)):
            g = sum(Fraction(c, m) * (1 - Fraction(c, m)) for c in side.values())
            imp += Fraction(m, n) * g
        cands.append((imp, nl, nr, t))
    if not cands:
        return None
    _, score, nl, nr, t = _choose(cands, maximize=False)
    return SplitCandidate(0, t, float(score), nl, nr)


def brute_force_max_cut(values, labels):
    """O(n^2) per threshold evaluation of the cut objective."""
    y, _ = _encode(labels)
    x, y = _as_1d(values, y)
    cands = []
    for t in _candidate_thresholds(x):
        lm = x <= t
        xl, yl, xr, yr = x[lm], y[lm], x[~lm], y[~lm]
        w = np.abs(xl[:, None] - xr[None, :]) * (yl[:, None] != yr[None, :])
        cands.append((float(w.sum()), len(xl), len(xr), t))
    if not cands:
        return None
    _, score, nl, nr, t = _choose(cands, maximize=True)
    if not score > 0:
        return None
    return SplitCandidate(0, t, score, nl, nr)


def brute_force_select(features, labels, criterion):
    """Exhaustive search over every (feature, threshold) pair."""
    criterion = Criterion(criterion)
    X = np.asarray(features, dtype=np.float64)
    one = brute_force_gini if criterion is Criterion.GINI else brute_force_max_cut
    best = None
    for j in range(X.shape[1]):
        c = one(X[:, j], labels)
        if c is None:
            continue
        if best is None:
            best = (c, j)
            continue
        b = best[0]
        if criterion is Criterion.GINI:
            better = c.score < b.score
        else:
            better = c.score > b.score
        if better or (c.score == b.score and c.imbalance < b.imbalance):
            best = (c, j)
    if best is None:
        return None
    c, j = best
    return SplitCandidate(j, c.threshold, c.score, c.left_count, c.right_count)
