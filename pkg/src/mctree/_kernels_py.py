"""Vectorized numpy split-search kernels (fallback for the compiled module).

Same signatures and the same floating-point evaluation order as
``_kernels.pyx``; the backends agree bit for bit.
"""

import numpy as np

GINI, MAXCUT = 0, 1


def _pick(score, valid, n, maximize):
    if not valid.any():
        return -1, np.nan
    target = score[valid].max() if maximize else score[valid].min()
    cand = np.flatnonzero(valid & (score == target))
    bal = np.abs(2 * (cand + 1) - n)
    pos = cand[np.argmin(bal)]  # argmin keeps the first (smallest threshold) on ties
    return int(pos), float(target)


def _gini_column(xs, ys, totals):
    n = xs.shape[0]
    occ = np.empty(n, dtype=np.int64)
    by_class = np.argsort(ys, kind="stable")
    starts = np.cumsum(totals) - totals
    occ[by_class] = np.arange(n) - starts[ys[by_class]]
    sum_l2 = np.cumsum(2 * occ + 1)[:-1]
    sum_r2 = (totals * totals).sum() - np.cumsum(2 * (totals[ys] - occ) - 1)[:-1]
    nl = np.arange(1, n, dtype=np.int64)
    nr = n - nl
    num = n * nl * nr - nr * sum_l2 - nl * sum_r2
    score = num.astype(np.float64) / (n * nl * nr).astype(np.float64)
    return _pick(score, xs[:-1] != xs[1:], n, maximize=False)


def _rest_stats(xs, ys, n_classes):
    n = xs.shape[0]
    class_sum = np.bincount(ys, weights=xs, minlength=n_classes)
    counts = np.bincount(ys, minlength=n_classes)
    total = 0.0
    for v in class_sum:
        total += v
    return total - class_sum, (n - counts).astype(np.float64)


def max_cut_prefix(xs, ys, n_classes):
    """Cut values theta_1..theta_{n-1} for already-sorted values."""
    xs = np.asarray(xs, dtype=np.float64)
    ys = np.asarray(ys, dtype=np.intp)
    s, N = _rest_stats(xs, ys, n_classes)
    head = ys[:-1]
    return np.cumsum(s[head] - xs[:-1] * N[head])


def best_split(X, order, y, n_classes, criterion):
    """Best (feature, last-left sorted position, score) over all columns."""
    X = np.asarray(X)
    y = np.asarray(y)
    n, d = X.shape
    maximize = criterion == MAXCUT
    totals = np.bincount(y, minlength=n_classes).astype(np.int64)
    best_j, best_pos, best, best_bal = -1, -1, np.nan, 0
    for j in range(d):
        o = order[:, j]
        xs = X[o, j]
        ys = y[o]
        if maximize:
            theta = max_cut_prefix(xs, ys, n_classes)
            pos, score = _pick(theta, xs[:-1] != xs[1:], n, maximize=True)
        else:
            pos, score = _gini_column(xs, ys, totals)
        if pos < 0:
            continue
        bal = abs(2 * (pos + 1) - n)
        if best_j < 0:
            better = True
        elif maximize:
            better = score > best or (score == best and bal < best_bal)
        else:
            better = score < best or (score == best and bal < best_bal)
        if better:
            best_j, best_pos, best, best_bal = j, pos, score, bal
    return best_j, best_pos, best


def project(X, center, direction):
    """Row-wise (x - center) . direction, accumulated feature by feature."""
    acc = np.zeros(X.shape[0])
    for j in range(X.shape[1]):
        acc += (X[:, j] - center[j]) * direction[j]
    return acc
