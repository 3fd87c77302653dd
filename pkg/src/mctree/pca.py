"""Principal component bases, including the one-vs-rest Means-PCA variant."""

from dataclasses import dataclass

import numpy as np

from . import splits

# Components whose variance falls below this fraction of the largest
# variance (itself floored at the same value) are dropped.
RELATIVE_VARIANCE_FLOOR = 1e-12


@dataclass(frozen=True)
class PcaBasis:
    center: np.ndarray       # (d,)
    components: np.ndarray   # (p, d), orthonormal rows
    variances: np.ndarray    # (p,), non-increasing

    @property
    def p(self):
        return self.components.shape[0]

    @property
    def d(self):
        return self.center.shape[0]

    def to_dict(self):
        return {
            "center": self.center.tolist(),
            "components": self.components.tolist(),
            "variances": self.variances.tolist(),
        }

    @classmethod
    def from_dict(cls, d):
        center = np.asarray(d["center"], dtype=float)
        comps = np.asarray(d["components"], dtype=float).reshape(-1, center.shape[0])
        return cls(center, comps, np.asarray(d["variances"], dtype=float))


def _orient(components):
    # Largest-magnitude entry of each row made positive (first one on ties).
    if components.size == 0:
        return components
    idx = np.argmax(np.abs(components), axis=1)
    signs = np.sign(components[np.arange(components.shape[0]), idx])
    signs[signs == 0] = 1.0
    return components * signs[:, None]


def fit_pca(points):
    """PCA of the rows of ``points``.

    Uses an eigendecomposition of the d x d sample covariance when ``d <= m``
    and an SVD of the centered m x d matrix otherwise (cheap for the handful
    of rest-mean points). All non-degenerate components are kept.
    """
    x = np.asarray(points, dtype=np.float64)
    if x.ndim != 2 or x.shape[0] < 1 or x.shape[1] < 1:
        raise ValueError(f"need a non-empty 2-D point matrix, got shape {x.shape}")
    m, d = x.shape
    center = x.mean(axis=0)
    if m == 1:
        return PcaBasis(center, np.empty((0, d)), np.empty(0))
    xc = x - center
    if d <= m:
        cov = (xc.T @ xc) / (m - 1)
        var, vecs = np.linalg.eigh(cov)
        var, comps = var[::-1], vecs[:, ::-1].T
    else:
        _, sv, comps = np.linalg.svd(xc, full_matrices=False)
        var = sv * sv / (m - 1)
    cutoff = RELATIVE_VARIANCE_FLOOR * max(var.max(initial=0.0), RELATIVE_VARIANCE_FLOOR)
    keep = var > cutoff
    return PcaBasis(center, _orient(np.ascontiguousarray(comps[keep])), np.ascontiguousarray(var[keep]))


def project(points, center, direction):
    """Row-wise ``(x - center) . direction``.

    Accumulates feature by feature in a fixed order, so the value for a row
    does not depend on which other rows are projected with it. Tree
    construction and prediction both route through here.
    """
    x = np.ascontiguousarray(points, dtype=np.float64)
    x = x.reshape(-1, x.shape[-1])
    center = np.ascontiguousarray(center, dtype=np.float64)
    direction = np.ascontiguousarray(direction, dtype=np.float64)
    return splits._impl.project(x, center, direction)


def transform(points, basis):
    x = np.asarray(points, dtype=np.float64)
    if x.ndim != 2 or x.shape[1] != basis.d:
        raise ValueError(f"expected a k x {basis.d} matrix, got shape {x.shape}")
    out = np.empty((x.shape[0], basis.p))
    for k in range(basis.p):
        out[:, k] = project(x, basis.center, basis.components[k])
    return out


def transform_fast(points, basis):
    """BLAS matrix product version of :func:`transform` for split search.

    Results can differ from :func:`transform` in the last bits.
    """
    return (np.asarray(points, dtype=np.float64) - basis.center) @ basis.components.T


def rest_means(features, labels, class_count=None):
    """Mean of the rows outside each locally present class (one-vs-rest).

    Rows come out in increasing class id. With a single class present the
    rest collections are empty and so is the result.
    """
    x = np.asarray(features, dtype=np.float64)
    y = np.asarray(labels, dtype=np.intp)
    if class_count is None:
        class_count = int(y.max()) + 1
    counts = np.bincount(y, minlength=class_count)
    present = np.flatnonzero(counts)
    if present.size < 2:
        return np.empty((0, x.shape[1]))
    onehot = np.zeros((x.shape[0], present.size))
    onehot[np.arange(x.shape[0]), np.searchsorted(present, y)] = 1.0
    class_sums = onehot.T @ x
    rest = class_sums.sum(axis=0) - class_sums
    return rest / (x.shape[0] - counts[present])[:, None]


def fit_means_pca(features, labels, class_count=None):
    y = np.asarray(labels, dtype=np.intp)
    if np.unique(y).size < 2:
        raise ValueError("Means-PCA needs at least two classes present")
    return fit_pca(rest_means(features, y, class_count))
