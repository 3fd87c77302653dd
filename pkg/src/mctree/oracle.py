"""Randomized scan-versus-brute-force equivalence checks for the split search."""

from dataclasses import asdict

import numpy as np

from . import _kernels_py, splits

REL_TOL = 1e-9


def random_instance(rng, max_n=200, max_d=5, max_classes=5):
    """Random split-search instance with plenty of duplicated values."""
    n = int(rng.integers(2, max_n + 1))
    d = int(rng.integers(1, max_d + 1))
    c = int(rng.integers(1, max_classes + 1))
    kind = rng.integers(3)
    if kind == 0:
        x = rng.integers(0, int(rng.integers(2, 25)), size=(n, d)).astype(np.float64)
    elif kind == 1:
        x = np.round(rng.normal(scale=10.0, size=(n, d)), int(rng.integers(0, 3)))
    else:
        x = rng.normal(size=(n, d))
        # copy some entries onto others within each column
        k = int(rng.integers(0, n))
        src = rng.integers(0, n, size=k)
        dst = rng.integers(0, n, size=k)
        x[dst] = x[src]
    y = rng.integers(0, c, size=n)
    return x, y


def same_candidate(a, b, tol=REL_TOL):
    if a is None or b is None:
        return a is None and b is None
    if (a.feature_index, a.left_count, a.right_count) != (b.feature_index, b.left_count, b.right_count):
        return False
    for u, v in ((a.threshold, b.threshold), (a.score, b.score)):
        if abs(u - v) > tol * max(abs(u), abs(v)):
            return False
    return True


def _scan(x, y, criterion):
    return splits.select_best_split(x, y, criterion)


def oracle_check(seed=0, trials=1000, scan=_scan, reference=splits.brute_force_select):
    """Compare ``scan`` against ``reference`` on random instances.

    Also checks the compiled kernel against the numpy fallback when the
    compiled one is active. Returns a summary dict; ``failure`` holds the
    first mismatching instance for replay.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    checks = 0
    for t in range(trials):
        x, y = random_instance(rng)
        for criterion in splits.Criterion:
            pairs = [("brute_force", scan(x, y, criterion), reference(x, y, criterion))]
            if splits.BACKEND != "numpy" and scan is _scan:
                fallback = splits.select_best_split(x, y, criterion, backend=_kernels_py)
                pairs.append(("numpy_fallback", pairs[0][1], fallback))
            for against, got, want in pairs:
                checks += 1
                if not same_candidate(got, want):
                    return {
                        "passed": False,
                        "seed": seed,
                        "trials": t + 1,
                        "checks": checks,
                        "failure": {
                            "trial": t,
                            "criterion": criterion.value,
                            "against": against,
                            "features": x.tolist(),
                            "labels": y.tolist(),
                            "got": None if got is None else asdict(got),
                            "expected": None if want is None else asdict(want),
                        },
                    }
    return {"passed": True, "seed": seed, "trials": trials, "checks": checks, "backend": splits.BACKEND}
