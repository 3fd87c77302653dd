"""Accuracy, paired one-tailed t-tests, Holm-Bonferroni and t confidence intervals.

The Student-t distribution is evaluated through the regularized incomplete
beta function (continued fraction, modified Lentz), so nothing here depends
on a statistics library.
"""

import math

import numpy as np

_EPS = 1e-15
_TINY = 1e-300
_MAX_ITER = 500


def accuracy(predicted, actual):
    predicted = np.asarray(predicted)
    actual = np.asarray(actual)
    if predicted.shape != actual.shape:
        raise ValueError("predicted and actual differ in length")
    if predicted.size == 0:
        raise ValueError("accuracy of an empty prediction set is undefined")
    return float(np.mean(predicted == actual))


def _beta_cf(a, b, x):
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _TINY:
        d = _TINY
    d = 1.0 / d
    h = d
    for m in range(1, _MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return h
    raise ArithmeticError(f"incomplete beta continued fraction did not converge (a={a}, b={b}, x={x})")


def betainc(a, b, x):
    """Regularized incomplete beta I_x(a, b)."""
    if a <= 0 or b <= 0:
        raise ValueError("betainc needs a, b > 0")
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    log_front = (math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
                 + a * math.log(x) + b * math.log1p(-x))
    # The continued fraction converges fast for x < (a+1)/(a+b+2); use the
    # symmetry I_x(a,b) = 1 - I_{1-x}(b,a) on the other side.
    if x < (a + 1.0) / (a + b + 2.0):
        return math.exp(log_front) * _beta_cf(a, b, x) / a
    return 1.0 - math.exp(log_front) * _beta_cf(b, a, 1.0 - x) / b


def t_sf(t, df):
    """P(T > t) for Student's t with ``df`` degrees of freedom."""
    if df <= 0:
        raise ValueError("degrees of freedom must be positive")
    if t == 0:
        return 0.5
    if math.isinf(t):
        return 0.0 if t > 0 else 1.0
    tail = 0.5 * betainc(0.5 * df, 0.5, df / (df + t * t))
    return tail if t > 0 else 1.0 - tail


def t_cdf(t, df):
    if t == 0:
        return 0.5
    return t_sf(-t, df)


def t_ppf(q, df):
    """Quantile of Student's t by bisection on :func:`t_cdf`."""
    if not 0 < q < 1:
        raise ValueError("quantile level must lie in (0, 1)")
    if q == 0.5:
        return 0.0
    if q < 0.5:
        return -t_ppf(1.0 - q, df)
    lo, hi = 0.0, 1.0
    while t_cdf(hi, df) < q:
        lo, hi = hi, hi * 2.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if t_cdf(mid, df) < q:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-13 * max(1.0, hi):
            break
    return 0.5 * (lo + hi)


def paired_t_one_tailed(differences, direction="greater"):
    """One-tailed paired t-test on per-dataset score differences.

    ``direction="greater"`` tests mean > 0, ``"less"`` tests mean < 0.
    With zero spread the p-value is 0 when the mean points the tested way
    and 1 otherwise. Returns ``(t, p)``.
    """
    if direction not in ("greater", "less"):
        raise ValueError("direction must be 'greater' or 'less'")
    diff = np.asarray(differences, dtype=np.float64).ravel()
    m = diff.size
    if m < 2:
        raise ValueError("a paired t-test needs at least two pairs")
    mean = float(diff.mean())
    sd = float(diff.std(ddof=1))
    if sd == 0.0:
        favoured = mean > 0 if direction == "greater" else mean < 0
        if mean == 0:
            t = 0.0
        else:
            t = math.copysign(math.inf, mean)
        return t, 0.0 if favoured else 1.0
    t = mean / (sd / math.sqrt(m))
    p = t_sf(t, m - 1) if direction == "greater" else t_cdf(t, m - 1)
    return t, p


def holm_bonferroni(p_values, alpha=0.05):
    """Step-down Holm-Bonferroni; reject flags in the input order."""
    p = np.asarray(p_values, dtype=np.float64).ravel()
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")
    if np.any((p < 0) | (p > 1)) or np.any(np.isnan(p)):
        raise ValueError("p-values must lie in [0, 1]")
    k = p.size
    reject = np.zeros(k, dtype=bool)
    for rank, i in enumerate(np.argsort(p, kind="stable")):
        if p[i] <= alpha / (k - rank):
            reject[i] = True
        else:
            break
    return reject


def mean_ci95(values):
    """Mean with a two-sided 95% t interval: ``(mean, lo, hi)``."""
    v = np.asarray(values, dtype=np.float64).ravel()
    m = v.size
    if m < 2:
        raise ValueError("a confidence interval needs at least two values")
    mean = float(v.mean())
    half = t_ppf(0.975, m - 1) * float(v.std(ddof=1)) / math.sqrt(m)
    return mean, mean - half, mean + half
