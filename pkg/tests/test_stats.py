import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mctree.stats import (
    accuracy,
    betainc,
    holm_bonferroni,
    mean_ci95,
    paired_t_one_tailed,
    t_cdf,
    t_ppf,
    t_sf,
)


def test_accuracy_examples():
    assert accuracy([1, 2, 3], [1, 2, 3]) == 1.0
    assert accuracy([1, 2], [2, 1]) == 0.0
    assert accuracy([0, 1, 1, 0], [0, 1, 0, 0]) == 0.75
    with pytest.raises(ValueError):
        accuracy([], [])
    with pytest.raises(ValueError):
        accuracy([1], [1, 2])


def test_paired_t_examples():
    assert paired_t_one_tailed([1, -1, 1, -1]) == (0.0, 0.5)
    t, p = paired_t_one_tailed([2, 1, 3, 2, 2])
    assert t == pytest.approx(6.324555320336759, rel=1e-12)
    # frozen from a 10^6-step Simpson integration of the t_4 density
    assert p == pytest.approx(0.0015991010761675084, rel=1e-9)
    t, p = paired_t_one_tailed([2, 1, 3, 2, 2], "less")
    assert p == pytest.approx(1 - 0.0015991010761675084, rel=1e-9)


def test_paired_t_degenerate():
    assert paired_t_one_tailed([1, 1, 1])[1] == 0.0
    assert paired_t_one_tailed([1, 1, 1], "less")[1] == 1.0
    assert paired_t_one_tailed([0, 0, 0])[1] == 1.0
    with pytest.raises(ValueError):
        paired_t_one_tailed([1.0])
    with pytest.raises(ValueError):
        paired_t_one_tailed([1.0, 2.0], "sideways")


def test_holm_examples():
    assert holm_bonferroni([0.01, 0.04, 0.03], 0.05).tolist() == [True, False, False]
    assert holm_bonferroni([0.5] * 4).tolist() == [False] * 4
    assert holm_bonferroni([0.001] * 7).tolist() == [True] * 7
    with pytest.raises(ValueError):
        holm_bonferroni([0.2, 1.5])


@given(st.floats(0, 1), st.floats(0.001, 0.5))
def test_holm_single_hypothesis(p, alpha):
    assert holm_bonferroni([p], alpha).tolist() == [p <= alpha]


@given(st.lists(st.floats(0, 1), min_size=1, max_size=10), st.floats(0.001, 0.5), st.floats(0.0, 0.4))
def test_holm_monotone_in_alpha(ps, alpha, extra):
    lo = holm_bonferroni(ps, alpha)
    hi = holm_bonferroni(ps, alpha + extra)
    assert all(h or not l for l, h in zip(lo, hi))


def test_mean_ci95_examples():
    assert mean_ci95([3.0, 3.0, 3.0]) == (3.0, 3.0, 3.0)
    mean, lo, hi = mean_ci95([0, 2])
    assert mean == 1.0
    assert hi - mean == pytest.approx(12.70620473617464, rel=1e-9)
    assert mean - lo == pytest.approx(12.70620473617464, rel=1e-9)
    with pytest.raises(ValueError):
        mean_ci95([1.0])


def test_mean_ci95_shrinks_with_sample_size():
    rng = np.random.default_rng(0)
    x = rng.normal(size=6400)
    w = [np.subtract(*mean_ci95(x[:m])[2:0:-1]) for m in (100, 400, 1600, 6400)]
    ratios = np.array(w[:-1]) / np.array(w[1:])
    assert np.all(np.abs(ratios - 2) < 0.35)


def test_t_cdf_symmetry_and_center():
    for df in (1, 2, 7, 30):
        assert t_cdf(0.0, df) == 0.5
        for t in (0.3, 1.7, 5.0):
            assert t_cdf(-t, df) == pytest.approx(1 - t_cdf(t, df), abs=1e-15)
            assert t_sf(t, df) == pytest.approx(1 - t_cdf(t, df), abs=1e-15)
    assert t_sf(math.inf, 3) == 0.0 and t_cdf(-math.inf, 3) == 0.0


def test_t_ppf_inverts_cdf():
    assert t_ppf(0.975, 1) == pytest.approx(12.70620473617464, rel=1e-10)
    for df in (1, 3, 10, 29):
        for q in (0.05, 0.5, 0.9, 0.999):
            assert t_cdf(t_ppf(q, df), df) == pytest.approx(q, abs=1e-12)


def test_betainc_closed_forms():
    # I_x(1, b) = 1 - (1 - x)^b and I_x(a, 1) = x^a
    for x in (0.0, 0.1, 0.5, 0.93, 1.0):
        assert betainc(1.0, 3.5, x) == pytest.approx(1 - (1 - x) ** 3.5, abs=1e-14)
        assert betainc(2.5, 1.0, x) == pytest.approx(x ** 2.5, abs=1e-14)


def _density(t, df):
    c = math.lgamma((df + 1) / 2) - math.lgamma(df / 2) - 0.5 * math.log(df * math.pi)
    return np.exp(c - (df + 1) / 2 * np.log1p(t * t / df))


@pytest.mark.parametrize("df", range(1, 31))
def test_t_cdf_matches_numeric_integration(df):
    steps = 1_000_000
    grid = np.linspace(0.0, 8.0, steps + 1)
    f = _density(grid, df)
    h = grid[1] - grid[0]
    cum = np.concatenate([[0.0], np.cumsum((f[1:] + f[:-1]) * (h / 2))])
    ts = np.linspace(0.5, 8.0, 16)
    idx = np.rint(ts / h).astype(int)
    for t, i in zip(ts, idx):
        want = 0.5 + cum[i]
        assert t_cdf(t, df) == pytest.approx(want, abs=1e-6)
        assert t_cdf(-t, df) == pytest.approx(1 - want, abs=1e-6)


@settings(max_examples=100)
@given(st.floats(-50, 50), st.floats(-50, 50), st.integers(1, 100))
def test_t_cdf_monotone(a, b, df):
    lo, hi = sorted((a, b))
    assert t_cdf(lo, df) <= t_cdf(hi, df)
