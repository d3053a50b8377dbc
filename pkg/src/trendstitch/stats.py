"""Correlation battery: Pearson, lagged, and partial correlations, plus
the exact binomial sign test over correlation-sign counts.

P-values for the correlation statistics use the Fisher z transform with
a two-sided normal tail, z = atanh(r) * sqrt(n - 3); a t-based variant
exists but the normal form is the standard construction and is the one
validated against the frozen reference values in the tests. Partial
correlations lose one more degree of freedom for the controlled
variable, so their z uses sqrt(n - 4).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class CorrelationResult:
    """Correlation with its sample size and two-sided p-value."""

    r: float
    n: int
    p_value: float

    def __post_init__(self):
        if not -1.0 <= self.r <= 1.0:
            raise ValueError("correlation must lie in [-1, 1]")
        if not 0.0 <= self.p_value <= 1.0:
            raise ValueError("p-value must lie in [0, 1]")


def fisher_p_value(r: float, n: int, controls: int = 0) -> float:
    """Two-sided normal-tail p-value for r via the Fisher transform.

    controls counts conditioned-out variables; each one removes a degree
    of freedom from the usual n - 3.
    """
    dof = n - 3 - controls
    if dof <= 0:
        raise ValueError("sample too small for the Fisher transform")
    if abs(r) >= 1.0:
        return 0.0
    z = math.atanh(r) * math.sqrt(dof)
    return math.erfc(abs(z) / math.sqrt(2.0))


def _clean_pair(x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("series must be equal-length vectors")
    if x.size < 4:
        raise ValueError("need at least 4 observations")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise ValueError("series contain missing or non-finite values")
    if np.ptp(x) == 0 or np.ptp(y) == 0:
        raise ValueError("constant series has no defined correlation")
    return x, y


def _pearson_r(x: np.ndarray, y: np.ndarray) -> float:
    xc = x - x.mean()
    yc = y - y.mean()
    r = float((xc @ yc) / math.sqrt((xc @ xc) * (yc @ yc)))
    return min(1.0, max(-1.0, r))


def pearson(x, y) -> CorrelationResult:
    """Product-moment correlation with a Fisher-transform p-value."""
    x, y = _clean_pair(x, y)
    r = _pearson_r(x, y)
    return CorrelationResult(r=r, n=x.size, p_value=fisher_p_value(r, x.size))


def cross_correlation(x, y, lag: int) -> CorrelationResult:
    """Correlation of x_t with y_{t+lag} over the overlapping sample.

    A positive lag shifts the first series forward: it pairs today's x
    with y lag periods later, so positive lags measure the second series
    lagging the first. cross_correlation(x, y, 0) equals pearson(x, y).

    >>> x = [0.0, 1.0, -1.0, 2.0, 0.5, -0.5, 1.5, 0.25]
    >>> y = [9.9, 9.9, 9.9] + x[:-3]    # y trails x by three periods
    >>> round(cross_correlation(x, y, 3).r, 12)
    1.0
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.ndim != 1 or y.ndim != 1:
        raise ValueError("series must be vectors")
    lo = max(0, -lag)
    hi = min(x.size, y.size - lag)
    if hi - lo < 4:
        raise ValueError("overlap after shifting must be at least 4 points")
    return pearson(x[lo:hi], y[lo + lag : hi + lag])


def partial_correlation(x, y, z) -> CorrelationResult:
    """Correlation of x and y after controlling for z.

    Uses the first-order recursion on the three pairwise correlations;
    the p-value runs the Fisher transform on n - 4 degrees of freedom to
    account for the controlled variable.
    """
    x, y = _clean_pair(x, y)
    _, z = _clean_pair(x, z)
    r_xy = _pearson_r(x, y)
    r_xz = _pearson_r(x, z)
    r_yz = _pearson_r(y, z)
    if abs(r_xz) >= 1.0 or abs(r_yz) >= 1.0:
        raise ValueError("control series is collinear with an input")
    r = (r_xy - r_xz * r_yz) / math.sqrt((1 - r_xz**2) * (1 - r_yz**2))
    r = min(1.0, max(-1.0, r))
    return CorrelationResult(
        r=r, n=x.size, p_value=fisher_p_value(r, x.size, controls=1)
    )


def rank_values(x) -> np.ndarray:
    """Ranks 1..n with ties sharing their average rank."""
    x = np.asarray(x, dtype=float)
    order = np.argsort(x, kind="stable")
    ranks = np.empty(x.size, dtype=float)
    ranks[order] = np.arange(1, x.size + 1, dtype=float)
    for v in np.unique(x):
        tied = x == v
        if tied.sum() > 1:
            ranks[tied] = ranks[tied].mean()
    return ranks


def spearman(x, y) -> float:
    """Spearman rank correlation: Pearson r on average ranks."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1 or x.size < 2:
        raise ValueError("series must be equal-length vectors of length >= 2")
    return _pearson_r(rank_values(x), rank_values(y))


@dataclass(frozen=True)
class SignTestResult:
    """Two-sided binomial sign test outcome."""

    k: int
    n: int
    p_value: float

    def __post_init__(self):
        if not 0 <= self.k <= self.n:
            raise ValueError("k must lie in [0, n]")
        if not 0.0 <= self.p_value <= 1.0:
            raise ValueError("p-value must lie in [0, 1]")


def _binom_cdf_half(n: int, k: int) -> float:
    """P(X <= k) for X ~ Binomial(n, 1/2) by exact log-term summation."""
    log_half_n = -n * math.log(2.0)
    total = 0.0
    for i in range(k + 1):
        log_c = math.lgamma(n + 1) - math.lgamma(i + 1) - math.lgamma(n - i + 1)
        total += math.exp(log_c + log_half_n)
    return min(total, 1.0)


def sign_binomial_test(k: int, n: int) -> SignTestResult:
    """Exact two-sided sign test against Binomial(n, 1/2).

    p = 2 P(X <= k) when k is in the lower half, 2 P(X >= k) otherwise,
    capped at 1. Tails are summed exactly from log-binomial terms rather
    than a normal approximation, which matters far out in the tail.
    """
    if n < 1:
        raise ValueError("need at least one trial")
    if not 0 <= k <= n:
        raise ValueError("k must lie in [0, n]")
    if 2 * k <= n:
        p = 2.0 * _binom_cdf_half(n, k)
    else:
        p = 2.0 * (1.0 - _binom_cdf_half(n, k - 1))
    return SignTestResult(k=k, n=n, p_value=min(p, 1.0))
