"""Structure analysis for panels of series: distances, clustering, scaling.

Two distance notions are offered: plain Euclidean distance between
aligned series, and the Piccolo distance between the fitted
autoregressive representations of two series. Distance matrices feed
PAM k-medoids clustering with silhouette diagnostics and a SMACOF
stress-majorization embedding. An augmented Dickey-Fuller test covers
the stationarity checks that decide whether series get differenced
before AR fitting.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .kernels import pam_build, pam_swap


def euclidean_distance(x: np.ndarray, y: np.ndarray) -> float:
    """Root of the summed squared gaps between two aligned series."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("series must be equal-length vectors")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise ValueError("series contain missing or non-finite values")
    return float(np.sqrt(np.sum((x - y) ** 2)))


def difference(x: np.ndarray) -> np.ndarray:
    """First difference, out_t = x_{t+1} - x_t, length T-1."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size < 2:
        raise ValueError("need a vector of at least 2 points")
    return np.diff(x)


def log_floor(values: np.ndarray) -> np.ndarray:
    """Natural log with zeros floored at the smallest positive entry.

    Preset transform for running Euclidean distances on logged panels;
    the floor keeps occasional zero observations from producing -inf.
    """
    values = np.asarray(values, dtype=float)
    if np.any(values < 0) or not np.all(np.isfinite(values)):
        raise ValueError("log transform needs nonnegative finite values")
    positive = values[values > 0]
    if positive.size == 0:
        raise ValueError("cannot log-transform all-zero values")
    return np.log(np.maximum(values, positive.min()))


@dataclass(frozen=True, eq=False)
class ARFit:
    """Autoregression chosen by AIC: order, lag coefficients, noise variance."""

    order: int
    intercept: float
    coefficients: np.ndarray
    noise_variance: float
    aic: float

    def __post_init__(self):
        coefficients = np.array(self.coefficients, dtype=float)
        if coefficients.shape != (self.order,):
            raise ValueError("coefficient count must equal the order")
        if not np.all(np.isfinite(coefficients)):
            raise ValueError("coefficients must be finite")
        if not self.noise_variance > 0:
            raise ValueError("noise variance must be positive")
        coefficients.flags.writeable = False
        object.__setattr__(self, "coefficients", coefficients)


def _ar_design(x: np.ndarray, p: int, start: int):
    """Rows t=start..T-1 (0-based) regressing x_t on an intercept and p lags."""
    T = x.size
    n = T - start
    X = np.ones((n, p + 1))
    for j in range(1, p + 1):
        X[:, j] = x[start - j : T - j]
    return X, x[start:]


def ar_fit(x: np.ndarray, max_order: int | None = None) -> ARFit:
    """Conditional least-squares AR(p) with p = 0..max_order picked by AIC.

    All candidate orders are fit on the common sample starting after
    max_order observations so their AICs are comparable; ties go to the
    smaller order. max_order defaults to min(10, T // 5).
    """
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise ValueError("series must be a vector")
    if not np.all(np.isfinite(x)):
        raise ValueError("series contains missing or non-finite values")
    T = x.size
    if max_order is None:
        max_order = min(10, T // 5)
    if max_order < 0:
        raise ValueError("max_order must be nonnegative")
    if T < max(4 * max_order, 2):
        raise ValueError(f"need at least {max(4 * max_order, 2)} points, got {T}")
    if np.ptp(x) == 0:
        raise ValueError("constant series has no autoregressive structure")
    start = max_order
    best = None
    for p in range(max_order + 1):
        X, y = _ar_design(x, p, start)
        beta, _, _, _ = np.linalg.lstsq(X, y, rcond=None)
        resid = y - X @ beta
        n = y.size
        sigma2 = float(resid @ resid) / n
        if sigma2 > 0:
            loglik = -0.5 * n * (np.log(2.0 * np.pi * sigma2) + 1.0)
        else:
            loglik = np.inf
        crit = 2.0 * (p + 2) - 2.0 * loglik  # intercept + p lags + variance
        if best is None or crit < best[0]:
            best = (crit, p, beta, sigma2)
    crit, p, beta, sigma2 = best
    if sigma2 <= 0:
        sigma2 = np.finfo(float).tiny  # exact fit, keep the invariant
    return ARFit(
        order=p,
        intercept=float(beta[0]),
        coefficients=beta[1:],
        noise_variance=sigma2,
        aic=crit,
    )


def piccolo_distance(fx: ARFit, fy: ARFit) -> float:
    """Euclidean distance between zero-padded AR coefficient vectors."""
    width = max(fx.order, fy.order)
    a = np.zeros(width)
    b = np.zeros(width)
    a[: fx.order] = fx.coefficients
    b[: fy.order] = fy.coefficients
    return float(np.sqrt(np.sum((a - b) ** 2)))


# 5% critical values for the constant-only Dickey-Fuller t-statistic by
# effective sample size, from the standard MacKinnon response-surface
# tabulation; interpolated linearly in n and clamped at the ends.
ADF_CRIT_5PCT = (
    (25, -2.9865),
    (50, -2.9214),
    (100, -2.8909),
    (250, -2.8732),
    (500, -2.8673),
    (2000, -2.8630),
)


@dataclass(frozen=True)
class ADFResult:
    """Unit-root test outcome at the 5% level."""

    statistic: float
    critical_value: float
    reject: bool
    lag_order: int
    n_effective: int


def adf_critical_value(n: int) -> float:
    """Interpolated 5% critical value for an effective sample of n."""
    sizes = np.array([row[0] for row in ADF_CRIT_5PCT], dtype=float)
    crits = np.array([row[1] for row in ADF_CRIT_5PCT])
    return float(np.interp(n, sizes, crits))


def adf_test(x: np.ndarray) -> ADFResult:
    """Augmented Dickey-Fuller test with a constant, no trend.

    Regresses the first difference on a constant, the lagged level, and
    lagged differences up to the Schwert order
    min(floor(12 * (T/100)^(1/4)), T // 4). The statistic is the t-ratio
    on the lagged level; reject means the unit-root null is rejected at
    5% against the tabulated critical value.
    """
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size < 20:
        raise ValueError("need a series of at least 20 points")
    if not np.all(np.isfinite(x)):
        raise ValueError("series contains missing or non-finite values")
    T = x.size
    p = min(int(np.floor(12.0 * (T / 100.0) ** 0.25)), T // 4)
    dx = np.diff(x)
    # Rows are t = p+1 .. T-1 in 0-based level indexing.
    y = dx[p:]
    n = y.size
    cols = [np.ones(n), x[p:-1]]
    for j in range(1, p + 1):
        cols.append(dx[p - j : p - j + n])
    X = np.column_stack(cols)
    if n <= X.shape[1]:
        raise ValueError("series too short for the selected lag order")
    beta, _, _, _ = np.linalg.lstsq(X, y, rcond=None)
    resid = y - X @ beta
    s2 = float(resid @ resid) / (n - X.shape[1])
    xtx_inv = np.linalg.inv(X.T @ X)
    se = np.sqrt(s2 * xtx_inv[1, 1])
    if se == 0:
        raise ValueError("degenerate regression: zero standard error")
    stat = float(beta[1] / se)
    crit = adf_critical_value(n)
    return ADFResult(
        statistic=stat,
        critical_value=crit,
        reject=stat < crit,
        lag_order=p,
        n_effective=n,
    )


@dataclass(frozen=True, eq=False)
class DistanceMatrix:
    """Symmetric nonnegative distances with a zero diagonal."""

    labels: tuple[str, ...]
    d: np.ndarray

    def __post_init__(self):
        d = np.array(self.d, dtype=float)
        n = len(self.labels)
        if d.shape != (n, n):
            raise ValueError("matrix shape must match the label count")
        if not np.all(np.isfinite(d)):
            raise ValueError("distances must be finite")
        if np.any(d < 0):
            raise ValueError("distances must be nonnegative")
        if np.any(np.diag(d) != 0):
            raise ValueError("diagonal must be zero")
        if not np.array_equal(d, d.T):
            raise ValueError("matrix must be symmetric")
        d.flags.writeable = False
        object.__setattr__(self, "d", d)

    def __len__(self) -> int:
        return len(self.labels)


def euclidean_distances(series: np.ndarray, labels) -> DistanceMatrix:
    """Pairwise Euclidean distance matrix over the rows of a panel."""
    series = np.asarray(series, dtype=float)
    if series.ndim != 2 or series.shape[0] != len(labels):
        raise ValueError("need one row per label")
    diff = series[:, None, :] - series[None, :, :]
    d = np.sqrt((diff**2).sum(axis=2))
    d = 0.5 * (d + d.T)
    np.fill_diagonal(d, 0.0)
    return DistanceMatrix(labels=tuple(labels), d=d)


def piccolo_distances(
    series: np.ndarray, labels, max_order: int | None = None
) -> DistanceMatrix:
    """Pairwise Piccolo distances from per-row AR fits."""
    series = np.asarray(series, dtype=float)
    if series.ndim != 2 or series.shape[0] != len(labels):
        raise ValueError("need one row per label")
    fits = [ar_fit(row, max_order) for row in series]
    n = len(fits)
    d = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            d[i, j] = d[j, i] = piccolo_distance(fits[i], fits[j])
    return DistanceMatrix(labels=tuple(labels), d=d)


@dataclass(frozen=True, eq=False)
class Clustering:
    """k-medoids partition with per-point silhouette widths."""

    k: int
    medoids: np.ndarray
    assignment: np.ndarray
    total_cost: float
    silhouette: np.ndarray

    def __post_init__(self):
        for name in ("medoids", "assignment", "silhouette"):
            a = np.array(getattr(self, name))
            a.flags.writeable = False
            object.__setattr__(self, name, a)
        if self.medoids.shape != (self.k,):
            raise ValueError("need exactly k medoids")
        for c, m in enumerate(self.medoids):
            if self.assignment[m] != c:
                raise ValueError("each medoid must sit in its own cluster")
        if np.any(np.abs(self.silhouette) > 1 + 1e-12):
            raise ValueError("silhouette widths must lie in [-1, 1]")


def silhouette_widths(d: np.ndarray, assignment: np.ndarray) -> np.ndarray:
    """Per-point silhouette (b - a) / max(a, b).

    a is the mean distance to the point's own cluster (excluding itself),
    b the smallest mean distance to any other cluster. Singleton clusters
    score 0 by convention, as do points where both means vanish.
    """
    n = d.shape[0]
    labels = np.unique(assignment)
    out = np.zeros(n)
    for i in range(n):
        own = assignment[i]
        mates = np.flatnonzero(assignment == own)
        if mates.size <= 1:
            continue
        a = d[i, mates].sum() / (mates.size - 1)
        b = np.inf
        for c in labels:
            if c == own:
                continue
            members = np.flatnonzero(assignment == c)
            b = min(b, d[i, members].mean())
        top = max(a, b)
        if top > 0 and np.isfinite(b):
            out[i] = (b - a) / top
    return out


def k_medoids(dm: DistanceMatrix, k: int, seed: int | None = None) -> Clustering:
    """PAM clustering: greedy BUILD then SWAP passes to a local optimum.

    Both phases are deterministic, so the seed argument is accepted only
    for interface stability and has no effect. The final configuration
    cannot be improved by any single medoid/non-medoid exchange.
    """
    del seed
    n = len(dm)
    if not 1 <= k <= n:
        raise ValueError(f"k must be between 1 and {n}")
    d = np.ascontiguousarray(dm.d)
    medoids = pam_build(d, k)
    medoids, cost = pam_swap(d, medoids)
    order = np.sort(medoids)
    assignment = np.argmin(d[:, order], axis=1)
    assignment[order] = np.arange(k)  # ties at 0 must keep medoids home
    sil = silhouette_widths(d, assignment)
    return Clustering(
        k=k,
        medoids=order,
        assignment=assignment,
        total_cost=float(cost),
        silhouette=sil,
    )


@dataclass(frozen=True, eq=False)
class Embedding:
    """Low-dimensional SMACOF configuration with its normalized stress."""

    coordinates: np.ndarray
    stress: float
    n_iterations: int
    stress_sequence: np.ndarray

    def __post_init__(self):
        for name in ("coordinates", "stress_sequence"):
            a = np.array(getattr(self, name), dtype=float)
            a.flags.writeable = False
            object.__setattr__(self, name, a)
        if not 0.0 <= self.stress <= 1.0:
            raise ValueError("normalized stress must lie in [0, 1]")


def _config_distances(X: np.ndarray) -> np.ndarray:
    diff = X[:, None, :] - X[None, :, :]
    return np.sqrt((diff**2).sum(axis=2))


def smacof_mds(
    dm: DistanceMatrix,
    dims: int = 2,
    seed: int = 0,
    tol: float = 1e-6,
    max_iter: int = 1000,
    n_init: int = 8,
) -> Embedding:
    """Metric MDS by SMACOF stress majorization from seeded random starts.

    Each Guttman-transform step cannot increase the raw stress, so the
    recorded normalized stress-1 sequence sqrt(sum (delta - d)^2 /
    sum delta^2) is non-increasing. Iteration stops once the relative
    stress improvement drops below tol or after max_iter steps. Every
    random start is rescaled so its initial stress is already at most 1.

    Majorization only finds a local optimum, so n_init starts are drawn
    from the one seeded generator and the lowest-stress run is returned;
    the reported stress sequence belongs to that winning run.
    """
    delta = dm.d
    n = len(dm)
    if dims < 1:
        raise ValueError("need at least one output dimension")
    if n_init < 1:
        raise ValueError("need at least one start")
    denom = float((delta**2).sum())
    if denom == 0:
        raise ValueError("all distances are zero, nothing to embed")
    rng = np.random.default_rng(seed)

    def stress1(dist):
        return float(np.sqrt(((delta - dist) ** 2).sum() / denom))

    def one_run():
        X = rng.standard_normal((n, dims))
        dx = _config_distances(X)
        scale_num = float((delta * dx).sum())
        scale_den = float((dx**2).sum())
        if scale_den > 0 and scale_num > 0:
            X *= scale_num / scale_den  # optimal scalar keeps stress-1 <= 1
            dx = _config_distances(X)
        trace = [stress1(dx)]
        for _ in range(max_iter):
            with np.errstate(divide="ignore", invalid="ignore"):
                ratio = np.where(dx > 0, delta / dx, 0.0)
            B = -ratio
            np.fill_diagonal(B, 0.0)
            np.fill_diagonal(B, -B.sum(axis=1))
            X = (B @ X) / n
            dx = _config_distances(X)
            trace.append(stress1(dx))
            prev, cur = trace[-2], trace[-1]
            if prev - cur < tol * max(prev, np.finfo(float).tiny):
                break
        return X, trace

    best_X, best_trace = one_run()
    for _ in range(n_init - 1):
        X, trace = one_run()
        if trace[-1] < best_trace[-1]:
            best_X, best_trace = X, trace
    return Embedding(
        coordinates=best_X,
        stress=best_trace[-1],
        n_iterations=len(best_trace) - 1,
        stress_sequence=np.array(best_trace),
    )
