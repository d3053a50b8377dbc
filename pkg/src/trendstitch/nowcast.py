"""Nowcasting model families and the rolling MAPE evaluation protocol.

A target series is regressed on its own lags plus the contemporaneous
predictor columns of a stitched panel. Five model kinds are supported:
the lag-only base model, the everything-in full model, forward-stepwise
AIC selection, a lasso solved by coordinate descent with a CV-chosen
penalty, and principal-component regression on the covariance matrix of
the predictor block. Evaluation slides a fixed-length training window
through the sample, refitting every kind and scoring the one-ahead
forecast at the row after the window.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import StitchedPanel, TimeAxis
from .kernels import lasso_path

SEASONAL_LAG = 12

BASE_KIND = "base"
KNOWN_KINDS = ("base", "full", "stepwise", "lasso", "pca1", "pca2")


class RankDeficientError(ValueError):
    """Design matrix is rank deficient to machine precision."""


@dataclass(frozen=True, eq=False)
class TargetSeries:
    """Economic series to be nowcast, aligned to a monthly axis.

    seasonal controls whether the y_{t-12} lag term enters every design;
    a seasonal target therefore needs at least 14 periods.
    """

    axis: TimeAxis
    values: np.ndarray
    seasonal: bool = False
    name: str = "target"

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != (len(self.axis),):
            raise ValueError("target length must match the axis")
        if not np.all(np.isfinite(values)):
            raise ValueError("target series has missing or non-finite values")
        if self.seasonal and len(self.axis) < SEASONAL_LAG + 2:
            raise ValueError("seasonal target needs at least 14 periods")
        object.__setattr__(self, "values", _readonly(values))


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class DesignMatrix:
    """Stacked regression rows: intercept, lag terms, then predictors.

    Row r corresponds to 1-based period t_index[r]; slicing a window is a
    plain row subset. n_base counts the always-included columns
    (intercept plus lags).
    """

    columns: tuple[str, ...]
    X: np.ndarray
    t_index: np.ndarray
    n_base: int

    def __post_init__(self):
        X = np.asarray(self.X, dtype=float)
        t_index = np.asarray(self.t_index, dtype=np.int64)
        if X.ndim != 2 or X.shape[1] != len(self.columns):
            raise ValueError("X shape must match the column list")
        if t_index.shape != (X.shape[0],):
            raise ValueError("t_index must have one entry per row")
        if not 1 <= self.n_base <= len(self.columns):
            raise ValueError("n_base out of range")
        object.__setattr__(self, "X", _readonly(X))
        object.__setattr__(self, "t_index", _readonly(t_index))

    @property
    def n_predictors(self) -> int:
        return len(self.columns) - self.n_base

    def rows(self, sel: np.ndarray) -> np.ndarray:
        return self.X[sel]


def start_offset(seasonal: bool) -> int:
    """First 1-based period with all required lags available."""
    return SEASONAL_LAG + 1 if seasonal else 2


def build_design(
    panel: StitchedPanel,
    target: TargetSeries,
    difference: bool = False,
    log_transform: bool = False,
) -> tuple[DesignMatrix, np.ndarray]:
    """Assemble the full design and the aligned target vector.

    Rows run from the first period where every lag exists (t=2, or t=13
    with the seasonal term) through T. Predictor columns come from the
    panel; log_transform takes logs first (zeros floored at the smallest
    positive panel value) and difference replaces g_t by g_t - g_{t-1}.
    Returns (design, y) with y[r] the target at the row's own period.
    """
    if panel.axis.periods != target.axis.periods:
        raise ValueError("panel and target must share the same time axis")
    T = len(target.axis)
    g = np.array(panel.values, dtype=float)
    if np.isnan(g).any():
        raise ValueError("panel has missing cells inside the design range")
    if log_transform:
        positive = g[g > 0]
        if positive.size == 0:
            raise ValueError("cannot log-transform an all-zero panel")
        g = np.log(np.maximum(g, positive.min()))
    if difference:
        g = np.diff(g, axis=1)  # column for period t holds g_t - g_{t-1}, t >= 2
    start = start_offset(target.seasonal)
    ts = np.arange(start, T + 1)
    y = target.values[ts - 1]
    cols = [np.ones(ts.size), target.values[ts - 2]]
    names = ["intercept", "y_lag1"]
    if target.seasonal:
        cols.append(target.values[ts - 1 - SEASONAL_LAG])
        names.append("y_lag12")
    n_base = len(cols)
    for i, item in enumerate(panel.items):
        if difference:
            cols.append(g[i, ts - 2])  # diff array index t-2 holds g_t - g_{t-1}
        else:
            cols.append(g[i, ts - 1])
        names.append(item)
    design = DesignMatrix(
        columns=tuple(names),
        X=np.column_stack(cols),
        t_index=ts,
        n_base=n_base,
    )
    return design, y


@dataclass(frozen=True, eq=False)
class OLSFit:
    """Least-squares solution with the Gaussian ML quantities AIC needs."""

    coefficients: np.ndarray
    sse: float
    residual_variance: float
    log_likelihood: float

    def __post_init__(self):
        object.__setattr__(self, "coefficients", _readonly(self.coefficients))


def ols_fit(
    X: np.ndarray,
    y: np.ndarray,
    column_names: tuple[str, ...] | None = None,
    allow_singular: bool = False,
) -> OLSFit:
    """Fit least squares and return coefficients, SSE, ML variance, logL.

    Rejects rank-deficient designs (naming the offending columns) unless
    allow_singular is set, in which case the minimum-norm solution is
    returned; the over-parameterized full model relies on that escape
    hatch. The log-likelihood uses the ML variance SSE/n.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    n, p = X.shape
    if column_names is None:
        column_names = tuple(f"x{j}" for j in range(p))
    if not allow_singular:
        if n < p:
            raise RankDeficientError(
                f"{n} rows cannot identify {p} columns (need rows >= columns)"
            )
        r_diag = np.abs(np.diag(np.linalg.qr(X, mode="r")))
        if r_diag.size:
            # Per-column scale: a column is dependent when elimination of
            # the ones before it removes essentially all of its norm.
            tols = np.linalg.norm(X, axis=0) * max(n, p) * np.finfo(float).eps
            bad = [column_names[j] for j in range(p) if r_diag[j] <= tols[j]]
            if bad:
                raise RankDeficientError(
                    f"rank-deficient design, offending columns: {bad}"
                )
    beta, _, _, _ = np.linalg.lstsq(X, y, rcond=None)
    resid = y - X @ beta
    sse = float(resid @ resid)
    sigma2 = sse / n
    if sigma2 > 0:
        log_likelihood = -0.5 * n * (np.log(2.0 * np.pi * sigma2) + 1.0)
    else:
        log_likelihood = np.inf  # interpolating fit
    return OLSFit(
        coefficients=beta,
        sse=sse,
        residual_variance=sigma2,
        log_likelihood=log_likelihood,
    )


def aic(k: int, log_likelihood: float) -> float:
    """Akaike information criterion, 2k - 2*logL. Lower is better."""
    if k < 1:
        raise ValueError("parameter count must be at least 1")
    return 2.0 * k - 2.0 * log_likelihood


def _aic_of(fit: OLSFit) -> float:
    # k counts regression coefficients plus the variance parameter.
    return aic(len(fit.coefficients) + 1, fit.log_likelihood)


@dataclass(frozen=True, eq=False)
class NowcastModelFit:
    """One fitted model kind on one training window.

    coefficients align with column_names. For pca kinds the stored
    loadings and centers transform raw predictor rows into the component
    scores the coefficients expect; for stepwise, selected_idx are the
    chosen predictor positions within the design's predictor block.
    """

    kind: str
    column_names: tuple[str, ...]
    coefficients: np.ndarray
    n_base: int
    sse: float
    residual_variance: float
    log_likelihood: float
    aic: float
    window: tuple[int, int]
    selected: tuple[str, ...] = ()
    selected_idx: tuple[int, ...] = ()
    chosen_lambda: float = float("nan")
    cv_curve: np.ndarray | None = None
    k_components: int = 0
    loadings: np.ndarray | None = None
    centers: np.ndarray | None = None
    degenerate: bool = False

    def __post_init__(self):
        object.__setattr__(self, "coefficients", _readonly(self.coefficients))
        if self.cv_curve is not None:
            object.__setattr__(self, "cv_curve", _readonly(self.cv_curve))
        if self.loadings is not None:
            object.__setattr__(self, "loadings", _readonly(self.loadings))
        if self.centers is not None:
            object.__setattr__(self, "centers", _readonly(self.centers))

    def predict(self, X: np.ndarray) -> np.ndarray:
        """Forecast for raw design rows laid out like the training design."""
        X = np.atleast_2d(np.asarray(X, dtype=float))
        base = X[:, : self.n_base]
        G = X[:, self.n_base :]
        if self.degenerate:
            Z = X[:, :1]  # intercept only
        elif self.k_components:
            scores = (G - self.centers) @ self.loadings
            Z = np.column_stack([base, scores])
        elif self.kind == "stepwise":
            Z = np.column_stack([base, G[:, list(self.selected_idx)]])
        elif self.kind == BASE_KIND:
            Z = base
        else:
            Z = X
        return Z @ self.coefficients


def _make_fit(kind, names, ols, window, n_base, **extra) -> NowcastModelFit:
    return NowcastModelFit(
        kind=kind,
        column_names=tuple(names),
        coefficients=ols.coefficients,
        n_base=n_base,
        sse=ols.sse,
        residual_variance=ols.residual_variance,
        log_likelihood=ols.log_likelihood,
        aic=_aic_of(ols),
        window=window,
        **extra,
    )


def fit_base(design: DesignMatrix, y: np.ndarray, window=(0, 0)) -> NowcastModelFit:
    """Lag-only autoregressive baseline."""
    names = design.columns[: design.n_base]
    try:
        ols = ols_fit(design.X[:, : design.n_base], y, names)
        return _make_fit(BASE_KIND, names, ols, window, design.n_base)
    except RankDeficientError:
        # Constant target window: lags are useless, keep the intercept.
        ols = ols_fit(design.X[:, :1], y, ("intercept",))
        return _make_fit(
            BASE_KIND, ("intercept",), ols, window, design.n_base, degenerate=True
        )


def fit_full(design: DesignMatrix, y: np.ndarray, window=(0, 0)) -> NowcastModelFit:
    """All predictors at once; minimum-norm solution when over-parameterized."""
    ols = ols_fit(design.X, y, design.columns, allow_singular=True)
    return _make_fit("full", design.columns, ols, window, design.n_base)


def forward_stepwise(
    design: DesignMatrix, y: np.ndarray, window=(0, 0)
) -> NowcastModelFit:
    """Greedy AIC-forward selection over the predictor columns.

    Base columns are always kept. Each round refits with every remaining
    candidate and adds the one with the lowest AIC, provided it strictly
    improves on the current model; candidates that leave the design rank
    deficient are skipped. Ties resolve to the earliest column.
    """
    n_base = design.n_base
    base_X = design.X[:, :n_base]
    current_cols: list[int] = []
    current = ols_fit(base_X, y, design.columns[:n_base])
    current_aic = _aic_of(current)
    n_pred = design.n_predictors
    remaining = list(range(n_pred))
    while remaining:
        best_aic = current_aic
        best_c = -1
        best_fit = None
        for c in remaining:
            cols = current_cols + [c]
            Xc = np.column_stack([base_X, design.X[:, [n_base + j for j in cols]]])
            try:
                cand = ols_fit(Xc, y)
            except RankDeficientError:
                continue
            cand_aic = _aic_of(cand)
            if cand_aic < best_aic:
                best_aic = cand_aic
                best_c = c
                best_fit = cand
        if best_c < 0:
            break
        current_cols.append(best_c)
        remaining.remove(best_c)
        current = best_fit
        current_aic = best_aic
    picked = tuple(design.columns[n_base + j] for j in current_cols)
    names = design.columns[:n_base] + picked
    return _make_fit(
        "stepwise",
        names,
        current,
        window,
        n_base,
        selected=picked,
        selected_idx=tuple(current_cols),
    )


def _lambda_grid(lambda_max: float, n_lambdas: int, min_ratio: float) -> np.ndarray:
    if lambda_max <= 0:
        return np.zeros(1)
    return np.geomspace(lambda_max, lambda_max * min_ratio, n_lambdas)


def _standardize(X: np.ndarray):
    """Center/scale all columns but the leading intercept; constant columns
    keep scale 1 so they zero out after centering."""
    means = X.mean(axis=0)
    sds = X.std(axis=0)
    means[0] = 0.0
    sds[0] = 1.0
    sds[sds == 0] = 1.0
    return (X - means) / sds, means, sds


def _to_original_scale(coefs: np.ndarray, means: np.ndarray, sds: np.ndarray):
    out = coefs / sds
    out[..., 0] = coefs[..., 0] - (coefs[..., 1:] * (means[1:] / sds[1:])).sum(axis=-1)
    return out


def lasso_fit(
    design: DesignMatrix,
    y: np.ndarray,
    folds: int = 10,
    n_lambdas: int = 100,
    lambda_min_ratio: float = 1e-4,
    window=(0, 0),
    tol: float = 1e-7,
    max_iter: int = 10000,
) -> NowcastModelFit:
    """Coordinate-descent lasso with the penalty chosen by blocked CV.

    Solves min SSE + lambda * sum |beta_j| over the predictor columns
    (intercept and lag columns stay unpenalized) down a log-spaced grid of
    100 lambdas from lambda_max, the smallest value that zeroes every
    penalized coefficient. Columns are standardized internally and the
    coefficients mapped back. Cross-validation splits the window into
    contiguous blocks, respecting serial order; the grid value with the
    smallest pooled squared error wins (first minimum on ties). The final
    fit uses all rows at the chosen lambda. tol is relative to the
    centered sum of squares of y (see kernels.lasso_path).
    """
    X = design.X
    n, p = X.shape
    if n < folds:
        raise ValueError(f"window of {n} rows cannot be split into {folds} folds")
    penalized = np.zeros(p, dtype=bool)
    penalized[design.n_base :] = True

    Z, means, sds = _standardize(X)
    unpen = Z[:, ~penalized]
    beta_u, *_ = np.linalg.lstsq(unpen, y, rcond=None)
    r0 = y - unpen @ beta_u
    lam_max = 2.0 * np.abs(Z[:, penalized].T @ r0).max() if penalized.any() else 0.0
    grid = _lambda_grid(lam_max, n_lambdas, lambda_min_ratio)

    blocks = np.array_split(np.arange(n), folds)
    sq_err = np.zeros(grid.size)
    for held in blocks:
        keep = np.setdiff1d(np.arange(n), held)
        Zt, mt, st = _standardize(X[keep])
        path = lasso_path(
            np.ascontiguousarray(Zt), y[keep].copy(), grid, penalized, max_iter, tol
        )
        coefs = _to_original_scale(path, mt, st)
        preds = X[held] @ coefs.T
        sq_err += ((y[held][:, None] - preds) ** 2).sum(axis=0)
    cv_mse = sq_err / n
    best = int(np.argmin(cv_mse))

    path = lasso_path(np.ascontiguousarray(Z), y.copy(), grid, penalized, max_iter, tol)
    coefs = _to_original_scale(path, means, sds)[best]
    resid = y - X @ coefs
    sse = float(resid @ resid)
    sigma2 = sse / n
    loglik = -0.5 * n * (np.log(2.0 * np.pi * sigma2) + 1.0) if sigma2 > 0 else np.inf
    n_active = int(np.count_nonzero(coefs[penalized])) + design.n_base
    return NowcastModelFit(
        kind="lasso",
        column_names=design.columns,
        coefficients=coefs,
        n_base=design.n_base,
        sse=sse,
        residual_variance=sigma2,
        log_likelihood=loglik,
        aic=aic(n_active + 1, loglik),
        window=window,
        chosen_lambda=float(grid[best]),
        cv_curve=np.column_stack([grid, cv_mse]),
    )


@dataclass(frozen=True, eq=False)
class PCAResult:
    """Covariance-PCA output: loadings, centered-data scores, eigenvalues."""

    loadings: np.ndarray
    scores: np.ndarray
    eigenvalues: np.ndarray
    centers: np.ndarray

    def __post_init__(self):
        for name in ("loadings", "scores", "eigenvalues", "centers"):
            object.__setattr__(self, name, _readonly(getattr(self, name)))


def pca_components(G: np.ndarray, k: int) -> PCAResult:
    """Top-k eigenpairs of the covariance matrix of the predictor block.

    Columns are mean-centered (centers stored for out-of-sample reuse),
    the covariance uses the n-1 divisor, eigenvectors are sorted by
    descending eigenvalue, and each is signed so its largest-magnitude
    entry is positive. k beyond the numerical rank is an error.
    """
    G = np.asarray(G, dtype=float)
    if G.ndim != 2 or G.shape[0] < 2:
        raise ValueError("predictor block needs at least 2 rows")
    if not 1 <= k <= min(G.shape):
        raise ValueError("k must be between 1 and min(rows, columns)")
    centers = G.mean(axis=0)
    centered = G - centers
    cov = (centered.T @ centered) / (G.shape[0] - 1)
    eigvals, eigvecs = np.linalg.eigh(cov)
    order = np.argsort(eigvals)[::-1]
    eigvals = eigvals[order]
    eigvecs = eigvecs[:, order]
    rank = int(np.sum(eigvals > max(eigvals[0], 0.0) * 1e-10)) if eigvals[0] > 0 else 0
    if k > rank:
        raise ValueError(f"k={k} exceeds numerical rank {rank} of the block")
    loadings = eigvecs[:, :k]
    flip = loadings[np.argmax(np.abs(loadings), axis=0), np.arange(k)] < 0
    loadings = np.where(flip, -loadings, loadings)
    scores = centered @ loadings
    return PCAResult(
        loadings=loadings,
        scores=scores,
        eigenvalues=eigvals[:k],
        centers=centers,
    )


def pca_regression(
    design: DesignMatrix, y: np.ndarray, k: int, window=(0, 0)
) -> NowcastModelFit:
    """Regress on the base columns plus the top-k component scores."""
    pca = pca_components(design.X[:, design.n_base :], k)
    names = design.columns[: design.n_base] + tuple(f"pc{i + 1}" for i in range(k))
    Z = np.column_stack([design.X[:, : design.n_base], pca.scores])
    ols = ols_fit(Z, y, names)
    return _make_fit(
        f"pca{k}",
        names,
        ols,
        window,
        design.n_base,
        k_components=k,
        loadings=pca.loadings,
        centers=pca.centers,
    )


def mape(y: np.ndarray, yhat: np.ndarray) -> float:
    """Mean absolute percentage error, (100/n) * sum |y - yhat| / |y|."""
    y = np.asarray(y, dtype=float)
    yhat = np.asarray(yhat, dtype=float)
    if y.shape != yhat.shape or y.ndim != 1 or y.size == 0:
        raise ValueError("inputs must be equal-length nonempty vectors")
    if np.any(y == 0):
        raise ValueError("MAPE undefined: actuals contain zero")
    return float(100.0 * np.mean(np.abs(y - yhat) / np.abs(y)))


def fit_kind(kind: str, design: DesignMatrix, y, window, folds=10) -> NowcastModelFit:
    """Dispatch a model kind on an already-sliced training design."""
    if kind == BASE_KIND:
        return fit_base(design, y, window)
    if kind == "full":
        return fit_full(design, y, window)
    if kind == "stepwise":
        return forward_stepwise(design, y, window)
    if kind == "lasso":
        return lasso_fit(design, y, folds=folds, window=window)
    if kind.startswith("pca"):
        return pca_regression(design, y, int(kind[3:]), window)
    raise ValueError(f"unknown model kind {kind!r}")


@dataclass(frozen=True, eq=False)
class EvaluationReport:
    """Rolling-protocol results for one target and one window length.

    forecasts[k, w] is kind k's one-ahead prediction for window w, whose
    actual sits in actuals[w]. Averaged MAPEs and deltas against the base
    kind come from the accessor methods.
    """

    target_name: str
    window_length: int
    kinds: tuple[str, ...]
    window_starts: np.ndarray
    actuals: np.ndarray
    forecasts: np.ndarray
    in_sample_mape_per_window: np.ndarray
    in_sample_sse_per_window: np.ndarray
    degenerate: np.ndarray

    def __post_init__(self):
        for name in (
            "window_starts",
            "actuals",
            "forecasts",
            "in_sample_mape_per_window",
            "in_sample_sse_per_window",
            "degenerate",
        ):
            object.__setattr__(self, name, _readonly(getattr(self, name)))

    def _row(self, kind: str) -> int:
        try:
            return self.kinds.index(kind)
        except ValueError:
            raise KeyError(f"kind {kind!r} not evaluated") from None

    def in_sample_mape(self, kind: str) -> float:
        return float(self.in_sample_mape_per_window[self._row(kind)].mean())

    def out_sample_mape(self, kind: str) -> float:
        return mape(self.actuals, self.forecasts[self._row(kind)])

    def delta_in(self, kind: str) -> float:
        return self.in_sample_mape(kind) - self.in_sample_mape(BASE_KIND)

    def delta_out(self, kind: str) -> float:
        return self.out_sample_mape(kind) - self.out_sample_mape(BASE_KIND)


def rolling_evaluate(
    panel: StitchedPanel,
    target: TargetSeries,
    window_length: int,
    kinds: tuple[str, ...] = KNOWN_KINDS,
    folds: int = 10,
    difference: bool = False,
    log_transform: bool = False,
) -> EvaluationReport:
    """Slide a P-row training window through the sample and score forecasts.

    Window starts t run from the first lag-complete period (2, or 13 for
    seasonal targets) through T - P; each window fits every kind on rows
    [t, t+P-1] and forecasts the row at t+P. Fits never see rows beyond
    the window, so the evaluation is free of lookahead. In-sample MAPE
    and SSE are recorded per window; out-of-sample MAPE pools the
    one-ahead forecasts. Degenerate (constant-target) windows collapse
    every kind to an intercept-only fit and are flagged.
    """
    kinds = tuple(kinds)
    if BASE_KIND not in kinds:
        kinds = (BASE_KIND,) + kinds
    for kind in kinds:
        if kind not in KNOWN_KINDS:
            raise ValueError(f"unknown model kind {kind!r}")
    design, y = build_design(panel, target, difference, log_transform)
    start = start_offset(target.seasonal)
    T = len(target.axis)
    P = window_length
    if P < 3:
        raise ValueError("window length must be at least 3")
    last_start = T - P
    if last_start < start:
        raise ValueError(
            f"need T >= P + {start} for at least one window (T={T}, P={P})"
        )
    starts = np.arange(start, last_start + 1)
    W, K = starts.size, len(kinds)
    forecasts = np.empty((K, W))
    mape_in = np.empty((K, W))
    sse_in = np.empty((K, W))
    actuals = np.empty(W)
    degenerate = np.zeros(W, dtype=bool)
    for w, t in enumerate(starts):
        lo = t - start
        rows = slice(lo, lo + P)
        sub = DesignMatrix(
            columns=design.columns,
            X=design.X[rows],
            t_index=design.t_index[rows],
            n_base=design.n_base,
        )
        y_win = y[rows]
        fc_row = design.X[lo + P]
        actuals[w] = y[lo + P]
        base_fit = fit_base(sub, y_win, (t, t + P - 1))
        if base_fit.degenerate:
            degenerate[w] = True
        for ki, kind in enumerate(kinds):
            if degenerate[w]:
                fit = base_fit if kind == BASE_KIND else _degenerate_as(kind, base_fit)
            elif kind == BASE_KIND:
                fit = base_fit
            else:
                fit = fit_kind(kind, sub, y_win, (t, t + P - 1), folds=folds)
            forecasts[ki, w] = fit.predict(fc_row)[0]
            mape_in[ki, w] = mape(y_win, fit.predict(sub.X))
            sse_in[ki, w] = fit.sse
    return EvaluationReport(
        target_name=target.name,
        window_length=P,
        kinds=kinds,
        window_starts=starts,
        actuals=actuals,
        forecasts=forecasts,
        in_sample_mape_per_window=mape_in,
        in_sample_sse_per_window=sse_in,
        degenerate=degenerate,
    )


def _degenerate_as(kind: str, base_fit: NowcastModelFit) -> NowcastModelFit:
    """Relabel the intercept-only fallback for a non-base kind."""
    return NowcastModelFit(
        kind=kind,
        column_names=base_fit.column_names,
        coefficients=base_fit.coefficients,
        n_base=base_fit.n_base,
        sse=base_fit.sse,
        residual_variance=base_fit.residual_variance,
        log_likelihood=base_fit.log_likelihood,
        aic=base_fit.aic,
        window=base_fit.window,
        degenerate=True,
    )
