import numpy as np
import pytest

from trendstitch import (
    DesignMatrix,
    OLSFit,
    RankDeficientError,
    StitchedPanel,
    TargetSeries,
    TimeAxis,
    aic,
    build_design,
    fit_base,
    fit_full,
    forward_stepwise,
    lasso_fit,
    mape,
    month_range,
    ols_fit,
    pca_components,
    pca_regression,
    rolling_evaluate,
    start_offset,
)


def axis(T, start="2010-01"):
    return TimeAxis(month_range(start, T))


def noise_panel(n, T, seed=0, scale=1.0):
    rng = np.random.default_rng(seed)
    vals = 50.0 + scale * rng.normal(size=(n, T)).cumsum(axis=1)
    vals = np.maximum(vals, 0.1)
    return StitchedPanel(
        items=tuple(f"g{i}" for i in range(n)), axis=axis(T), values=vals
    )


def manual_design(n_rows, n_pred, seed=0, n_base=2):
    rng = np.random.default_rng(seed)
    cols = [np.ones(n_rows), rng.normal(size=n_rows)]
    names = ["intercept", "y_lag1"]
    for i in range(n_pred):
        cols.append(rng.normal(size=n_rows))
        names.append(f"g{i}")
    return DesignMatrix(
        columns=tuple(names),
        X=np.column_stack(cols),
        t_index=np.arange(2, 2 + n_rows),
        n_base=n_base,
    ), rng


class TestOlsFit:
    def test_noiseless_recovery(self):
        design, rng = manual_design(30, 2, seed=1)
        beta = np.array([4.0, -1.5, 2.0, 0.5])
        y = design.X @ beta
        fit = ols_fit(design.X, y)
        np.testing.assert_allclose(fit.coefficients, beta, atol=1e-9)
        assert fit.sse < 1e-18

    def test_intercept_only_is_mean(self):
        y = np.array([1.0, 2.0, 3.0, 10.0])
        fit = ols_fit(np.ones((4, 1)), y)
        assert fit.coefficients[0] == pytest.approx(y.mean())
        assert fit.sse == pytest.approx(((y - y.mean()) ** 2).sum())

    def test_matches_normal_equations(self):
        design, rng = manual_design(50, 4, seed=2)
        y = rng.normal(size=50)
        fit = ols_fit(design.X, y)
        want = np.linalg.solve(design.X.T @ design.X, design.X.T @ y)
        np.testing.assert_allclose(fit.coefficients, want, atol=1e-10)
        assert fit.residual_variance == pytest.approx(fit.sse / 50)
        n, s2 = 50, fit.residual_variance
        want_ll = -0.5 * n * (np.log(2 * np.pi * s2) + 1)
        assert fit.log_likelihood == pytest.approx(want_ll)

    def test_duplicate_column_named_in_error(self):
        X = np.ones((10, 2))
        X[:, 1] = np.arange(10.0)
        X = np.column_stack([X, X[:, 1]])
        with pytest.raises(RankDeficientError, match="dup"):
            ols_fit(X, np.arange(10.0), ("intercept", "a", "dup"))

    def test_allow_singular_gives_min_norm(self):
        rng = np.random.default_rng(3)
        X = rng.normal(size=(5, 9))
        y = rng.normal(size=5)
        fit = ols_fit(X, y, allow_singular=True)
        want = np.linalg.pinv(X) @ y
        np.testing.assert_allclose(fit.coefficients, want, atol=1e-9)
        assert fit.sse < 1e-18
        with pytest.raises(RankDeficientError):
            ols_fit(X, y)


class TestAic:
    def test_formula(self):
        assert aic(3, -10.0) == 26.0
        assert aic(4, -10.0) - aic(3, -10.0) == 2.0

    def test_rejects_zero_parameters(self):
        with pytest.raises(ValueError):
            aic(0, 0.0)


class TestForwardStepwise:
    def test_planted_signal_selected_first(self):
        design, rng = manual_design(60, 4, seed=4)
        y = 10.0 + 0.5 * design.X[:, 1] + 3.0 * design.X[:, 2]
        y = y + 0.01 * rng.normal(size=60)
        fit = forward_stepwise(design, y)
        assert fit.selected[0] == "g0"
        assert 0 in fit.selected_idx

    def test_pure_noise_rarely_selects(self):
        counts = []
        for seed in range(9):
            design, rng = manual_design(60, 4, seed=100 + seed)
            y = 10.0 + 0.5 * design.X[:, 1] + rng.normal(size=60)
            fit = forward_stepwise(design, y)
            counts.append(len(fit.selected))
        assert np.median(counts) <= 1

    def test_no_candidates_equals_base(self):
        design, rng = manual_design(30, 0, seed=5)
        y = rng.normal(size=30)
        step = forward_stepwise(design, y)
        base = fit_base(design, y)
        assert step.selected == ()
        np.testing.assert_allclose(step.coefficients, base.coefficients)
        assert step.aic == pytest.approx(base.aic)

    def test_improvement_must_be_strict(self):
        # a candidate equal to an existing base column can't improve AIC
        design, rng = manual_design(40, 0, seed=6)
        X = np.column_stack([design.X, design.X[:, 1]])
        dup = DesignMatrix(
            columns=design.columns + ("copy",),
            X=X,
            t_index=design.t_index,
            n_base=2,
        )
        y = 1.0 + 2.0 * design.X[:, 1] + 0.1 * rng.normal(size=40)
        fit = forward_stepwise(dup, y)
        assert fit.selected == ()


class TestLassoFit:
    def test_sparse_signal_recovered(self):
        design, rng = manual_design(80, 6, seed=7)
        y = 2.0 + 0.3 * design.X[:, 1] + 4.0 * design.X[:, 4]
        y = y + 0.1 * rng.normal(size=80)
        fit = lasso_fit(design, y, folds=5)
        coefs = dict(zip(fit.column_names, fit.coefficients))
        assert abs(coefs["g2"]) > 1.0
        others = [abs(coefs[f"g{i}"]) for i in (0, 1, 3, 4, 5)]
        assert max(others) < 0.5 * abs(coefs["g2"])

    def test_cv_curve_and_lambda_choice(self):
        design, rng = manual_design(50, 3, seed=8)
        y = 1.0 + design.X[:, 1] + rng.normal(size=50)
        fit = lasso_fit(design, y, folds=5, n_lambdas=30)
        assert fit.cv_curve.shape == (30, 2)
        grid, scores = fit.cv_curve[:, 0], fit.cv_curve[:, 1]
        assert np.all(np.diff(grid) < 0)  # descending path
        assert fit.chosen_lambda == grid[int(np.argmin(scores))]
        assert np.isfinite(fit.aic)

    def test_base_columns_never_penalized(self):
        design, rng = manual_design(70, 4, seed=9)
        y = 5.0 + 2.0 * design.X[:, 1] + 0.05 * rng.normal(size=70)
        fit = lasso_fit(design, y, folds=5)
        coefs = dict(zip(fit.column_names, fit.coefficients))
        assert coefs["y_lag1"] == pytest.approx(2.0, abs=0.05)

    def test_prediction_shape(self):
        design, rng = manual_design(40, 2, seed=10)
        y = rng.normal(size=40)
        fit = lasso_fit(design, y, folds=4, n_lambdas=20)
        out = fit.predict(design.X)
        assert out.shape == (40,)


class TestPca:
    def test_rank_one_block(self):
        rng = np.random.default_rng(11)
        u = rng.normal(size=25)
        v = np.array([3.0, -1.0, 2.0])
        G = np.outer(u, v) + 7.0
        pca = pca_components(G, 1)
        want = v / np.linalg.norm(v)
        np.testing.assert_allclose(np.abs(pca.loadings[:, 0]), np.abs(want), atol=1e-10)
        assert pca.loadings[np.abs(pca.loadings[:, 0]).argmax(), 0] > 0
        total_var = np.var(G, axis=0, ddof=1).sum()
        assert pca.eigenvalues[0] == pytest.approx(total_var, rel=1e-10)

    def test_orthonormal_and_variance_sum(self):
        rng = np.random.default_rng(12)
        G = rng.normal(size=(30, 6)) @ rng.normal(size=(6, 6))
        pca = pca_components(G, 6)
        np.testing.assert_allclose(
            pca.loadings.T @ pca.loadings, np.eye(6), atol=1e-10
        )
        assert pca.eigenvalues.sum() == pytest.approx(
            np.var(G, axis=0, ddof=1).sum(), rel=1e-10
        )
        assert np.all(np.diff(pca.eigenvalues) <= 1e-12)

    def test_scores_are_centered_projections(self):
        rng = np.random.default_rng(13)
        G = rng.normal(size=(20, 4))
        pca = pca_components(G, 2)
        np.testing.assert_allclose(pca.scores.mean(axis=0), 0.0, atol=1e-12)
        np.testing.assert_allclose(
            pca.scores, (G - pca.centers) @ pca.loadings, atol=1e-12
        )

    def test_k_beyond_rank_rejected(self):
        rng = np.random.default_rng(14)
        base = rng.normal(size=(15, 2))
        G = base @ rng.normal(size=(2, 5))  # rank 2 in 5 columns
        pca_components(G, 2)
        with pytest.raises(ValueError, match="rank"):
            pca_components(G, 3)


class TestPcaRegression:
    def test_full_component_set_matches_full_ols(self):
        design, rng = manual_design(40, 4, seed=15)
        y = rng.normal(size=40)
        full = fit_full(design, y)
        pca = pca_regression(design, y, k=4)
        assert pca.sse == pytest.approx(full.sse, rel=1e-8, abs=1e-10)

    def test_single_factor_panel_denoised(self):
        rng = np.random.default_rng(16)
        n = 60
        f = rng.normal(size=n).cumsum()
        cols = [np.ones(n), rng.normal(size=n)]
        names = ["intercept", "y_lag1"]
        for i in range(10):
            cols.append(f + 0.3 * rng.normal(size=n))
            names.append(f"g{i}")
        design = DesignMatrix(
            columns=tuple(names),
            X=np.column_stack(cols),
            t_index=np.arange(2, n + 2),
            n_base=2,
        )
        y = 3.0 + 2.0 * f + 0.1 * rng.normal(size=n)
        base = fit_base(design, y)
        pca1 = pca_regression(design, y, k=1)
        assert pca1.sse < 0.05 * base.sse
        assert pca1.k_components == 1
        assert pca1.loadings.shape == (10, 1)


class TestMape:
    def test_worked_example(self):
        assert mape([100.0, 200.0], [110.0, 180.0]) == pytest.approx(10.0)

    def test_zero_actual_rejected(self):
        with pytest.raises(ValueError, match="zero"):
            mape([1.0, 0.0], [1.0, 1.0])

    def test_shape_mismatch_rejected(self):
        with pytest.raises(ValueError):
            mape([1.0, 2.0], [1.0])


class TestBuildDesign:
    def test_rows_and_columns_nonseasonal(self):
        T = 6
        panel = noise_panel(2, T, seed=17)
        tv = np.arange(10.0, 10.0 + T)
        target = TargetSeries(axis=axis(T), values=tv)
        design, y = build_design(panel, target)
        assert start_offset(False) == 2
        np.testing.assert_array_equal(design.t_index, np.arange(2, T + 1))
        np.testing.assert_allclose(y, tv[1:])
        assert design.columns[:2] == ("intercept", "y_lag1")
        np.testing.assert_allclose(design.X[:, 1], tv[:-1])
        np.testing.assert_allclose(design.X[:, 2], panel.values[0, 1:])
        assert design.n_base == 2
        assert design.n_predictors == 2

    def test_seasonal_adds_lag12(self):
        T = 16
        panel = noise_panel(1, T, seed=18)
        tv = np.linspace(5.0, 8.0, T)
        target = TargetSeries(axis=axis(T), values=tv, seasonal=True)
        design, y = build_design(panel, target)
        assert design.t_index[0] == 13
        assert design.columns[2] == "y_lag12"
        np.testing.assert_allclose(design.X[:, 2], tv[: T - 12])
        assert design.n_base == 3

    def test_difference_transform(self):
        T = 8
        panel = noise_panel(1, T, seed=19)
        tv = np.arange(1.0, T + 1)
        target = TargetSeries(axis=axis(T), values=tv)
        design, _ = build_design(panel, target, difference=True)
        g = panel.values[0]
        np.testing.assert_allclose(design.X[:, 2], g[1:] - g[:-1])

    def test_log_floors_zeros(self):
        T = 6
        vals = np.array([[0.0, 2.0, 4.0, 8.0, 2.0, 2.0]])
        panel = StitchedPanel(items=("g0",), axis=axis(T), values=vals)
        tv = np.arange(1.0, T + 1)
        design, _ = build_design(
            panel, TargetSeries(axis=axis(T), values=tv), log_transform=True
        )
        assert design.X[0, 2] == pytest.approx(np.log(2.0))

    def test_missing_panel_cell_rejected(self):
        T = 6
        vals = np.full((1, T), 3.0)
        vals[0, 4] = np.nan
        panel = StitchedPanel(items=("g0",), axis=axis(T), values=vals)
        with pytest.raises(ValueError, match="missing"):
            build_design(panel, TargetSeries(axis=axis(T), values=np.ones(T)))

    def test_axis_mismatch_rejected(self):
        panel = noise_panel(1, 6)
        target = TargetSeries(axis=axis(6, start="2011-01"), values=np.ones(6))
        with pytest.raises(ValueError, match="axis"):
            build_design(panel, target)


def ar1_target(T, a=5.0, b=0.8, y0=200.0, start="2010-01"):
    y = np.empty(T)
    y[0] = y0
    for t in range(1, T):
        y[t] = a + b * y[t - 1]
    return TargetSeries(axis=axis(T, start), values=y)


class TestRollingEvaluate:
    def test_window_arithmetic(self):
        T, P = 40, 12
        report = rolling_evaluate(
            noise_panel(2, T, seed=20), ar1_target(T), P, kinds=("base",)
        )
        np.testing.assert_array_equal(report.window_starts, np.arange(2, T - P + 1))
        assert report.forecasts.shape == (1, T - P - 1)

    def test_seasonal_window_count(self):
        T, P = 120, 30
        tv = np.sin(np.arange(T) * 2 * np.pi / 12) * 3 + 20
        target = TargetSeries(axis=axis(T), values=tv, seasonal=True)
        report = rolling_evaluate(noise_panel(2, T, seed=21), target, P, kinds=("base",))
        assert report.window_starts.size == 78
        assert report.window_starts[0] == 13
        assert report.window_starts[-1] == 90

    def test_exact_autoregression_forecast(self):
        T, P = 40, 12
        report = rolling_evaluate(
            noise_panel(3, T, seed=22), ar1_target(T), P, kinds=("base", "full")
        )
        assert report.out_sample_mape("base") < 1e-6
        assert report.in_sample_mape("base") < 1e-6

    def test_no_lookahead(self):
        T, P = 30, 10
        panel = noise_panel(2, T, seed=23)
        target = ar1_target(T, y0=100.0)
        before = rolling_evaluate(panel, target, P, kinds=("base", "stepwise"))

        cut = 25  # corrupt periods after the 25th
        vals = np.array(panel.values)
        vals[:, cut:] *= 7.0
        tv = np.array(target.values)
        tv[cut:] += 1000.0
        after = rolling_evaluate(
            StitchedPanel(items=panel.items, axis=panel.axis, values=vals),
            TargetSeries(axis=target.axis, values=tv),
            P,
            kinds=("base", "stepwise"),
        )
        safe = before.window_starts + P <= cut  # window and forecast row intact
        assert safe.any()
        np.testing.assert_array_equal(
            after.forecasts[:, safe], before.forecasts[:, safe]
        )

    def test_constant_target_degenerates(self):
        T, P = 20, 5
        target = TargetSeries(axis=axis(T), values=np.full(T, 50.0))
        report = rolling_evaluate(
            noise_panel(2, T, seed=24), target, P, kinds=("base", "full", "pca1")
        )
        assert report.degenerate.all()
        np.testing.assert_allclose(report.forecasts, 50.0)
        assert report.out_sample_mape("full") == pytest.approx(0.0, abs=1e-10)

    def test_base_always_included_and_kinds_validated(self):
        T, P = 30, 10
        report = rolling_evaluate(
            noise_panel(1, T, seed=25), ar1_target(T), P, kinds=("full",)
        )
        assert report.kinds[0] == "base"
        with pytest.raises(ValueError, match="unknown model kind"):
            rolling_evaluate(noise_panel(1, T), ar1_target(T), P, kinds=("ridge",))
        with pytest.raises(ValueError, match="window length"):
            rolling_evaluate(noise_panel(1, T), ar1_target(T), 2)

    def test_deterministic(self):
        T, P = 36, 12
        panel = noise_panel(4, T, seed=26)
        target = ar1_target(T, y0=80.0)
        kinds = ("base", "stepwise", "lasso", "pca1")
        a = rolling_evaluate(panel, target, P, kinds=kinds, folds=5)
        b = rolling_evaluate(panel, target, P, kinds=kinds, folds=5)
        np.testing.assert_array_equal(a.forecasts, b.forecasts)
        np.testing.assert_array_equal(
            a.in_sample_sse_per_window, b.in_sample_sse_per_window
        )
