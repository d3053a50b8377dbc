"""Acceptance gate: one test per shipped behavioral criterion.

Each test prints a single PASS line once its assertions hold, so a
verbose run reads as a 12-line scorecard. Tolerances and runtime
budgets are part of the criteria and are asserted, not just timed.
"""

import time

import numpy as np
import pytest
from helpers import stitched_ratio_errors

from trendstitch import (
    AggregatorConfig,
    ARFit,
    DistanceMatrix,
    SimulationConfig,
    StitchedPanel,
    TargetSeries,
    TimeAxis,
    aggregate,
    build_comparison_tensor,
    exact_summed_matrices,
    fisher_p_value,
    k_medoids,
    month_range,
    pca_components,
    piccolo_distance,
    ratio_bounds,
    rolling_evaluate,
    select_comparators,
    sign_binomial_test,
    simulate_latent,
    smacof_mds,
    spearman,
    stitch,
    sum_tensor,
)
from trendstitch import adf_test, io as tio
from trendstitch.cli import main as cli_main
from trendstitch.kernels import lasso_path


def test_criterion_01_rounding_bound_anchors():
    lo, hi = ratio_bounds(50, 50)
    assert lo == pytest.approx(0.9802, abs=5e-4)
    assert hi == pytest.approx(1.0202, abs=5e-4)
    lo, hi = ratio_bounds(100, 1)
    assert lo == pytest.approx(66.333, abs=5e-4)
    assert hi == pytest.approx(201.0, abs=5e-4)
    print("PASS 1: rounding-bound anchors (50,50) and (100,1) within 5e-4")


def test_criterion_02_sign_test_anchors():
    assert sign_binomial_test(47, 100).p_value == pytest.approx(0.6173, abs=5e-4)
    assert sign_binomial_test(69, 100).p_value == pytest.approx(0.0002, abs=5e-4)
    print("PASS 2: sign-test anchors 47/100 and 69/100 within 5e-4")


def test_criterion_03_fisher_anchor():
    assert fisher_p_value(0.1870, 100) == pytest.approx(0.0624, abs=2e-3)
    print("PASS 3: Fisher p-value anchor r=0.187, n=100 within 2e-3")


def test_criterion_04_aggregator_oracle_suite():
    t0 = time.perf_counter()
    for seed in range(10):
        config = SimulationConfig(
            n_items=100, n_comparators=10, n_periods=120, seed=seed
        )
        panel = simulate_latent(config)
        comparators = select_comparators(panel, 10)
        tensor = build_comparison_tensor(panel, comparators)
        index = aggregate(sum_tensor(tensor), AggregatorConfig(nc=30))
        rho = spearman(index.ag_ratings, panel.total_volumes())
        assert rho >= 0.99, f"seed {seed}: spearman {rho}"
        stitched = stitch(tensor, index)
        err, halfwidth, _ = stitched_ratio_errors(tensor, stitched, panel.values)
        assert np.median(err) <= np.median(halfwidth), (
            f"seed {seed}: median error {np.median(err):.4f} exceeds "
            f"bound prediction {np.median(halfwidth):.4f}"
        )
    elapsed = time.perf_counter() - t0
    assert elapsed < 30.0
    print(
        "PASS 4: aggregator oracle, 10 seeds at n=100, m=10, T=120, NC=30 "
        f"(spearman >= 0.99, median error within bounds, {elapsed:.1f}s)"
    )


def test_criterion_05_noiseless_exactness():
    config = SimulationConfig(n_items=20, n_comparators=5, n_periods=36, seed=13)
    panel = simulate_latent(config)
    sums = exact_summed_matrices(panel, select_comparators(panel, 5))
    totals = panel.total_volumes()
    for nc in (2, 5, 30):
        index = aggregate(sums, AggregatorConfig(nc=nc))
        # ratings carry an arbitrary pinned scale; the contract is ratios
        np.testing.assert_allclose(
            index.ag_ratings / index.ag_ratings[0], totals / totals[0], rtol=1e-10
        )
    print("PASS 5: noiseless aggregation recovers total ratios to 1e-10, NC in {2, 5, 30}")


def overfit_fixture(seed=0, n_items=60, T=120):
    rng = np.random.default_rng(seed)
    f = np.empty(T)
    f[0] = 0.0
    for t in range(1, T):
        f[t] = 0.7 * f[t - 1] + rng.normal()
    g = np.maximum(50.0 + 4.0 * f[None, :] + 3.0 * rng.normal(size=(n_items, T)), 0.1)
    axis = TimeAxis(month_range("2005-01", T))
    panel = StitchedPanel(
        items=tuple(f"g{i}" for i in range(n_items)), axis=axis, values=g
    )
    y = np.empty(T)
    y[0] = 100.0
    for t in range(1, T):
        y[t] = 10.0 + 0.5 * y[t - 1] + 2.0 * f[t] + 0.3 * rng.normal()
    return panel, TargetSeries(axis=axis, values=y)


def test_criterion_06_overfitting_signature():
    t0 = time.perf_counter()
    panel, target = overfit_fixture()
    report = rolling_evaluate(
        panel, target, 30, kinds=("base", "full", "stepwise", "pca1")
    )
    sse = report.in_sample_sse_per_window
    row = {k: i for i, k in enumerate(report.kinds)}
    assert np.all(sse[row["full"]] <= sse[row["stepwise"]] + 1e-9)
    assert np.all(sse[row["stepwise"]] <= sse[row["base"]] + 1e-9)
    d_full = report.delta_out("full")
    d_pca1 = report.delta_out("pca1")
    assert d_full > 0.0, f"full model should overfit out of sample, got {d_full}"
    assert d_pca1 < 0.0, f"pca1 should denoise out of sample, got {d_pca1}"
    elapsed = time.perf_counter() - t0
    assert elapsed < 60.0
    print(
        "PASS 6: overfitting signature, SSE nesting exact on every window, "
        f"delta-MAPE out full {d_full:+.2f} > 0 > {d_pca1:+.2f} pca1 ({elapsed:.1f}s)"
    )


def test_criterion_07_lasso_oracle():
    t0 = time.perf_counter()
    rng = np.random.default_rng(42)
    n = 50
    g1 = rng.normal(size=n)
    g2 = 0.6 * g1 + 0.8 * rng.normal(size=n)
    X = np.column_stack([np.ones(n), g1, g2])
    y = 1.5 + 2.0 * g1 - 1.0 * g2 + 0.5 * rng.normal(size=n)
    penalized = np.array([False, True, True])
    lams = np.geomspace(200.0, 0.01, 12)
    coefs = lasso_path(X, y, lams, penalized, 100000, 1e-24)

    def grid_best(lam, lo1, hi1, lo2, hi2, points=201):
        b1_grid = np.linspace(lo1, hi1, points)
        b2_grid = np.linspace(lo2, hi2, points)
        best = (np.inf, 0.0, 0.0)
        for b1 in b1_grid:
            r = y[None, :] - b1 * g1[None, :] - b2_grid[:, None] * g2[None, :]
            b0 = r.mean(axis=1)  # unpenalized intercept solved exactly
            rc = r - b0[:, None]
            obj = (rc**2).sum(axis=1) + lam * (abs(b1) + np.abs(b2_grid))
            j = int(np.argmin(obj))
            if obj[j] < best[0]:
                best = (float(obj[j]), float(b1), float(b2_grid[j]))
        return best

    worst = 0.0
    for li, lam in enumerate(lams):
        lo1, hi1, lo2, hi2 = -1.0, 3.0, -2.0, 2.0
        for _ in range(3):  # coarse-to-fine refinement of the 2-D grid
            _, b1, b2 = grid_best(lam, lo1, hi1, lo2, hi2)
            s1 = (hi1 - lo1) / 200 * 3
            s2 = (hi2 - lo2) / 200 * 3
            lo1, hi1, lo2, hi2 = b1 - s1, b1 + s1, b2 - s2, b2 + s2
        worst = max(worst, abs(coefs[li, 1] - b1), abs(coefs[li, 2] - b2))
    assert worst < 2e-3
    elapsed = time.perf_counter() - t0
    assert elapsed < 10.0
    print(
        f"PASS 7: lasso path matches brute-force 2-D grid, worst gap "
        f"{worst:.1e} < 2e-3 ({elapsed:.1f}s)"
    )


def power_iteration_eigenpairs(S, k, seed=0, iters=20000):
    """Independent eigensolver: power iteration with deflation."""
    S = S.copy()
    rng = np.random.default_rng(seed)
    values, vectors = [], []
    for _ in range(k):
        v = rng.normal(size=S.shape[0])
        v /= np.linalg.norm(v)
        for _ in range(iters):
            w = S @ v
            norm = np.linalg.norm(w)
            if norm == 0:
                break
            w /= norm
            if np.linalg.norm(w - v) < 1e-15 or np.linalg.norm(w + v) < 1e-15:
                v = w
                break
            v = w
        lam = float(v @ S @ v)
        values.append(lam)
        vectors.append(v)
        S -= lam * np.outer(v, v)
    return np.array(values), np.column_stack(vectors)


def test_criterion_08_pca_oracle():
    for seed in range(5):
        rng = np.random.default_rng(100 + seed)
        G = rng.normal(size=(30, 6)) @ rng.normal(size=(6, 6))
        pca = pca_components(G, 6)
        Gc = G - G.mean(axis=0)
        S = Gc.T @ Gc / (30 - 1)
        vals, vecs = power_iteration_eigenpairs(S, 6, seed=seed)
        np.testing.assert_allclose(pca.eigenvalues, vals, rtol=1e-8, atol=1e-10)
        for j in range(6):
            align = abs(float(vecs[:, j] @ pca.loadings[:, j]))
            assert align == pytest.approx(1.0, abs=1e-8)
        np.testing.assert_allclose(
            pca.loadings.T @ pca.loadings, np.eye(6), atol=1e-10
        )
        total_var = np.var(G, axis=0, ddof=1).sum()
        assert pca.eigenvalues.sum() == pytest.approx(total_var, rel=1e-8)
    print(
        "PASS 8: PCA eigenpairs match power-iteration oracle to 1e-8, "
        "loadings orthonormal to 1e-10, variance sum to 1e-8"
    )


def test_criterion_09_distance_clustering_suite():
    fit1 = ARFit(order=1, intercept=0.0, coefficients=np.array([0.5]),
                 noise_variance=1.0, aic=0.0)
    fit2 = ARFit(order=2, intercept=0.0, coefficients=np.array([0.5, 0.3]),
                 noise_variance=1.0, aic=0.0)
    assert piccolo_distance(fit1, fit1) == 0.0
    assert piccolo_distance(fit1, fit2) == 0.3

    for seed in range(10):
        rng = np.random.default_rng(seed)
        pts = np.concatenate(
            [rng.normal(size=(7, 2)), rng.normal(size=(7, 2)) + 10.0]
        )
        diff = pts[:, None, :] - pts[None, :, :]
        dm = DistanceMatrix(
            labels=tuple(f"p{i}" for i in range(14)),
            d=np.sqrt((diff**2).sum(axis=2)),
        )
        res = k_medoids(dm, 2)
        left, right = set(res.assignment[:7]), set(res.assignment[7:])
        assert len(left) == 1 and len(right) == 1 and left != right, f"seed {seed}"

    pts = np.array([[0.0, 0.0], [4.0, 0.0], [4.0, 3.0], [0.0, 3.0], [2.0, 1.5]])
    diff = pts[:, None, :] - pts[None, :, :]
    dm = DistanceMatrix(labels=tuple("abcde"), d=np.sqrt((diff**2).sum(axis=2)))
    emb = smacof_mds(dm, dims=2, seed=0, tol=1e-12, max_iter=5000)
    assert emb.stress < 1e-4
    assert np.all(np.diff(emb.stress_sequence) <= 1e-12)
    got = np.sqrt(
        (
            (emb.coordinates[:, None, :] - emb.coordinates[None, :, :]) ** 2
        ).sum(axis=2)
    )
    off = ~np.eye(5, dtype=bool)
    np.testing.assert_allclose(got[off], dm.d[off], rtol=1e-3)
    print(
        "PASS 9: piccolo identity/padding exact, two-blob k-medoids on all "
        "10 seeds, SMACOF stress < 1e-4 and monotone"
    )


def test_criterion_10_adf_size_and_power():
    reps = 200
    T = 500
    walk_rejections = 0
    noise_rejections = 0
    for seed in range(reps):
        rng = np.random.default_rng(seed)
        steps = rng.normal(size=T)
        if adf_test(steps.cumsum()).reject:
            walk_rejections += 1
        if adf_test(steps).reject:
            noise_rejections += 1
    size = walk_rejections / reps
    power = noise_rejections / reps
    assert size <= 0.10, f"rejected {size:.1%} of random walks"
    assert power >= 0.90, f"rejected only {power:.1%} of white noise"
    print(
        f"PASS 10: ADF size {size:.1%} <= 10% on random walks, "
        f"power {power:.1%} >= 90% on white noise (200 reps, T=500)"
    )


def test_criterion_11_protocol_arithmetic():
    T, P = 120, 30
    rng = np.random.default_rng(21)
    axis = TimeAxis(month_range("2005-01", T))
    panel = StitchedPanel(
        items=("g0", "g1"),
        axis=axis,
        values=np.maximum(40.0 + rng.normal(size=(2, T)).cumsum(axis=1), 0.5),
    )
    y = 20.0 + 3.0 * np.sin(np.arange(T) * 2 * np.pi / 12) + rng.normal(size=T)
    target = TargetSeries(axis=axis, values=y, seasonal=True)
    report = rolling_evaluate(panel, target, P, kinds=("base",))
    assert report.window_starts.size == 78
    assert report.window_starts[0] == 13
    assert report.window_starts[-1] == 90
    print("PASS 11: seasonal rolling protocol fits exactly 78 windows (t=13..90)")


def run_pipeline(out_dir):
    out = str(out_dir)
    assert cli_main(
        ["simulate", "--items", "12", "--comparators", "4", "--periods", "48",
         "--seed", "7", "--out-dir", out]
    ) == 0
    assert cli_main(
        ["aggregate", "--tensor", f"{out}/tensor.csv", "--out-dir", out]
    ) == 0
    panel = tio.read_panel(f"{out}/stitched_panel.csv")
    rng = np.random.default_rng(17)
    y = np.empty(len(panel.axis))
    y[0] = 80.0
    for t in range(1, y.size):
        y[t] = 6.0 + 0.9 * y[t - 1] + rng.normal()
    tio.write_target(
        f"{out}/target.csv", TargetSeries(axis=panel.axis, values=y, name="target")
    )
    assert cli_main(
        ["nowcast", "--panel", f"{out}/stitched_panel.csv",
         "--target", f"{out}/target.csv", "--window", "12",
         "--kinds", "base", "full", "lasso", "--folds", "5", "--out-dir", out]
    ) == 0
    assert cli_main(
        ["cluster", "--panel", f"{out}/latent_panel.csv", "--k", "3",
         "--seed", "0", "--out-dir", out]
    ) == 0
    assert cli_main(
        ["corr", "--panel-a", f"{out}/stitched_panel.csv",
         "--panel-b", f"{out}/latent_panel.csv", "--lags=-2,0,2",
         "--out-dir", out]
    ) == 0


def test_criterion_12_end_to_end_determinism(tmp_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    run_pipeline(a)
    run_pipeline(b)
    capsys.readouterr()
    names = sorted(p.name for p in a.iterdir())
    assert names == sorted(p.name for p in b.iterdir())
    csvs = [n for n in names if n.endswith(".csv")]
    assert len(csvs) >= 11
    for name in names:
        assert (a / name).read_bytes() == (b / name).read_bytes(), name
    print(
        f"PASS 12: simulate-aggregate-nowcast-cluster-corr twice, "
        f"{len(csvs)} CSVs (and SVGs) byte-identical"
    )
