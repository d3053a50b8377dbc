"""Command-line surface tying the pipeline stages together.

Five subcommands cover the full flow: simulate a synthetic comparison
tensor, aggregate it onto a common scale, nowcast a target from the
stitched panel, cluster the panel's series, and run the correlation
battery between two panels. Every command reads and writes the versioned
CSV formats from the io module; identical flags and inputs produce
byte-identical outputs.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import io, plots
from .core import validate_tensor
from .aggregate import (
    ANCHOR_RULES,
    AggregatorConfig,
    ChainError,
    aggregate,
    stitch,
    sum_tensor,
)
from .nowcast import KNOWN_KINDS, rolling_evaluate
from .simulate import SimulationConfig, build_comparison_tensor, select_comparators, simulate_latent
from .stats import cross_correlation, sign_binomial_test, spearman
from .tsa import euclidean_distances, k_medoids, log_floor, piccolo_distances, smacof_mds

DEFAULT_WINDOWS = (30, 60, 90)
DEFAULT_LAGS = "-5,-1,0,1,5"


def _parse_lags(text: str) -> tuple[int, ...]:
    try:
        lags = tuple(int(tok) for tok in text.split(",") if tok.strip() != "")
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad lag list {text!r}") from None
    if not lags:
        raise argparse.ArgumentTypeError("lag list is empty")
    return lags


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trendstitch",
        description="Simulate, aggregate, nowcast, cluster, and correlate "
        "pairwise-comparison search panels.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="generate a synthetic comparison tensor")
    p.add_argument("--items", type=int, default=20, help="number of items")
    p.add_argument("--comparators", type=int, default=5, help="comparator count")
    p.add_argument("--periods", type=int, default=60, help="number of months")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--start-period", default="2008-01", help="first month, YYYY-MM")
    p.add_argument("--out-dir", default=".")

    p = sub.add_parser("aggregate", help="chain a tensor onto a common scale")
    p.add_argument("--tensor", required=True, help="comparison tensor CSV")
    p.add_argument("--nc", type=int, default=30, help="items chained per base reset")
    p.add_argument("--anchor-rule", choices=ANCHOR_RULES, default="max_shared")
    p.add_argument(
        "--latent",
        help="optional latent panel CSV; prints the rank agreement diagnostic",
    )
    p.add_argument("--out-dir", default=".")

    p = sub.add_parser("nowcast", help="rolling-window evaluation of model kinds")
    p.add_argument("--panel", required=True, help="stitched panel CSV")
    p.add_argument("--target", required=True, help="target series CSV")
    p.add_argument(
        "--window",
        type=int,
        action="append",
        help=f"training window length, repeatable (default {DEFAULT_WINDOWS})",
    )
    p.add_argument(
        "--kinds",
        nargs="+",
        choices=KNOWN_KINDS,
        default=list(KNOWN_KINDS),
        help="model kinds to evaluate",
    )
    p.add_argument("--folds", type=int, default=10, help="CV folds for the lasso")
    p.add_argument("--seasonal", action="store_true", help="add the 12-month lag")
    p.add_argument("--log-transform", action="store_true", help="log the predictors")
    p.add_argument(
        "--difference", action="store_true", help="first-difference the predictors"
    )
    p.add_argument("--out-dir", default=".")

    p = sub.add_parser("cluster", help="distances, k-medoids, and an MDS map")
    p.add_argument("--panel", required=True, help="panel CSV to cluster")
    p.add_argument(
        "--distance", choices=("euclidean", "piccolo"), default="euclidean"
    )
    p.add_argument("--k", type=int, default=4, help="number of clusters")
    p.add_argument("--seed", type=int, default=0, help="seed for the MDS start")
    p.add_argument(
        "--log-transform",
        action="store_true",
        help="log series (zeros floored) before distances",
    )
    p.add_argument(
        "--difference", action="store_true", help="difference series before distances"
    )
    p.add_argument("--out-dir", default=".")

    p = sub.add_parser("corr", help="lagged correlation battery between two panels")
    p.add_argument("--panel-a", required=True, help="first panel CSV")
    p.add_argument("--panel-b", required=True, help="second panel CSV")
    p.add_argument(
        "--lags",
        type=_parse_lags,
        default=_parse_lags(DEFAULT_LAGS),
        help=f"comma-separated lag list, e.g. --lags={DEFAULT_LAGS} (default); "
        "the = form keeps leading minus signs out of flag parsing",
    )
    p.add_argument("--out-dir", default=".")
    return parser


def _require_inputs(*paths) -> None:
    for path in paths:
        if path is not None and not os.path.exists(path):
            raise FileNotFoundError(f"input path does not exist: {path}")


def _out(args, name: str) -> str:
    os.makedirs(args.out_dir, exist_ok=True)
    return os.path.join(args.out_dir, name)


def _cmd_simulate(args) -> int:
    config = SimulationConfig(
        n_items=args.items,
        n_comparators=args.comparators,
        n_periods=args.periods,
        seed=args.seed,
        start_period=args.start_period,
    )
    panel = simulate_latent(config)
    comparators = select_comparators(panel, config.n_comparators)
    tensor = build_comparison_tensor(panel, comparators)
    tensor_path = _out(args, "tensor.csv")
    latent_path = _out(args, "latent_panel.csv")
    io.write_tensor(tensor_path, tensor)
    io.write_panel(latent_path, panel.items, panel.axis, panel.values)
    print(f"wrote {tensor_path} ({args.items} items x {args.comparators} comparators)")
    print(f"wrote {latent_path} (ground truth sidecar)")
    return 0


def _cmd_aggregate(args) -> int:
    _require_inputs(args.tensor, args.latent)
    tensor = io.read_tensor(args.tensor)
    findings = validate_tensor(tensor)
    hard = [f for f in findings if f.rule != "max_norm"]
    if hard:
        lines = "; ".join(f"{f.rule} at {f.location}: {f.detail}" for f in hard[:5])
        raise ValueError(f"tensor fails validation ({len(hard)} findings): {lines}")
    for f in findings:
        # Real Trends pulls occasionally peak below 100; warn, don't reject.
        print(f"warning: {f.rule} at {f.location}: {f.detail}", file=sys.stderr)
    sums = sum_tensor(tensor)
    index = aggregate(sums, AggregatorConfig(nc=args.nc))
    stitched = stitch(tensor, index, anchor_rule=args.anchor_rule)
    index_path = _out(args, "index.csv")
    panel_path = _out(args, "stitched_panel.csv")
    io.write_index(index_path, index)
    io.write_panel(panel_path, stitched.items, stitched.axis, stitched.values)
    print(f"wrote {index_path} ({len(index.items)} items, nc={args.nc})")
    print(f"wrote {panel_path}")
    if args.latent:
        latent = io.read_panel(args.latent)
        pos = {item: i for i, item in enumerate(latent.items)}
        missing = [item for item in index.items if item not in pos]
        if missing:
            raise ValueError(f"latent panel lacks items: {missing[:5]}")
        totals = np.array(
            [np.nansum(latent.values[pos[item]]) for item in index.items]
        )
        rho = spearman(index.ag_ratings, totals)
        print(f"spearman ag_ratings vs latent totals: {rho:.6f}")
    return 0


def _cmd_nowcast(args) -> int:
    _require_inputs(args.panel, args.target)
    panel = io.read_panel(args.panel)
    target = io.read_target(args.target, seasonal=args.seasonal)
    windows = tuple(args.window) if args.window else DEFAULT_WINDOWS
    kinds = tuple(dict.fromkeys(args.kinds))
    reports = [
        rolling_evaluate(
            panel,
            target,
            window_length=P,
            kinds=kinds,
            folds=args.folds,
            difference=args.difference,
            log_transform=args.log_transform,
        )
        for P in windows
    ]
    eval_path = _out(args, "evaluation.csv")
    trace_path = _out(args, "forecasts.csv")
    io.write_evaluation(eval_path, reports)
    io.write_forecasts(trace_path, reports, panel.axis)
    print(f"wrote {eval_path}")
    print(f"wrote {trace_path}")
    for rep in reports:
        base = rep.out_sample_mape("base")
        print(
            f"window {rep.window_length}: {rep.window_starts.size} windows, "
            f"base out-of-sample MAPE {base:.4f}"
        )
    return 0


def _cmd_cluster(args) -> int:
    _require_inputs(args.panel)
    panel = io.read_panel(args.panel)
    values = np.array(panel.values)
    if np.isnan(values).any():
        raise ValueError(
            "panel has missing cells; clustering needs complete series"
        )
    series = values
    x_labels = list(panel.axis.periods)
    if args.log_transform:
        series = log_floor(series)
    if args.difference:
        series = np.diff(series, axis=1)
        x_labels = x_labels[1:]
    if args.distance == "euclidean":
        dm = euclidean_distances(series, panel.items)
    else:
        dm = piccolo_distances(series, panel.items)
    clustering = k_medoids(dm, args.k, seed=args.seed)
    embedding = smacof_mds(dm, dims=2, seed=args.seed)
    io.write_distances(_out(args, "distances.csv"), dm)
    io.write_clustering(_out(args, "clustering.csv"), clustering, dm.labels)
    io.write_coordinates(_out(args, "coords.csv"), embedding, dm.labels)
    plots.scatter_chart(
        _out(args, "cluster_map.svg"),
        embedding.coordinates,
        clustering.assignment,
        dm.labels,
        title=f"MDS map, {args.distance} distance, k={args.k} "
        f"(stress {embedding.stress:.4f})",
    )
    plots.cluster_lines_chart(
        _out(args, "cluster_series.svg"),
        x_labels,
        series,
        clustering.assignment,
        dm.labels,
        title=f"Series by cluster ({args.distance} distance)",
    )
    sizes = np.bincount(clustering.assignment, minlength=args.k)
    print(f"wrote distances.csv, clustering.csv, coords.csv in {args.out_dir}")
    print(f"wrote cluster_map.svg, cluster_series.svg in {args.out_dir}")
    print(
        f"k={args.k} sizes={sizes.tolist()} cost={clustering.total_cost:.6g} "
        f"mean silhouette={clustering.silhouette.mean():.4f}"
    )
    return 0


def _cmd_corr(args) -> int:
    _require_inputs(args.panel_a, args.panel_b)
    a = io.read_panel(args.panel_a)
    b = io.read_panel(args.panel_b)
    lags = args.lags
    common_periods = [p for p in a.axis.periods if p in set(b.axis.periods)]
    if len(common_periods) < 4:
        raise ValueError("panels share fewer than 4 periods")
    ia = [a.axis.index_of(p) for p in common_periods]
    ib = [b.axis.index_of(p) for p in common_periods]
    pos_b = {item: i for i, item in enumerate(b.items)}
    shared = [item for item in a.items if item in pos_b]
    if not shared:
        raise ValueError("panels share no items")
    battery = []
    skipped = []
    for item in shared:
        x = a.values[a.items.index(item)][ia]
        y = b.values[pos_b[item]][ib]
        if np.isnan(x).any() or np.isnan(y).any():
            skipped.append(item)
            continue
        try:
            for lag in lags:
                battery.append((item, lag, cross_correlation(x, y, lag)))
        except ValueError as exc:
            skipped.append(item)
            battery = [row for row in battery if row[0] != item]
            if "overlap" in str(exc):
                raise
    if not battery:
        raise ValueError("no item had usable data for the battery")
    sign_rows = []
    for lag in lags:
        rs = [res.r for item, l, res in battery if l == lag]
        k = sum(1 for r in rs if r > 0)
        sign_rows.append((lag, sign_binomial_test(k, len(rs))))
    io.write_correlations(_out(args, "correlations.csv"), battery)
    io.write_sign_tests(_out(args, "signtest.csv"), sign_rows)
    print(f"wrote correlations.csv, signtest.csv in {args.out_dir}")
    if skipped:
        print(f"skipped {len(skipped)} items with missing or constant data")
    for lag, res in sign_rows:
        print(f"lag {lag}: {res.k}/{res.n} positive, sign-test p={res.p_value:.4f}")
    return 0


_COMMANDS = {
    "simulate": _cmd_simulate,
    "aggregate": _cmd_aggregate,
    "nowcast": _cmd_nowcast,
    "cluster": _cmd_cluster,
    "corr": _cmd_corr,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse already printed the diagnostic
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except io.CSVFormatError as exc:
        print(f"error: malformed CSV: {exc}", file=sys.stderr)
        return 3
    except ChainError as exc:
        print(f"error: chaining failed: {exc}", file=sys.stderr)
        return 4
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 5
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 6


if __name__ == "__main__":
    sys.exit(main())
