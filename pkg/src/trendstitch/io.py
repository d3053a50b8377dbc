"""CSV serialization for every pipeline artifact.

All files are UTF-8, comma-delimited, with a schema-version comment on
the first line and a header row on the second. Long form is used for
panels and tensors so missing cells stay explicit (empty strings) and
files stay appendable. Reals carry 12 significant digits, which
round-trips every tolerance the pipeline works at. Writes go through a
temp file and an atomic rename, and identical inputs produce
byte-identical files.
"""

from __future__ import annotations

import csv
import math
import os
import tempfile

import numpy as np

from .core import (
    AggregateIndex,
    ComparisonTensor,
    StitchedPanel,
    TimeAxis,
    month_ordinal,
)
from .nowcast import BASE_KIND, EvaluationReport, TargetSeries
from .tsa import Clustering, DistanceMatrix, Embedding

FORMAT_NAME = "trendstitch-csv"
FORMAT_VERSION = (1, 0)


class CSVFormatError(ValueError):
    """Malformed pipeline CSV; the message names the file and line."""


def format_real(x: float) -> str:
    """12-significant-digit decimal text; NaN becomes the empty cell."""
    x = float(x)
    if math.isnan(x):
        return ""
    return f"{x:.12g}"


def _version_line(schema: str) -> str:
    return f"# {FORMAT_NAME} {FORMAT_VERSION[0]}.{FORMAT_VERSION[1]} {schema}"


def write_table(path, schema: str, columns: tuple[str, ...], rows) -> None:
    """Write a versioned CSV atomically (temp file, then rename)."""
    path = os.fspath(path)
    directory = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".csv")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(_version_line(schema) + "\n")
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(columns)
            writer.writerows(rows)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _check_version(line: str, schema: str, path: str) -> None:
    parts = line.strip().lstrip("#").split()
    if len(parts) != 3 or parts[0] != FORMAT_NAME:
        raise CSVFormatError(
            f"{path}:1: missing '{FORMAT_NAME}' version comment, got {line!r}"
        )
    try:
        major = int(parts[1].split(".")[0])
    except ValueError:
        raise CSVFormatError(f"{path}:1: unparsable version {parts[1]!r}") from None
    if major != FORMAT_VERSION[0]:
        raise CSVFormatError(
            f"{path}:1: unsupported major version {parts[1]} "
            f"(this reader handles {FORMAT_VERSION[0]}.x)"
        )
    if parts[2] != schema:
        raise CSVFormatError(
            f"{path}:1: schema is {parts[2]!r}, expected {schema!r}"
        )


def read_table(path, schema: str, columns: tuple[str, ...]):
    """Read a versioned CSV, checking the header and row widths.

    Returns a list of (line_number, cells) pairs so callers can blame
    the exact input line in their own messages.
    """
    path = os.fspath(path)
    with open(path, "r", encoding="utf-8", newline="") as fh:
        first = fh.readline()
        if not first:
            raise CSVFormatError(f"{path}:1: empty file")
        _check_version(first, schema, path)
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise CSVFormatError(f"{path}:2: missing header row")
        if tuple(header) != tuple(columns):
            raise CSVFormatError(
                f"{path}:2: header {header!r} does not match {list(columns)!r}"
            )
        rows = []
        for cells in reader:
            line_no = reader.line_num + 1  # account for the version line
            if not cells:
                continue
            if len(cells) != len(columns):
                raise CSVFormatError(
                    f"{path}:{line_no}: expected {len(columns)} cells, got {len(cells)}"
                )
            rows.append((line_no, cells))
    return rows


def _parse_real(cell: str, path, line_no: int, column: str) -> float:
    cell = cell.strip()
    if cell == "":
        return math.nan
    try:
        return float(cell)
    except ValueError:
        raise CSVFormatError(
            f"{path}:{line_no}: column {column!r} is not numeric: {cell!r}"
        ) from None


def _parse_int(cell: str, path, line_no: int, column: str) -> int:
    try:
        return int(cell.strip())
    except ValueError:
        raise CSVFormatError(
            f"{path}:{line_no}: column {column!r} is not an integer: {cell!r}"
        ) from None


PANEL_COLUMNS = ("item", "period", "value")


def write_panel(path, items, axis: TimeAxis, values: np.ndarray) -> None:
    """Long-form panel: one row per (item, period), empty cell when missing."""
    rows = (
        (item, period, format_real(values[i, t]))
        for i, item in enumerate(items)
        for t, period in enumerate(axis.periods)
    )
    write_table(path, "panel", PANEL_COLUMNS, rows)


def read_panel(path) -> StitchedPanel:
    """Read a long-form panel into a stitched panel (NaN marks missing)."""
    rows = read_table(path, "panel", PANEL_COLUMNS)
    if not rows:
        raise CSVFormatError(f"{path}: panel has no data rows")
    items: list[str] = []
    seen: set[str] = set()
    periods: set[str] = set()
    cells: dict[tuple[str, str], float] = {}
    for line_no, (item, period, value) in rows:
        if item not in seen:
            seen.add(item)
            items.append(item)
        periods.add(period)
        key = (item, period)
        if key in cells:
            raise CSVFormatError(
                f"{path}:{line_no}: duplicate cell for {item!r} at {period}"
            )
        cells[key] = _parse_real(value, path, line_no, "value")
    ordered = sorted(periods, key=month_ordinal)
    axis = TimeAxis(tuple(ordered))
    values = np.full((len(items), len(axis)), np.nan)
    for i, item in enumerate(items):
        for t, period in enumerate(axis.periods):
            values[i, t] = cells.get((item, period), math.nan)
    return StitchedPanel(items=tuple(items), axis=axis, values=values)


TENSOR_COLUMNS = ("item", "comparator", "period", "p_plus", "p_minus")


def write_tensor(path, tensor: ComparisonTensor) -> None:
    """Long-form tensor with empty score cells where the mask is set."""

    def rows():
        for i, item in enumerate(tensor.items):
            for j, comp in enumerate(tensor.comparators):
                for t, period in enumerate(tensor.axis.periods):
                    if tensor.missing[i, j, t]:
                        yield (item, comp, period, "", "")
                    else:
                        yield (
                            item,
                            comp,
                            period,
                            str(int(tensor.p_plus[i, j, t])),
                            str(int(tensor.p_minus[i, j, t])),
                        )

    write_table(path, "tensor", TENSOR_COLUMNS, rows())


def read_tensor(path) -> ComparisonTensor:
    rows = read_table(path, "tensor", TENSOR_COLUMNS)
    if not rows:
        raise CSVFormatError(f"{path}: tensor has no data rows")
    items: list[str] = []
    comps: list[str] = []
    item_seen: set[str] = set()
    comp_seen: set[str] = set()
    periods: set[str] = set()
    data: dict[tuple[str, str, str], tuple[int, int] | None] = {}
    for line_no, (item, comp, period, pp, pm) in rows:
        if item not in item_seen:
            item_seen.add(item)
            items.append(item)
        if comp not in comp_seen:
            comp_seen.add(comp)
            comps.append(comp)
        periods.add(period)
        key = (item, comp, period)
        if key in data:
            raise CSVFormatError(f"{path}:{line_no}: duplicate tensor cell {key}")
        pp, pm = pp.strip(), pm.strip()
        if (pp == "") != (pm == ""):
            raise CSVFormatError(
                f"{path}:{line_no}: scores must be both present or both empty"
            )
        if pp == "":
            data[key] = None
        else:
            data[key] = (
                _parse_int(pp, path, line_no, "p_plus"),
                _parse_int(pm, path, line_no, "p_minus"),
            )
    axis = TimeAxis(tuple(sorted(periods, key=month_ordinal)))
    shape = (len(items), len(comps), len(axis))
    p_plus = np.zeros(shape, dtype=np.int64)
    p_minus = np.zeros(shape, dtype=np.int64)
    missing = np.ones(shape, dtype=bool)
    for i, item in enumerate(items):
        for j, comp in enumerate(comps):
            for t, period in enumerate(axis.periods):
                got = data.get((item, comp, period))
                if got is not None:
                    p_plus[i, j, t], p_minus[i, j, t] = got
                    missing[i, j, t] = False
    return ComparisonTensor(
        items=tuple(items),
        comparators=tuple(comps),
        axis=axis,
        p_plus=p_plus,
        p_minus=p_minus,
        missing=missing,
    )


TARGET_COLUMNS = ("period", "value")


def write_target(path, target: TargetSeries) -> None:
    rows = (
        (period, format_real(target.values[t]))
        for t, period in enumerate(target.axis.periods)
    )
    write_table(path, "target", TARGET_COLUMNS, rows)


def read_target(path, seasonal: bool = False, name: str | None = None) -> TargetSeries:
    rows = read_table(path, "target", TARGET_COLUMNS)
    if not rows:
        raise CSVFormatError(f"{path}: target has no data rows")
    pairs = []
    for line_no, (period, value) in rows:
        v = _parse_real(value, path, line_no, "value")
        if math.isnan(v):
            raise CSVFormatError(f"{path}:{line_no}: target value missing at {period}")
        pairs.append((period, v))
    pairs.sort(key=lambda pv: month_ordinal(pv[0]))
    axis = TimeAxis(tuple(p for p, _ in pairs))
    if name is None:
        name = os.path.splitext(os.path.basename(os.fspath(path)))[0]
    return TargetSeries(
        axis=axis,
        values=np.array([v for _, v in pairs]),
        seasonal=seasonal,
        name=name,
    )


INDEX_COLUMNS = ("item", "ag_rating", "multiplier", "sort_rank")


def write_index(path, index: AggregateIndex) -> None:
    ranks = index.sort_rank()
    rows = (
        (
            item,
            format_real(index.ag_ratings[i]),
            format_real(index.multipliers[i]),
            str(int(ranks[i])),
        )
        for i, item in enumerate(index.items)
    )
    write_table(path, "index", INDEX_COLUMNS, rows)


def read_index(path) -> AggregateIndex:
    rows = read_table(path, "index", INDEX_COLUMNS)
    if not rows:
        raise CSVFormatError(f"{path}: index has no data rows")
    items, ag, mult, ranks = [], [], [], []
    for line_no, (item, rating, multiplier, rank) in rows:
        items.append(item)
        ag.append(_parse_real(rating, path, line_no, "ag_rating"))
        mult.append(_parse_real(multiplier, path, line_no, "multiplier"))
        ranks.append(_parse_int(rank, path, line_no, "sort_rank"))
    order = np.empty(len(items), dtype=np.int64)
    if sorted(ranks) != list(range(1, len(items) + 1)):
        raise CSVFormatError(f"{path}: sort_rank is not a permutation of 1..n")
    for i, rank in enumerate(ranks):
        order[rank - 1] = i
    return AggregateIndex(
        items=tuple(items),
        ag_ratings=np.array(ag),
        multipliers=np.array(mult),
        order=order,
    )


def evaluation_columns(kinds: tuple[str, ...]) -> tuple[str, ...]:
    extras = tuple(f"delta_{k}" for k in kinds if k != BASE_KIND)
    return ("window", "target", "sample", "mape_base") + extras


def write_evaluation(path, reports: list[EvaluationReport]) -> None:
    """Per-window summary: base MAPE plus each kind's MAPE delta.

    One row per (training-window length, sample side); with only the
    base kind evaluated no delta columns appear at all.
    """
    if not reports:
        raise ValueError("no evaluation reports to write")
    kinds = reports[0].kinds
    for rep in reports:
        if rep.kinds != kinds:
            raise ValueError("all reports must share the same kind list")
    rows = []
    for rep in reports:
        for sample in ("in", "out"):
            if sample == "in":
                base = rep.in_sample_mape(BASE_KIND)
                deltas = [rep.delta_in(k) for k in kinds if k != BASE_KIND]
            else:
                base = rep.out_sample_mape(BASE_KIND)
                deltas = [rep.delta_out(k) for k in kinds if k != BASE_KIND]
            rows.append(
                (str(rep.window_length), rep.target_name, sample, format_real(base))
                + tuple(format_real(d) for d in deltas)
            )
    write_table(path, "evaluation", evaluation_columns(kinds), rows)


FORECAST_COLUMNS = ("window", "kind", "period", "actual", "forecast")


def write_forecasts(path, reports: list[EvaluationReport], axis: TimeAxis) -> None:
    """One-ahead forecast trace per window length, kind, and period."""

    def rows():
        for rep in reports:
            for ki, kind in enumerate(rep.kinds):
                for w, t in enumerate(rep.window_starts):
                    period = axis.periods[t + rep.window_length - 1]
                    yield (
                        str(rep.window_length),
                        kind,
                        period,
                        format_real(rep.actuals[w]),
                        format_real(rep.forecasts[ki, w]),
                    )

    write_table(path, "forecasts", FORECAST_COLUMNS, rows())


DISTANCE_COLUMNS = ("item_a", "item_b", "distance")


def write_distances(path, dm: DistanceMatrix) -> None:
    """Unordered pairs (i < j) of the symmetric distance matrix."""
    rows = (
        (dm.labels[i], dm.labels[j], format_real(dm.d[i, j]))
        for i in range(len(dm))
        for j in range(i + 1, len(dm))
    )
    write_table(path, "distances", DISTANCE_COLUMNS, rows)


def read_distances(path) -> DistanceMatrix:
    rows = read_table(path, "distances", DISTANCE_COLUMNS)
    labels: list[str] = []
    label_seen: set[str] = set()
    vals: dict[tuple[str, str], float] = {}
    for line_no, (a, b, dist) in rows:
        for lab in (a, b):
            if lab not in label_seen:
                label_seen.add(lab)
                labels.append(lab)
        vals[(a, b)] = _parse_real(dist, path, line_no, "distance")
    n = len(labels)
    d = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            key = (labels[i], labels[j])
            alt = (labels[j], labels[i])
            if key not in vals and alt not in vals:
                raise CSVFormatError(
                    f"{path}: missing distance for pair {key[0]!r}, {key[1]!r}"
                )
            d[i, j] = d[j, i] = vals.get(key, vals.get(alt))
    return DistanceMatrix(labels=tuple(labels), d=d)


CLUSTERING_COLUMNS = ("item", "cluster", "is_medoid", "silhouette")


def write_clustering(path, clustering: Clustering, labels) -> None:
    medoid_set = set(int(m) for m in clustering.medoids)
    rows = (
        (
            labels[i],
            str(int(clustering.assignment[i])),
            "1" if i in medoid_set else "0",
            format_real(clustering.silhouette[i]),
        )
        for i in range(len(labels))
    )
    write_table(path, "clustering", CLUSTERING_COLUMNS, rows)


COORDS_COLUMNS = ("item", "x", "y")


def write_coordinates(path, embedding: Embedding, labels) -> None:
    if embedding.coordinates.shape[1] != 2:
        raise ValueError("coordinate export expects a 2-D embedding")
    rows = (
        (
            labels[i],
            format_real(embedding.coordinates[i, 0]),
            format_real(embedding.coordinates[i, 1]),
        )
        for i in range(len(labels))
    )
    write_table(path, "coords", COORDS_COLUMNS, rows)


CORRELATION_COLUMNS = ("item", "lag", "n", "r", "p_value")


def write_correlations(path, rows) -> None:
    """Battery rows: (item, lag, CorrelationResult) triples."""
    formatted = (
        (item, str(int(lag)), str(res.n), format_real(res.r), format_real(res.p_value))
        for item, lag, res in rows
    )
    write_table(path, "correlations", CORRELATION_COLUMNS, formatted)


SIGNTEST_COLUMNS = ("lag", "k_positive", "n", "p_value")


def write_sign_tests(path, rows) -> None:
    """Summary rows: (lag, SignTestResult) pairs."""
    formatted = (
        (str(int(lag)), str(res.k), str(res.n), format_real(res.p_value))
        for lag, res in rows
    )
    write_table(path, "signtest", SIGNTEST_COLUMNS, formatted)
