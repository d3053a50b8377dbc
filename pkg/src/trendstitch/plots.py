"""Hand-rolled static SVG charts: line charts and cluster scatter maps.

Deliberately minimal (axes, polylines, circles, a legend) so outputs are
fully deterministic: no timestamps, no external plotting dependency, a
fixed palette, and fixed-precision coordinates. Files open in any
browser.
"""

from __future__ import annotations

import math
import os
import tempfile

import numpy as np

GENERATOR_COMMENT = "<!-- trendstitch-svg 1.0 -->"

PALETTE = (
    "#1f77b4",
    "#ff7f0e",
    "#2ca02c",
    "#d62728",
    "#9467bd",
    "#8c564b",
    "#e377c2",
    "#7f7f7f",
    "#bcbd22",
    "#17becf",
)

WIDTH = 800
MARGIN = 55


def _fmt(x: float) -> str:
    return f"{x:.2f}"


def _write_atomic(path, text: str) -> None:
    path = os.fspath(path)
    directory = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".svg")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _escape(text: str) -> str:
    return (
        str(text).replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
    )


def _nice_ticks(lo: float, hi: float, target: int = 5):
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / target
    mag = 10 ** math.floor(math.log10(raw))
    for mult in (1, 2, 5, 10):
        step = mult * mag
        if raw <= step:
            break
    first = math.ceil(lo / step) * step
    ticks = []
    v = first
    while v <= hi + 1e-9 * step:
        ticks.append(0.0 if abs(v) < 1e-12 * step else v)
        v += step
    return ticks


class _Scale:
    """Affine map from data space to pixel space."""

    def __init__(self, lo, hi, px_lo, px_hi):
        if hi <= lo:
            hi = lo + 1.0
        self.lo, self.hi = lo, hi
        self.px_lo, self.px_hi = px_lo, px_hi

    def __call__(self, v):
        frac = (v - self.lo) / (self.hi - self.lo)
        return self.px_lo + frac * (self.px_hi - self.px_lo)


def _axes(parts, xs: _Scale, ys: _Scale, x_ticks, y_ticks, x_labels=None):
    left, right = xs.px_lo, xs.px_hi
    top, bottom = ys.px_hi, ys.px_lo
    parts.append(
        f'<rect x="{_fmt(left)}" y="{_fmt(top)}" width="{_fmt(right - left)}" '
        f'height="{_fmt(bottom - top)}" fill="none" stroke="#333" stroke-width="1"/>'
    )
    for i, tv in enumerate(x_ticks):
        px = xs(tv)
        parts.append(
            f'<line x1="{_fmt(px)}" y1="{_fmt(bottom)}" x2="{_fmt(px)}" '
            f'y2="{_fmt(bottom + 4)}" stroke="#333" stroke-width="1"/>'
        )
        label = x_labels[i] if x_labels is not None else f"{tv:g}"
        parts.append(
            f'<text x="{_fmt(px)}" y="{_fmt(bottom + 16)}" font-size="10" '
            f'text-anchor="middle" fill="#333">{_escape(label)}</text>'
        )
    for tv in y_ticks:
        py = ys(tv)
        parts.append(
            f'<line x1="{_fmt(left - 4)}" y1="{_fmt(py)}" x2="{_fmt(left)}" '
            f'y2="{_fmt(py)}" stroke="#333" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{_fmt(left - 7)}" y="{_fmt(py + 3)}" font-size="10" '
            f'text-anchor="end" fill="#333">{tv:g}</text>'
        )


def _polyline_segments(xs_px, ys_vals, ys: _Scale):
    """Split a series into polyline chunks at NaN gaps."""
    segments = []
    run = []
    for px, v in zip(xs_px, ys_vals):
        if v is None or (isinstance(v, float) and math.isnan(v)):
            if len(run) > 1:
                segments.append(run)
            run = []
        else:
            run.append((px, ys(v)))
    if len(run) > 1:
        segments.append(run)
    return segments


def _document(parts, width, height, title) -> str:
    head = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        GENERATOR_COMMENT,
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width // 2}" y="20" font-size="14" text-anchor="middle" '
        f'fill="#111">{_escape(title)}</text>',
    ]
    return "\n".join(head + parts + ["</svg>"]) + "\n"


def line_chart(path, x_labels, series: dict, title: str, height: int = 420) -> None:
    """Polyline chart of one or more named series over a shared x axis.

    NaN cells break the line instead of being drawn. The legend lists
    series in insertion order with palette colors recycled as needed.
    """
    if not series:
        raise ValueError("nothing to plot")
    n = len(x_labels)
    finite = [
        v
        for vals in series.values()
        for v in np.asarray(vals, dtype=float)
        if math.isfinite(v)
    ]
    if not finite:
        raise ValueError("all series values are missing")
    lo, hi = min(finite), max(finite)
    if lo == hi:
        lo, hi = lo - 0.5, hi + 0.5
    xs = _Scale(0, n - 1, MARGIN, WIDTH - MARGIN)
    ys = _Scale(lo, hi, height - MARGIN, 30 + 10)
    parts: list[str] = []
    n_x_ticks = min(8, n)
    tick_idx = [round(i * (n - 1) / max(n_x_ticks - 1, 1)) for i in range(n_x_ticks)]
    tick_idx = sorted(set(tick_idx))
    _axes(
        parts,
        xs,
        ys,
        [float(i) for i in tick_idx],
        _nice_ticks(lo, hi),
        x_labels=[x_labels[i] for i in tick_idx],
    )
    xs_px = [xs(i) for i in range(n)]
    for si, (name, vals) in enumerate(series.items()):
        vals = np.asarray(vals, dtype=float)
        if vals.shape != (n,):
            raise ValueError(f"series {name!r} length does not match the axis")
        color = PALETTE[si % len(PALETTE)]
        for seg in _polyline_segments(xs_px, vals.tolist(), ys):
            points = " ".join(f"{_fmt(px)},{_fmt(py)}" for px, py in seg)
            parts.append(
                f'<polyline points="{points}" fill="none" stroke="{color}" '
                f'stroke-width="1.5"/>'
            )
        ly = 34 + 14 * si
        parts.append(
            f'<line x1="{WIDTH - MARGIN + 6}" y1="{ly}" x2="{WIDTH - MARGIN + 26}" '
            f'y2="{ly}" stroke="{color}" stroke-width="2"/>'
        )
        parts.append(
            f'<text x="{WIDTH - MARGIN + 30}" y="{ly + 3}" font-size="10" '
            f'fill="#333">{_escape(name)}</text>'
        )
    _write_atomic(path, _document(parts, WIDTH, height, title))


def scatter_chart(
    path, points: np.ndarray, groups, labels, title: str, height: int = 520
) -> None:
    """2-D scatter with points colored by integer group id.

    Each point gets a small text label; the legend maps group colors.
    """
    points = np.asarray(points, dtype=float)
    if points.ndim != 2 or points.shape[1] != 2:
        raise ValueError("points must be an n x 2 array")
    groups = np.asarray(groups, dtype=int)
    lo_x, hi_x = points[:, 0].min(), points[:, 0].max()
    lo_y, hi_y = points[:, 1].min(), points[:, 1].max()
    pad_x = (hi_x - lo_x or 1.0) * 0.07
    pad_y = (hi_y - lo_y or 1.0) * 0.07
    xs = _Scale(lo_x - pad_x, hi_x + pad_x, MARGIN, WIDTH - MARGIN)
    ys = _Scale(lo_y - pad_y, hi_y + pad_y, height - MARGIN, 40)
    parts: list[str] = []
    _axes(
        parts,
        xs,
        ys,
        _nice_ticks(lo_x - pad_x, hi_x + pad_x),
        _nice_ticks(lo_y - pad_y, hi_y + pad_y),
    )
    for i in range(points.shape[0]):
        color = PALETTE[int(groups[i]) % len(PALETTE)]
        px, py = xs(points[i, 0]), ys(points[i, 1])
        parts.append(
            f'<circle cx="{_fmt(px)}" cy="{_fmt(py)}" r="4" fill="{color}" '
            f'fill-opacity="0.8"/>'
        )
        parts.append(
            f'<text x="{_fmt(px + 6)}" y="{_fmt(py + 3)}" font-size="9" '
            f'fill="#555">{_escape(labels[i])}</text>'
        )
    for gi, g in enumerate(sorted(set(int(g) for g in groups))):
        color = PALETTE[g % len(PALETTE)]
        ly = 44 + 14 * gi
        parts.append(
            f'<circle cx="{WIDTH - MARGIN + 12}" cy="{ly}" r="4" fill="{color}"/>'
        )
        parts.append(
            f'<text x="{WIDTH - MARGIN + 20}" y="{ly + 3}" font-size="10" '
            f'fill="#333">cluster {g}</text>'
        )
    _write_atomic(path, _document(parts, WIDTH, height, title))


def cluster_lines_chart(
    path, x_labels, values: np.ndarray, assignment, item_labels, title: str
) -> None:
    """Stacked per-cluster panels, each drawing its member series.

    Every panel is scaled to its own members so clusters with very
    different magnitudes stay readable.
    """
    values = np.asarray(values, dtype=float)
    assignment = np.asarray(assignment, dtype=int)
    clusters = sorted(set(assignment.tolist()))
    panel_h = 150
    height = 40 + panel_h * len(clusters) + 20
    parts: list[str] = []
    n = len(x_labels)
    for row, c in enumerate(clusters):
        top = 40 + row * panel_h
        members = np.flatnonzero(assignment == c)
        finite = values[members][np.isfinite(values[members])]
        lo = float(finite.min()) if finite.size else 0.0
        hi = float(finite.max()) if finite.size else 1.0
        if lo == hi:
            lo, hi = lo - 0.5, hi + 0.5
        xs = _Scale(0, n - 1, MARGIN, WIDTH - MARGIN)
        ys = _Scale(lo, hi, top + panel_h - 25, top + 18)
        n_x_ticks = min(6, n)
        idx = sorted(
            set(round(i * (n - 1) / max(n_x_ticks - 1, 1)) for i in range(n_x_ticks))
        )
        _axes(
            parts,
            xs,
            ys,
            [float(i) for i in idx],
            _nice_ticks(lo, hi, target=3),
            x_labels=[x_labels[i] for i in idx],
        )
        color = PALETTE[c % len(PALETTE)]
        xs_px = [xs(i) for i in range(n)]
        for i in members:
            for seg in _polyline_segments(xs_px, values[i].tolist(), ys):
                pts = " ".join(f"{_fmt(px)},{_fmt(py)}" for px, py in seg)
                parts.append(
                    f'<polyline points="{pts}" fill="none" stroke="{color}" '
                    f'stroke-width="1" stroke-opacity="0.75"/>'
                )
        names = ", ".join(item_labels[i] for i in members[:6])
        if members.size > 6:
            names += ", ..."
        parts.append(
            f'<text x="{MARGIN}" y="{top + 12}" font-size="11" fill="#111">'
            f"cluster {c} ({members.size} items): {_escape(names)}</text>"
        )
    _write_atomic(path, _document(parts, WIDTH, height, title))
