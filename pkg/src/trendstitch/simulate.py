"""Synthetic search-volume generator and the pairwise quantization model.

The simulator produces a ground-truth latent panel and pushes it through
the same per-pair max-normalization and integer rounding that the public
reporting applies, so the aggregation stage can be validated against known
volumes. Also provides the rounding-error bounds for a quantized ratio.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    ComparisonTensor,
    LatentVolumePanel,
    MAX_SCORE,
    SummedComparisonMatrices,
    TimeAxis,
    month_range,
)


@dataclass(frozen=True)
class SimulationConfig:
    """Shape and volume-process parameters for one synthetic panel.

    The default process draws a static per-item level from a wide
    log-normal (sigma 1.5, so items span roughly three orders of
    magnitude), multiplies a 12-period seasonal cycle with per-item phase,
    and applies a multiplicative random walk with per-period innovation
    sigma 0.05. Setting seasonal_amplitude and walk_sigma to zero yields
    constant rows.
    """

    n_items: int
    n_comparators: int
    n_periods: int
    seed: int
    level_sigma: float = 1.5
    seasonal_amplitude: float = 0.2
    walk_sigma: float = 0.05
    cycle: int = 12
    base_level: float = 100.0
    start_period: str = "2008-01"

    def __post_init__(self):
        if self.n_items < 2:
            raise ValueError("n_items must be at least 2")
        if self.n_comparators < 1:
            raise ValueError("n_comparators must be at least 1")
        if self.n_comparators > self.n_items:
            raise ValueError("cannot draw more comparators than items")
        if self.n_periods < 2:
            raise ValueError("n_periods must be at least 2")
        if self.level_sigma < 0 or self.walk_sigma < 0:
            raise ValueError("process sigmas must be nonnegative")
        if not 0 <= self.seasonal_amplitude < 1:
            raise ValueError("seasonal_amplitude must lie in [0, 1)")
        if self.cycle < 1:
            raise ValueError("cycle must be positive")
        if self.base_level <= 0:
            raise ValueError("base_level must be positive")


def simulate_latent(config: SimulationConfig) -> LatentVolumePanel:
    """Draw a latent volume panel from the configured process.

    Each item gets its own child RNG stream (SeedSequence spawn), so the
    panel is identical whether rows are generated serially or in parallel.
    """
    n, T = config.n_items, config.n_periods
    streams = np.random.SeedSequence(config.seed).spawn(n)
    t = np.arange(T)
    values = np.empty((n, T))
    for i, stream in enumerate(streams):
        rng = np.random.default_rng(stream)
        level = np.exp(rng.normal(0.0, config.level_sigma))
        phase = rng.uniform(0.0, config.cycle)
        season = 1.0 + config.seasonal_amplitude * np.sin(
            2.0 * np.pi * (t + phase) / config.cycle
        )
        shocks = rng.normal(0.0, config.walk_sigma, size=T) if config.walk_sigma else np.zeros(T)
        walk = np.exp(np.cumsum(shocks))
        values[i] = config.base_level * level * season * walk
    axis = TimeAxis(month_range(config.start_period, T))
    items = tuple(f"item{i:03d}" for i in range(n))
    return LatentVolumePanel(items=items, axis=axis, values=values)


def select_comparators(panel: LatentVolumePanel, m: int) -> tuple[str, ...]:
    """Pick m comparator items at evenly spaced quantiles of total volume.

    Quantile targets are {1/(m+1), ..., m/(m+1)}; each target takes the
    not-yet-chosen item whose total volume is nearest, so the comparators
    cover the entire range of item sizes.
    """
    if not 1 <= m <= panel.n_items:
        raise ValueError("comparator count must be between 1 and n_items")
    totals = panel.total_volumes()
    chosen: list[int] = []
    for k in range(1, m + 1):
        target = np.quantile(totals, k / (m + 1))
        dist = np.abs(totals - target)
        dist[chosen] = np.inf
        chosen.append(int(np.argmin(dist)))
    return tuple(panel.items[i] for i in chosen)


def quantize_pair(v_i: np.ndarray, v_j: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Quantize one pairwise search: joint max-normalization to 100, then
    round half away from zero.

    Both outputs share the scale of the pair, so their pre-rounding ratio
    equals the true volume ratio at every period.

    Parameters
    ----------
    v_i, v_j : arrays of equal length
        Nonnegative volumes of the item and the comparator.

    Returns
    -------
    (p_plus, p_minus) : integer arrays in 0..100, joint maximum exactly 100.
    """
    v_i = np.asarray(v_i, dtype=float)
    v_j = np.asarray(v_j, dtype=float)
    if v_i.shape != v_j.shape or v_i.ndim != 1:
        raise ValueError("both series must be 1-D and of equal length")
    if np.any(~np.isfinite(v_i)) or np.any(~np.isfinite(v_j)):
        raise ValueError("volumes must be finite")
    if np.any(v_i < 0) or np.any(v_j < 0):
        raise ValueError("volumes must be nonnegative")
    peak = max(v_i.max(), v_j.max())
    if peak <= 0:
        raise ValueError("all-zero input pair cannot be scaled")
    # np.floor(x + 0.5) is round-half-away-from-zero for nonnegative x.
    p_plus = np.floor(MAX_SCORE * v_i / peak + 0.5).astype(np.int64)
    p_minus = np.floor(MAX_SCORE * v_j / peak + 0.5).astype(np.int64)
    return p_plus, p_minus


def build_comparison_tensor(
    panel: LatentVolumePanel, comparators: tuple[str, ...] | list[str]
) -> ComparisonTensor:
    """Quantize every (item, comparator) pair independently.

    Each slice gets its own max-normalization, which is exactly the
    property the aggregation stage has to undo. Comparators must name
    panel items; where a comparator is the item itself the slice is fully
    masked (a self-comparison carries no information).
    """
    comp = tuple(str(c) for c in comparators)
    missing_ids = [c for c in comp if c not in panel.items]
    if missing_ids:
        raise ValueError(f"comparators not in panel: {missing_ids}")
    n, T = panel.values.shape
    m = len(comp)
    p_plus = np.zeros((n, m, T), dtype=np.int64)
    p_minus = np.zeros((n, m, T), dtype=np.int64)
    missing = np.zeros((n, m, T), dtype=bool)
    comp_rows = [panel.items.index(c) for c in comp]
    for i in range(n):
        for j, cj in enumerate(comp_rows):
            if i == cj:
                missing[i, j] = True
                continue
            p_plus[i, j], p_minus[i, j] = quantize_pair(
                panel.values[i], panel.values[cj]
            )
    return ComparisonTensor(
        items=panel.items,
        comparators=comp,
        axis=panel.axis,
        p_plus=p_plus,
        p_minus=p_minus,
        missing=missing,
    )


def exact_summed_matrices(
    panel: LatentVolumePanel, comparators: tuple[str, ...] | list[str]
) -> SummedComparisonMatrices:
    """Window sums of the pre-rounding scores (quantization disabled).

    Oracle path: identical per-pair max-normalization but no integer
    rounding, so downstream ratios are exact and chaining must recover
    true volume ratios to numerical precision.
    """
    comp = tuple(str(c) for c in comparators)
    missing_ids = [c for c in comp if c not in panel.items]
    if missing_ids:
        raise ValueError(f"comparators not in panel: {missing_ids}")
    n, T = panel.values.shape
    m = len(comp)
    s_plus = np.zeros((n, m))
    s_minus = np.zeros((n, m))
    comp_rows = [panel.items.index(c) for c in comp]
    for i in range(n):
        for j, cj in enumerate(comp_rows):
            if i == cj:
                continue
            peak = max(panel.values[i].max(), panel.values[cj].max())
            s_plus[i, j] = (MAX_SCORE * panel.values[i] / peak).sum()
            s_minus[i, j] = (MAX_SCORE * panel.values[cj] / peak).sum()
    return SummedComparisonMatrices(
        items=panel.items,
        comparators=comp,
        s_plus=s_plus,
        s_minus=s_minus,
        n_periods=T,
    )


def ratio_bounds(p1, p2):
    """Rounding-error envelope for a ratio of two quantized scores.

    For observed integer scores p1 and p2 (each within 1..100) the true
    pre-rounding ratio lies in [(p1-0.5)/(p2+0.5), (p1+0.5)/(p2-0.5)].
    Accepts scalars or equal-shaped arrays.

    Returns
    -------
    (lower, upper) : floats or arrays, 0 < lower <= upper.
    """
    p1 = np.asarray(p1, dtype=float)
    p2 = np.asarray(p2, dtype=float)
    if np.any(p1 < 1) or np.any(p1 > MAX_SCORE) or np.any(p2 < 1) or np.any(p2 > MAX_SCORE):
        raise ValueError("scores must lie in 1..100 (a zero score has no finite bound)")
    lower = (p1 - 0.5) / (p2 + 0.5)
    upper = (p1 + 0.5) / (p2 - 0.5)
    if lower.ndim == 0:
        return float(lower), float(upper)
    return lower, upper
