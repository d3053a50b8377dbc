"""Core data model: monthly time axis, volume panels, comparison tensors.

Everything here is an immutable container with validation at construction.
Arrays are copied in and marked read-only, so instances can be shared freely
across threads or subprocesses.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np

_PERIOD_RE = re.compile(r"^\d{4}-(0[1-9]|1[0-2])$")

MAX_SCORE = 100


def month_ordinal(period: str) -> int:
    """Map a 'YYYY-MM' period label to a consecutive month integer."""
    if not _PERIOD_RE.match(period):
        raise ValueError(f"bad period label {period!r}, expected 'YYYY-MM'")
    year, month = period.split("-")
    return int(year) * 12 + (int(month) - 1)


def month_label(ordinal: int) -> str:
    year, month = divmod(ordinal, 12)
    return f"{year:04d}-{month + 1:02d}"


def month_range(start: str, count: int) -> tuple[str, ...]:
    """Consecutive month labels beginning at ``start``."""
    if count < 2:
        raise ValueError("a time axis needs at least 2 periods")
    first = month_ordinal(start)
    return tuple(month_label(first + k) for k in range(count))


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.flags.writeable = False
    return a


def _check_unique(labels, what: str) -> tuple[str, ...]:
    labels = tuple(str(x) for x in labels)
    if len(set(labels)) != len(labels):
        raise ValueError(f"duplicate {what} identifiers")
    if not labels:
        raise ValueError(f"empty {what} list")
    return labels


@dataclass(frozen=True, eq=False)
class TimeAxis:
    """Strictly increasing, gap-free sequence of calendar months."""

    periods: tuple[str, ...]

    def __post_init__(self):
        periods = tuple(str(p) for p in self.periods)
        if len(periods) < 2:
            raise ValueError("time axis must have at least 2 periods")
        ords = [month_ordinal(p) for p in periods]
        for a, b in zip(ords, ords[1:]):
            if b != a + 1:
                raise ValueError(
                    f"periods must be consecutive months, gap or reversal at {month_label(a)} -> {month_label(b)}"
                )
        object.__setattr__(self, "periods", periods)

    def __len__(self) -> int:
        return len(self.periods)

    def index_of(self, period: str) -> int:
        try:
            return self.periods.index(period)
        except ValueError:
            raise KeyError(f"period {period!r} not on axis") from None


@dataclass(frozen=True, eq=False)
class LatentVolumePanel:
    """True (unobservable) search volumes per item and period.

    values[i, t] > 0 for every cell; the panel is the simulator's ground
    truth and the reference for oracle checks.
    """

    items: tuple[str, ...]
    axis: TimeAxis
    values: np.ndarray

    def __post_init__(self):
        items = _check_unique(self.items, "item")
        values = np.asarray(self.values, dtype=float)
        if values.shape != (len(items), len(self.axis)):
            raise ValueError(
                f"values shape {values.shape} does not match ({len(items)}, {len(self.axis)})"
            )
        if not np.all(np.isfinite(values)) or np.any(values <= 0):
            raise ValueError("latent volumes must be finite and strictly positive")
        object.__setattr__(self, "items", items)
        object.__setattr__(self, "values", _freeze(values))

    @property
    def n_items(self) -> int:
        return len(self.items)

    def total_volumes(self) -> np.ndarray:
        """Per-item volume summed over the whole window."""
        return self.values.sum(axis=1)


@dataclass(frozen=True, eq=False)
class ComparisonTensor:
    """Quantized pairwise comparison scores, one slice per (item, comparator).

    p_plus[i, j, t] is the item's integer score in the pairwise search
    against comparator j, p_minus the comparator's score in the same
    search; both live on the shared 0..100 scale of that search. Missing
    observations are an explicit boolean mask, never encoded as zeros.
    Identity pairs (item is its own comparator) carry no information and
    must be fully masked.
    """

    items: tuple[str, ...]
    comparators: tuple[str, ...]
    axis: TimeAxis
    p_plus: np.ndarray
    p_minus: np.ndarray
    missing: np.ndarray

    def __post_init__(self):
        items = _check_unique(self.items, "item")
        comparators = _check_unique(self.comparators, "comparator")
        shape = (len(items), len(comparators), len(self.axis))
        p_plus = np.asarray(self.p_plus)
        p_minus = np.asarray(self.p_minus)
        missing = np.asarray(self.missing, dtype=bool)
        for name, a in (("p_plus", p_plus), ("p_minus", p_minus), ("missing", missing)):
            if a.shape != shape:
                raise ValueError(f"{name} shape {a.shape} does not match {shape}")
        if not np.issubdtype(p_plus.dtype, np.integer) or not np.issubdtype(
            p_minus.dtype, np.integer
        ):
            raise ValueError("comparison scores must be integer arrays")
        # Value rules (0..100 range, max-normalization) are validate_tensor's
        # job so ingested real data can be loaded first and reported on.
        # A self-comparison is meaningless; the constructor demands it be masked.
        for i, item in enumerate(items):
            for j, comp in enumerate(comparators):
                if item == comp and not missing[i, j].all():
                    raise ValueError(
                        f"identity pair ({item!r}) must be fully masked"
                    )
        object.__setattr__(self, "items", items)
        object.__setattr__(self, "comparators", comparators)
        object.__setattr__(self, "p_plus", _freeze(p_plus))
        object.__setattr__(self, "p_minus", _freeze(p_minus))
        object.__setattr__(self, "missing", _freeze(missing))

    @property
    def shape(self) -> tuple[int, int, int]:
        return (len(self.items), len(self.comparators), len(self.axis))


@dataclass(frozen=True, eq=False)
class Violation:
    """One validation finding: which rule, where, and what was seen."""

    rule: str
    location: str
    detail: str


def validate_tensor(tensor: ComparisonTensor) -> tuple[Violation, ...]:
    """Enumerate rule violations in a comparison tensor.

    Returns every finding instead of failing on the first, so callers can
    report or warn in bulk. Checked rules:

    - observed scores inside 0..100, one "range" finding per offending
      cell with its (item, comparator, period) coordinate,
    - each fully observed pair slice attains a maximum of exactly 100
      across the 2T scores of the search ("max_norm"),
    - identity pairs fully masked ("identity").

    Structural consistency (shapes, integer dtype, masked identity pairs)
    is already guaranteed at construction.
    """
    findings = []
    obs = ~tensor.missing
    n, m, _ = tensor.shape
    for i in range(n):
        for j in range(m):
            where = f"item={tensor.items[i]!r} comparator={tensor.comparators[j]!r}"
            if tensor.items[i] == tensor.comparators[j]:
                if obs[i, j].any():
                    findings.append(
                        Violation("identity", where, "identity pair has observed cells")
                    )
                continue
            sel = obs[i, j]
            if not sel.any():
                continue
            any_range = False
            for name, a in (("p_plus", tensor.p_plus), ("p_minus", tensor.p_minus)):
                bad = sel & ((a[i, j] < 0) | (a[i, j] > MAX_SCORE))
                for t in np.flatnonzero(bad):
                    any_range = True
                    findings.append(
                        Violation(
                            "range",
                            f"{where} period={tensor.axis.periods[t]}",
                            f"{name} score {a[i, j, t]} outside 0..{MAX_SCORE}",
                        )
                    )
            if any_range:
                continue  # normalization is meaningless on out-of-range data
            hi = max(tensor.p_plus[i, j][sel].max(), tensor.p_minus[i, j][sel].max())
            if sel.all() and hi != MAX_SCORE:
                findings.append(
                    Violation(
                        "max_norm",
                        where,
                        f"fully observed pair peaks at {hi}, expected {MAX_SCORE}",
                    )
                )
    return tuple(findings)


@dataclass(frozen=True, eq=False)
class SummedComparisonMatrices:
    """Per-pair scores summed over the window: s_plus and s_minus, n x m.

    n_periods records the window length so the upper bound 100*T on any
    entry stays checkable after the tensor is gone.
    """

    items: tuple[str, ...]
    comparators: tuple[str, ...]
    s_plus: np.ndarray
    s_minus: np.ndarray
    n_periods: int

    def __post_init__(self):
        items = _check_unique(self.items, "item")
        comparators = _check_unique(self.comparators, "comparator")
        s_plus = np.asarray(self.s_plus, dtype=float)
        s_minus = np.asarray(self.s_minus, dtype=float)
        shape = (len(items), len(comparators))
        if s_plus.shape != shape or s_minus.shape != shape:
            raise ValueError(f"summed matrices must both be {shape}")
        if self.n_periods < 2:
            raise ValueError("n_periods must be at least 2")
        cap = MAX_SCORE * self.n_periods
        for name, a in (("s_plus", s_plus), ("s_minus", s_minus)):
            if not np.all(np.isfinite(a)) or a.min() < 0 or a.max() > cap:
                raise ValueError(f"{name} entries must be finite, >= 0 and <= {cap}")
        object.__setattr__(self, "items", items)
        object.__setattr__(self, "comparators", comparators)
        object.__setattr__(self, "s_plus", _freeze(s_plus))
        object.__setattr__(self, "s_minus", _freeze(s_minus))


@dataclass(frozen=True, eq=False)
class AggregateIndex:
    """Common-scale output of the chaining aggregation.

    ag_ratings carries the cross-item scale (top sorted item pinned at
    1000), multipliers the per-item rescaling factors relative to the
    base item active when each row was chained, and order the item
    indices in descending sum-ratio processing order.
    """

    items: tuple[str, ...]
    ag_ratings: np.ndarray
    multipliers: np.ndarray
    order: np.ndarray

    def __post_init__(self):
        items = _check_unique(self.items, "item")
        n = len(items)
        ag = np.asarray(self.ag_ratings, dtype=float)
        mult = np.asarray(self.multipliers, dtype=float)
        order = np.asarray(self.order, dtype=np.int64)
        if ag.shape != (n,) or mult.shape != (n,) or order.shape != (n,):
            raise ValueError("index arrays must all have length n")
        if not np.all(np.isfinite(ag)) or np.any(ag <= 0):
            raise ValueError("ag_ratings must be finite and positive")
        if not np.all(np.isfinite(mult)) or np.any(mult <= 0):
            raise ValueError("multipliers must be finite and positive")
        if sorted(order.tolist()) != list(range(n)):
            raise ValueError("order must be a permutation of item indices")
        if ag[order[0]] != 1000.0:
            raise ValueError("top sorted item must carry rating 1000 exactly")
        object.__setattr__(self, "items", items)
        object.__setattr__(self, "ag_ratings", _freeze(ag))
        object.__setattr__(self, "multipliers", _freeze(mult))
        object.__setattr__(self, "order", _freeze(order))

    def sort_rank(self) -> np.ndarray:
        """Per-item 1-based position in the processing order."""
        rank = np.empty(len(self.items), dtype=np.int64)
        rank[self.order] = np.arange(1, len(self.items) + 1)
        return rank


@dataclass(frozen=True, eq=False)
class StitchedPanel:
    """Common-scale multivariate series recovered from a comparison tensor.

    Cells are NaN where the item's anchor comparison was missing.
    """

    items: tuple[str, ...]
    axis: TimeAxis
    values: np.ndarray

    def __post_init__(self):
        items = _check_unique(self.items, "item")
        values = np.asarray(self.values, dtype=float)
        if values.shape != (len(items), len(self.axis)):
            raise ValueError(
                f"values shape {values.shape} does not match ({len(items)}, {len(self.axis)})"
            )
        observed = values[~np.isnan(values)]
        if observed.size and (np.any(~np.isfinite(observed)) or np.any(observed < 0)):
            raise ValueError("stitched values must be nonnegative (NaN marks missing)")
        object.__setattr__(self, "items", items)
        object.__setattr__(self, "values", _freeze(values))
