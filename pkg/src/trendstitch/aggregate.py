"""Ratio-chaining aggregation of pairwise-normalized comparison data.

Each pairwise search reports both series on its own private 0..100 scale,
so scores from different searches are not directly comparable. The
aggregation chains median ratio quotients item-by-item (in descending
sum-ratio order, with the comparison base reset every NC items) to place
every item on one common rating scale, then rescales a per-item anchor
series onto that scale to recover a consistent multivariate panel.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    AggregateIndex,
    ComparisonTensor,
    StitchedPanel,
    SummedComparisonMatrices,
)

TOP_RATING = 1000.0

ANCHOR_RULES = ("max_shared", "max_own", "balanced")


class ChainError(ValueError):
    """Raised when an item has no valid quotient against its base."""


@dataclass(frozen=True)
class AggregatorConfig:
    """Chaining parameters. nc is the number of items compared per base."""

    nc: int = 30

    def __post_init__(self):
        if self.nc < 2:
            raise ValueError("nc must be at least 2")


@dataclass(frozen=True, eq=False)
class RatioMatrix:
    """Per-pair summed-score ratios plus the row sums driving the sort.

    r[i, j] = s_plus[i, j] / s_minus[i, j], NaN where s_minus is zero
    (masked or unresolved pairs). sum_ratio is the ratio of row sums, the
    proxy for relative item volume used to order the chain.
    """

    r: np.ndarray
    sum_plus: np.ndarray
    sum_ratio: np.ndarray


def sum_tensor(tensor: ComparisonTensor) -> SummedComparisonMatrices:
    """Sum scores over the window per (item, comparator), skipping masked cells."""
    keep = ~tensor.missing
    s_plus = np.where(keep, tensor.p_plus, 0).sum(axis=2).astype(float)
    s_minus = np.where(keep, tensor.p_minus, 0).sum(axis=2).astype(float)
    return SummedComparisonMatrices(
        items=tensor.items,
        comparators=tensor.comparators,
        s_plus=s_plus,
        s_minus=s_minus,
        n_periods=len(tensor.axis),
    )


def ratio_matrix(sums: SummedComparisonMatrices) -> RatioMatrix:
    """Build the ratio matrix and row-sum vectors from summed scores."""
    with np.errstate(divide="ignore", invalid="ignore"):
        r = np.where(sums.s_minus > 0, sums.s_plus / sums.s_minus, np.nan)
    sum_plus = sums.s_plus.sum(axis=1)
    sum_minus = sums.s_minus.sum(axis=1)
    dead = sum_minus <= 0
    if dead.any():
        names = [sums.items[i] for i in np.flatnonzero(dead)]
        raise ValueError(f"items with no resolvable comparisons: {names}")
    return RatioMatrix(r=r, sum_plus=sum_plus, sum_ratio=sum_plus / sum_minus)


def _chain_quotients(r_item: np.ndarray, r_base: np.ndarray) -> np.ndarray:
    """Valid per-comparator quotients of two ratio rows.

    A quotient counts only when both ratios are defined, the base ratio is
    nonzero, and the quotient is finite and strictly positive.
    """
    with np.errstate(divide="ignore", invalid="ignore"):
        q = r_item / r_base
    return q[np.isfinite(q) & (q > 0)]


def aggregate(
    sums: SummedComparisonMatrices, config: AggregatorConfig = AggregatorConfig()
) -> AggregateIndex:
    """Chain median ratio quotients into a common rating scale.

    Items are processed in descending sum-ratio order (stable sort,
    original position breaks ties). The first item is pinned at rating
    1000 with multiplier 1. Every later item i takes

        rating[i] = rating[base] * median_j(r[i, j] / r[base, j])

    over the comparators with valid quotients, and

        multiplier[i] = rating[i] * SumPlus[base] / (rating[base] * SumPlus[i]).

    The base is reset to the immediately preceding item whenever the
    1-based position counter hits NC+1, 2NC+1, ... so chaining always
    compares against a reasonably close-sized item.

    Raises ChainError naming the item if it has no valid quotient against
    the base active at its turn.
    """
    rm = ratio_matrix(sums)
    n = len(sums.items)
    order = np.argsort(-rm.sum_ratio, kind="stable")
    ratings_sorted = np.empty(n)
    mult = np.empty(n)
    ratings_sorted[0] = TOP_RATING
    mult[order[0]] = 1.0
    ibase = 0
    for pos in range(1, n):
        i = order[pos]
        b = order[ibase]
        quotients = _chain_quotients(rm.r[i], rm.r[b])
        if quotients.size == 0:
            raise ChainError(
                f"item {sums.items[i]!r} has no valid comparison quotient "
                f"against base {sums.items[b]!r}"
            )
        ratings_sorted[pos] = ratings_sorted[ibase] * np.median(quotients)
        mult[i] = (
            ratings_sorted[pos]
            * rm.sum_plus[b]
            / (ratings_sorted[ibase] * rm.sum_plus[i])
        )
        # 1-based counter of the next row; mod(counter, NC) = 1 resets the
        # base to the row just processed.
        if (pos + 2) % config.nc == 1:
            ibase = pos
    ag_ratings = np.empty(n)
    ag_ratings[order] = ratings_sorted
    return AggregateIndex(
        items=sums.items, ag_ratings=ag_ratings, multipliers=mult, order=order
    )


def _select_anchors(sums: SummedComparisonMatrices, anchor_rule: str) -> np.ndarray:
    """Pick the anchor comparator column per item.

    Candidates need both window sums positive (the pair resolves both
    series somewhere). Rules: "max_shared" takes the largest comparator
    sum s_minus (the default), "max_own" the largest item sum
    s_plus, "balanced" the largest min(s_plus, s_minus).
    """
    if anchor_rule not in ANCHOR_RULES:
        raise ValueError(f"unknown anchor_rule {anchor_rule!r}, expected one of {ANCHOR_RULES}")
    usable = (sums.s_plus > 0) & (sums.s_minus > 0)
    if anchor_rule == "max_shared":
        score = sums.s_minus
    elif anchor_rule == "max_own":
        score = sums.s_plus
    else:
        score = np.minimum(sums.s_plus, sums.s_minus)
    score = np.where(usable, score, -np.inf)
    jstar = score.argmax(axis=1)
    dead = ~usable[np.arange(len(sums.items)), jstar]
    if dead.any():
        names = [sums.items[i] for i in np.flatnonzero(dead)]
        raise ValueError(f"no usable anchor comparison for items: {names}")
    return jstar


def stitch(
    tensor: ComparisonTensor,
    index: AggregateIndex,
    anchor_rule: str = "max_shared",
) -> StitchedPanel:
    """Rescale each item's anchor comparison series onto the rating scale.

    For every item one anchor search j*(i) is selected by anchor_rule,
    and its item-side series is normalized by its own window sum and
    scaled by the item's aggregate rating:

        values[i, t] = ag_ratings[i] * p_plus[i, j*, t] / s_plus[i, j*].

    The per-search window sum cancels the private max-normalization scale
    of the anchor search, so cross-item value ratios estimate true volume
    ratios up to quantization error at any period. Periods where the
    anchor search is masked come out as NaN.
    """
    if tensor.items != index.items:
        raise ValueError("index was not computed from this tensor (item mismatch)")
    sums = sum_tensor(tensor)
    jstar = _select_anchors(sums, anchor_rule)
    n, _, T = tensor.shape
    rows = np.arange(n)
    p_anchor = tensor.p_plus[rows, jstar, :].astype(float)
    s_anchor = sums.s_plus[rows, jstar]
    values = index.ag_ratings[:, None] * p_anchor / s_anchor[:, None]
    values[tensor.missing[rows, jstar, :]] = np.nan
    return StitchedPanel(items=tensor.items, axis=tensor.axis, values=values)
