"""Shared oracle helpers for the aggregator and acceptance suites."""

import numpy as np

from trendstitch import ratio_bounds, sum_tensor
from trendstitch.aggregate import _select_anchors


def anchor_scores(tensor, anchor_rule="max_shared"):
    """Item-side anchor scores (n, T), NaN where the anchor cell is masked."""
    sums = sum_tensor(tensor)
    jstar = _select_anchors(sums, anchor_rule)
    rows = np.arange(len(tensor.items))
    p = tensor.p_plus[rows, jstar, :].astype(float)
    p[tensor.missing[rows, jstar, :]] = np.nan
    return p


def stitched_ratio_errors(tensor, stitched, latent):
    """Cross-item ratio errors of a stitched panel against the latent truth.

    For every unordered item pair and period where both anchor scores are
    observed and at least 1, compares the stitched value ratio with the
    true volume ratio and derives the per-cell rounding envelope from the
    product of score bounds around the observed point ratio.

    Returns
    -------
    err : abs relative error |stitched_ratio / true_ratio - 1| per cell
    halfwidth : one-sided envelope width (upper bound / point - 1) per cell
    coverage : fraction of cells whose true ratio falls inside the envelope
    """
    p = anchor_scores(tensor)
    n, T = latent.shape
    iu, ku = np.triu_indices(n, 1)
    p1 = p[iu]
    p2 = p[ku]
    ok = np.isfinite(p1) & np.isfinite(p2) & (p1 >= 1) & (p2 >= 1)
    s1 = np.broadcast_to(stitched.values[iu], p1.shape)[ok]
    s2 = np.broadcast_to(stitched.values[ku], p1.shape)[ok]
    v1 = np.broadcast_to(latent[iu], p1.shape)[ok]
    v2 = np.broadcast_to(latent[ku], p1.shape)[ok]
    p1, p2 = p1[ok], p2[ok]

    got = s1 / s2
    true = v1 / v2
    err = np.abs(got / true - 1.0)

    lower, upper = ratio_bounds(p1, p2)
    point = p1 / p2
    halfwidth = upper / point - 1.0
    inside = (true / got >= lower / point) & (true / got <= upper / point)
    return err, halfwidth, float(inside.mean())
