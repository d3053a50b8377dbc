"""Hot numeric kernels with optional numba acceleration.

The inner loops here dominate runtime (coordinate-descent lasso paths run
inside every cross-validation fold of every rolling window; PAM swap scans
are quadratic per pass). Each kernel is written once in nopython-compatible
style; when numba is importable and the environment variable
``TRENDSTITCH_NUMBA`` is not set to ``0``/``false``/``off``/``no``, the
functions are jit-compiled, otherwise the plain numpy/python versions run.
Both paths compute identical results (see benchmarks/bench_kernels.py for
the speed comparison).
"""

from __future__ import annotations

import os

import numpy as np


def _want_numba() -> bool:
    flag = os.environ.get("TRENDSTITCH_NUMBA", "").strip().lower()
    if flag in ("0", "false", "off", "no"):
        return False
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


USING_NUMBA = _want_numba()


def _lasso_path_impl(X, y, lams, penalized, max_iter, tol):
    """Coordinate descent for min ||y - X b||^2 + lam * sum_j |b_j| over
    the penalized columns, solved for every lam in order with warm starts.

    Sweeps alternate between the active set (nonzero or unpenalized
    coefficients) and full passes that re-check the zeros; along a path
    most columns never move. The stop rule is scale-free: a lam is done
    when the largest squared fitted-value change of a single coordinate
    update, col_sq[j] * diff^2, falls to tol * sum((y - mean(y))^2).
    max_iter bounds total sweeps per lam. X columns are expected
    pre-scaled by the caller. Returns an (n_lams, p) coefficient array.
    """
    n, p = X.shape
    n_lams = lams.shape[0]
    coefs = np.zeros((n_lams, p))
    beta = np.zeros(p)
    resid = y.copy()
    col_sq = np.zeros(p)
    for j in range(p):
        s = 0.0
        for i in range(n):
            s += X[i, j] * X[i, j]
        col_sq[j] = s
    ybar = 0.0
    for i in range(n):
        ybar += y[i]
    ybar /= n
    y_scale = 0.0
    for i in range(n):
        y_scale += (y[i] - ybar) ** 2
    if y_scale <= 0.0:  # degenerate constant target
        y_scale = 1.0
    thresh = tol * y_scale
    active = np.empty(p, dtype=np.int64)
    n_active = 0
    for j in range(p):
        if not penalized[j]:
            active[n_active] = j
            n_active += 1
    for li in range(n_lams):
        half = 0.5 * lams[li]
        sweeps = 0
        while sweeps < max_iter:
            # converge on the current active set
            while sweeps < max_iter:
                sweeps += 1
                delta_max = 0.0
                for idx in range(n_active):
                    j = active[idx]
                    cj = col_sq[j]
                    if cj <= 0.0:
                        continue
                    bj = beta[j]
                    rho = cj * bj
                    for i in range(n):
                        rho += X[i, j] * resid[i]
                    if penalized[j]:
                        if rho > half:
                            new = (rho - half) / cj
                        elif rho < -half:
                            new = (rho + half) / cj
                        else:
                            new = 0.0
                    else:
                        new = rho / cj
                    diff = new - bj
                    if diff != 0.0:
                        for i in range(n):
                            resid[i] -= diff * X[i, j]
                        beta[j] = new
                        step = cj * diff * diff
                        if step > delta_max:
                            delta_max = step
                if delta_max <= thresh:
                    break
            # full pass: update every column, rebuild the active set
            sweeps += 1
            delta_max = 0.0
            n_active = 0
            for j in range(p):
                cj = col_sq[j]
                if cj > 0.0:
                    bj = beta[j]
                    rho = cj * bj
                    for i in range(n):
                        rho += X[i, j] * resid[i]
                    if penalized[j]:
                        if rho > half:
                            new = (rho - half) / cj
                        elif rho < -half:
                            new = (rho + half) / cj
                        else:
                            new = 0.0
                    else:
                        new = rho / cj
                    diff = new - bj
                    if diff != 0.0:
                        for i in range(n):
                            resid[i] -= diff * X[i, j]
                        beta[j] = new
                        step = cj * diff * diff
                        if step > delta_max:
                            delta_max = step
                if not penalized[j] or beta[j] != 0.0:
                    active[n_active] = j
                    n_active += 1
            if delta_max <= thresh:
                break
        for j in range(p):
            coefs[li, j] = beta[j]
    return coefs


def _pam_build_impl(d, k):
    """Greedy BUILD initialization: k medoid indices minimizing total cost."""
    n = d.shape[0]
    medoids = np.empty(k, dtype=np.int64)
    is_medoid = np.zeros(n, dtype=np.bool_)
    best = 0
    best_cost = np.inf
    for c in range(n):
        s = 0.0
        for i in range(n):
            s += d[c, i]
        if s < best_cost:
            best_cost = s
            best = c
    medoids[0] = best
    is_medoid[best] = True
    nearest = np.empty(n)
    for i in range(n):
        nearest[i] = d[best, i]
    for mi in range(1, k):
        best = -1
        best_gain = -np.inf
        for c in range(n):
            if is_medoid[c]:
                continue
            gain = 0.0
            for i in range(n):
                drop = nearest[i] - d[c, i]
                if drop > 0.0:
                    gain += drop
            if gain > best_gain:
                best_gain = gain
                best = c
        medoids[mi] = best
        is_medoid[best] = True
        for i in range(n):
            if d[best, i] < nearest[i]:
                nearest[i] = d[best, i]
    return medoids


def _pam_swap_impl(d, medoids_in):
    """SWAP passes: apply the best cost-reducing (medoid, candidate) swap
    until none improves. Returns (medoids, total_cost)."""
    n = d.shape[0]
    k = medoids_in.shape[0]
    medoids = medoids_in.copy()
    is_medoid = np.zeros(n, dtype=np.bool_)
    for mi in range(k):
        is_medoid[medoids[mi]] = True
    near_d = np.empty(n)
    near_m = np.empty(n, dtype=np.int64)
    second_d = np.empty(n)
    while True:
        for i in range(n):
            nd = np.inf
            nm = -1
            sd = np.inf
            for mi in range(k):
                dist = d[medoids[mi], i]
                if dist < nd:
                    sd = nd
                    nd = dist
                    nm = mi
                elif dist < sd:
                    sd = dist
            near_d[i] = nd
            near_m[i] = nm
            second_d[i] = sd
        best_delta = -1e-12
        best_mi = -1
        best_h = -1
        for mi in range(k):
            for h in range(n):
                if is_medoid[h]:
                    continue
                delta = 0.0
                for i in range(n):
                    dh = d[h, i]
                    if near_m[i] == mi:
                        alt = second_d[i]
                        if dh < alt:
                            alt = dh
                        delta += alt - near_d[i]
                    elif dh < near_d[i]:
                        delta += dh - near_d[i]
                if delta < best_delta:
                    best_delta = delta
                    best_mi = mi
                    best_h = h
        if best_mi < 0:
            break
        is_medoid[medoids[best_mi]] = False
        is_medoid[best_h] = True
        medoids[best_mi] = best_h
    cost = 0.0
    for i in range(n):
        nd = np.inf
        for mi in range(k):
            if d[medoids[mi], i] < nd:
                nd = d[medoids[mi], i]
        cost += nd
    return medoids, cost


if USING_NUMBA:
    from numba import njit

    lasso_path = njit(cache=True)(_lasso_path_impl)
    pam_build = njit(cache=True)(_pam_build_impl)
    pam_swap = njit(cache=True)(_pam_swap_impl)
else:  # pragma: no cover - exercised via TRENDSTITCH_NUMBA=0 runs
    lasso_path = _lasso_path_impl
    pam_build = _pam_build_impl
    pam_swap = _pam_swap_impl
