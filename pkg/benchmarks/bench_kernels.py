"""Timing comparison of the compiled and pure-Python kernel paths.

Runs the coordinate-descent lasso path and the PAM BUILD/SWAP scan on
workloads shaped like the rolling-evaluation and clustering hot spots,
once through the jit-compiled wrappers and once through the plain
Python implementations, and prints the speedups. With numba disabled
(TRENDSTITCH_NUMBA=0) only the plain path is available, so the script
reports that and times it alone.

Usage: python3 benchmarks/bench_kernels.py [--repeats N]
"""

import argparse
import time

import numpy as np

from trendstitch.kernels import (
    USING_NUMBA,
    _lasso_path_impl,
    _pam_build_impl,
    _pam_swap_impl,
    lasso_path,
    pam_build,
    pam_swap,
)


def best_of(fn, repeats):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def lasso_case(seed=0, n=60, p=30, n_lams=40):
    rng = np.random.default_rng(seed)
    X = np.column_stack([np.ones(n), rng.normal(size=(n, p - 1))])
    beta = np.zeros(p)
    beta[:6] = rng.normal(size=6) * 2
    y = X @ beta + 0.5 * rng.normal(size=n)
    penalized = np.ones(p, dtype=bool)
    penalized[0] = False
    lams = np.geomspace(100.0, 1e-3, n_lams)
    return X, y, lams, penalized, 100000, 1e-10


def pam_case(seed=0, n=200, k=6):
    rng = np.random.default_rng(seed)
    centers = rng.normal(size=(k, 3)) * 8
    pts = np.concatenate(
        [centers[i] + rng.normal(size=(n // k, 3)) for i in range(k)]
    )
    diff = pts[:, None, :] - pts[None, :, :]
    return np.sqrt((diff**2).sum(axis=2)), k


def report(name, fast, slow):
    if fast is None:
        print(f"{name:<24} plain {slow * 1e3:9.2f} ms   (numba disabled)")
    else:
        print(
            f"{name:<24} jit {fast * 1e3:9.2f} ms   plain {slow * 1e3:9.2f} ms"
            f"   speedup {slow / fast:6.1f}x"
        )


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    X, y, lams, penalized, max_iter, tol = lasso_case()
    d, k = pam_case()

    print(f"numba active: {USING_NUMBA}")
    if USING_NUMBA:
        # warm-up calls so compilation time stays out of the measurement
        lasso_path(X, y, lams, penalized, max_iter, tol)
        build0 = pam_build(d, k)
        pam_swap(d, build0)

        t_fast, coefs_fast = best_of(
            lambda: lasso_path(X, y, lams, penalized, max_iter, tol), args.repeats
        )
        t_slow, coefs_slow = best_of(
            lambda: _lasso_path_impl(X, y, lams, penalized, max_iter, tol),
            args.repeats,
        )
        np.testing.assert_allclose(coefs_fast, coefs_slow, rtol=1e-12, atol=1e-12)
        report(f"lasso_path {X.shape}x{lams.size}", t_fast, t_slow)

        t_fast, m_fast = best_of(lambda: pam_swap(d, pam_build(d, k)), args.repeats)
        t_slow, m_slow = best_of(
            lambda: _pam_swap_impl(d, _pam_build_impl(d, k)), args.repeats
        )
        assert np.array_equal(m_fast[0], m_slow[0])
        report(f"pam build+swap n={d.shape[0]} k={k}", t_fast, t_slow)
    else:
        t_slow, _ = best_of(
            lambda: _lasso_path_impl(X, y, lams, penalized, max_iter, tol),
            args.repeats,
        )
        report(f"lasso_path {X.shape}x{lams.size}", None, t_slow)
        t_slow, _ = best_of(
            lambda: _pam_swap_impl(d, _pam_build_impl(d, k)), args.repeats
        )
        report(f"pam build+swap n={d.shape[0]} k={k}", None, t_slow)


if __name__ == "__main__":
    main()
