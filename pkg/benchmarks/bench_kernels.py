#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python twins.

Usage:
    python benchmarks/bench_kernels.py [--repeat N]

Workloads are the three hot paths: backward Riccati propagation of the
log-derivative over a tabulated potential, the adaptive Cauchy integration,
and the Jacobi eigensolver on small Hermitian matrices.  Both backends run
the identical inputs; the table reports per-call times and the speedup.
"""

import argparse
import cmath
import math
import time

import numpy as np


def sqrt_cut(z):
    w = cmath.sqrt(complex(z))
    if w.imag < 0 or (w.imag == 0 and w.real < 0):
        return -w
    return w


def bench(fn, repeat):
    best = math.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def workloads():
    xs = np.linspace(0.0, 12.0, 481)
    qs = 2.0 * np.exp(-xs) + 0.3 * np.sin(xs) ** 2
    tail = float(qs[-1])
    lams = [1j, 1 + 1j, -1 + 0j, 2 + 3j, -25 + 0.5j, 0.3 + 0.02j]

    rng = np.random.default_rng(3)
    mats = []
    for n in (4, 8, 16):
        b = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        mats.append((b + b.conj().T) / 2.0)

    def riccati(mod):
        for lam in lams:
            u_b = 1j * sqrt_cut(lam - tail)
            mod.riccati_backward(2, 0.0, xs, qs, tail, lam, 0.0, 25.0, u_b, 1e-9)

    def cauchy(mod):
        for lam in (0.5 + 0.5j, -2 + 0j, 9.7 + 0j):
            mod.cauchy_integrate(2, 0.0, xs, qs, tail, lam, 0.0, 12.0, 1e-9)

    def jacobi(mod):
        for m in mats:
            for _ in range(20):
                mod.hermitian_eigenvalues(m)

    return [("riccati backward (6 lambdas, 481-node table)", riccati),
            ("cauchy DP54 (3 lambdas, span 12)", cauchy),
            ("jacobi eigenvalues (60 small matrices)", jacobi)]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    from slsys.backend import get_backend

    py = get_backend("python")
    try:
        comp = get_backend("compiled")
    except ImportError:
        comp = None
        print("compiled backend not built; timing the pure-Python kernels only\n")

    header = f"{'workload':<48} {'python':>10} {'compiled':>10} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for name, work in workloads():
        tp = bench(lambda: work(py), args.repeat)
        if comp is not None:
            tc = bench(lambda: work(comp), args.repeat)
            print(f"{name:<48} {tp * 1e3:>8.2f}ms {tc * 1e3:>8.2f}ms {tp / tc:>7.1f}x")
        else:
            print(f"{name:<48} {tp * 1e3:>8.2f}ms {'-':>10} {'-':>8}")


if __name__ == "__main__":
    main()
