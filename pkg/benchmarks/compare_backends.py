#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

Runs each hot kernel on a representative workload under both backends,
checks the outputs agree (same counter-based streams; differences are
last-ulp libm noise), and prints a timing table.

    python3 benchmarks/compare_backends.py [--n N]
"""

import argparse
import time

import numpy as np

from nonovershoot import backend, kernels, model
from nonovershoot import limit_process as lp
from nonovershoot.rng import TAG_LOGBREVE, TAG_SUBORDINATOR, TAG_WALK, replica_keys


def _walk_workload(n):
    spec = model.pareto_spec(alpha=0.75, gamma=1.0)
    keys = replica_keys(1, TAG_WALK, n)
    pack = model.pack_tilted(spec)
    return lambda: kernels.walk_passage(keys, 200.0, 10**8, -1, pack)


def _sub_workload(n):
    keys = replica_keys(2, TAG_SUBORDINATOR, n)
    return lambda: kernels.sub_passage(keys, 0.75, 1e-4, 0.0)


def _breve_workload(n):
    alpha, dl = 0.75, 1e-4
    keys = replica_keys(3, TAG_LOGBREVE, n)
    rate = lp.driver_rate(alpha, dl)
    emdelta = np.expm1(dl)
    mu = lp.small_jump_drift(alpha, dl)
    v_stop = (1e-6 / (2 * lp.moment_tau(1, alpha))) ** (1 / alpha)
    return lambda: kernels.breve_paths(keys, alpha, rate, emdelta, mu, v_stop)


def run(name, make, n):
    work = make(n)
    rows = {}
    for be in ("numba", "numpy") if backend.has_numba() else ("numpy",):
        backend.set_backend(be)
        work()  # warm up (JIT compile / cache touch)
        t0 = time.perf_counter()
        out = work()
        rows[be] = (time.perf_counter() - t0, out)
    if len(rows) == 2:
        for a, b in zip(rows["numba"][1], rows["numpy"][1]):
            assert np.allclose(a, b, rtol=1e-9, atol=1e-12, equal_nan=True), name
        speedup = rows["numpy"][0] / rows["numba"][0]
        print(f"{name:<22} numba {rows['numba'][0]:8.3f}s   "
              f"numpy {rows['numpy'][0]:8.3f}s   speedup {speedup:6.1f}x   outputs agree")
    else:
        print(f"{name:<22} numpy {rows['numpy'][0]:8.3f}s   (numba unavailable)")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=20000, help="replicas per workload")
    args = ap.parse_args()
    print(f"backends: numba available = {backend.has_numba()}, n = {args.n}")
    run("walk passage (r=200)", _walk_workload, args.n)
    run("subordinator passage", _sub_workload, args.n)
    run("decay paths", _breve_workload, args.n)


if __name__ == "__main__":
    main()
