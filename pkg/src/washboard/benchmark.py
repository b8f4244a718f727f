"""Kernel benchmark: compiled backend versus pure Python.

Run as `python3 -m washboard.benchmark`.  Both backends integrate the
same lanes with the same pregenerated noise and signal arrays, so
besides throughput this doubles as a bitwise agreement check between
the two implementations.
"""

from __future__ import annotations

import argparse
import math
import time

import numpy as np

from . import backend
from .signals import ContinuousWave, sample_half_grid


def _run_workload(kernel, steps, lanes, chunk, draws, signal, dt, v, beta,
                  noise_scale):
    phi = np.full(lanes, 0.1)
    phi_dot = np.zeros(lanes)
    first = np.full(lanes, -1, dtype=np.int64)
    phi_buf = np.empty(chunk * lanes)
    start = time.perf_counter()
    step0 = 0
    while step0 < steps:
        n = min(chunk, steps - step0)
        sig_half = sample_half_grid(signal, 0.0, step0, n, dt)
        kernel.run_chunk(phi, phi_dot, first, n, lanes, step0, 0.0, dt, v,
                         beta, noise_scale,
                         math.inf, draws[step0 * lanes:(step0 + n) * lanes],
                         sig_half, phi_buf)
        step0 += n
    elapsed = time.perf_counter() - start
    return elapsed, phi.copy(), phi_dot.copy()


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        description="Compare integration kernel backends")
    parser.add_argument("--steps", type=int, default=200000,
                        help="steps per lane (default 200000)")
    parser.add_argument("--lanes", type=int, default=8,
                        help="concurrent lanes (default 8)")
    parser.add_argument("--chunk", type=int, default=16384,
                        help="steps per kernel call (default 16384)")
    args = parser.parse_args(argv)

    dt, v, beta = 0.01, 5e-4, 1e-4
    noise_scale = math.sqrt(2.0 * beta * 5e-4 * dt)
    signal = ContinuousWave(i_mw=0.003, omega_mw=1.0)
    draws = np.random.default_rng(0).standard_normal(args.steps * args.lanes)

    names = backend.available_backends()
    print(f"available backends: {', '.join(names)}")
    results = {}
    for name in names:
        kernel = backend.get_backend(name)
        elapsed, phi, phi_dot = _run_workload(
            kernel, args.steps, args.lanes, args.chunk, draws, signal, dt,
            v, beta, noise_scale)
        rate = args.steps * args.lanes / elapsed / 1e6
        results[name] = (phi, phi_dot)
        print(f"backend {name}: {rate:8.2f} Msteps/s "
              f"({elapsed:.3f} s for {args.steps} steps x {args.lanes} lanes)")

    if len(results) == 2:
        pc, cc = results["python"], results["c"]
        same = (np.array_equal(pc[0].view(np.uint64), cc[0].view(np.uint64))
                and np.array_equal(pc[1].view(np.uint64),
                                   cc[1].view(np.uint64)))
        print("bitwise agreement:",
              "identical final states" if same else "MISMATCH")
        return 0 if same else 1
    print("bitwise agreement: skipped (single backend)")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
