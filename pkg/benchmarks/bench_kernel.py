#!/usr/bin/env python3
"""Benchmark the compiled simulation kernel against the pure-Python fallback.

Times the workloads that dominate real use: single-gas (CO2e) runs as used
by the emulator pipeline, full 39-gas runs as used by calibration and
alignment, and a posterior-predictive style batch.

    python benchmarks/bench_kernel.py
"""

from __future__ import annotations

import time

import numpy as np

from tempalign import bundle
from tempalign.fair import EmissionPathway, ParameterVector, available_backends, co2e_schema, run


def time_runs(pathway, theta, backend, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        run(pathway, theta, backend=backend)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    theta = ParameterVector()
    backends = available_backends()
    print(f"available backends: {', '.join(backends)}")

    scen = bundle.load_bundled_scenario("SSP2-RCP4.5")
    multigas = scen.pathway
    co2e = EmissionPathway(
        years=multigas.years,
        values=(multigas.co2e_total() * (12.0 / 44.0)).reshape(-1, 1),
        schema=co2e_schema())

    workloads = [
        ("336-year, 1 gas (CO2e mode)", co2e, 20),
        ("336-year, 39 gases", multigas, 10),
    ]
    results = {}
    for name, pathway, repeats in workloads:
        for backend in backends:
            results[(name, backend)] = time_runs(pathway, theta, backend, repeats)

    print(f"\n{'workload':<32} {'compiled':>12} {'python':>12} {'speedup':>9}")
    for name, _, _ in workloads:
        c = results.get((name, "compiled"))
        p = results[(name, "python")]
        if c is None:
            print(f"{name:<32} {'n/a':>12} {p * 1e3:>10.2f}ms {'':>9}")
        else:
            print(f"{name:<32} {c * 1e3:>10.2f}ms {p * 1e3:>10.2f}ms {p / c:>8.1f}x")

    # ensemble-style batch: 200 posterior-predictive draws, CO2e mode
    n = 200
    for backend in backends:
        t0 = time.perf_counter()
        for _ in range(n):
            run(co2e, theta, backend=backend)
        dt = time.perf_counter() - t0
        print(f"\n{n}-draw ensemble ({backend}): {dt:.2f} s "
              f"({dt / n * 1e3:.2f} ms/run)")


if __name__ == "__main__":
    main()
