#!/usr/bin/env python3
"""Benchmark the compiled integration core against the pure-Python fallback.

Two workloads mirror the heaviest library calls:

* reduced: a 3 us trajectory in the experimental regime (tens of millions
  of RK4 substeps on the 4-component state);
* counting: two oscillation periods of the count-resolved ladder with a
  few hundred sectors.

Usage: python benchmarks/bench_kernels.py [--repeat N] [--quick]
"""

from __future__ import annotations

import argparse
import math
import time

import numpy as np

from qpcdeph import _core_py
from qpcdeph.dynamics import SystemParams, max_step
from qpcdeph.counting import counting_max_step, suggest_n_max
from qpcdeph.kernels import ACCURACY_REFINE
from qpcdeph.qpc import QpcConfig, rates
from qpcdeph.units import HBAR

try:
    from qpcdeph import _core
except ImportError:
    _core = None


def reduced_workload(t_final: float, n_points: int):
    params = SystemParams(detuning=30.0, tunnel_coupling=10.0, gamma_d=0.011751894268513535)
    interval = t_final / (n_points - 1)
    substeps = max(1, math.ceil(interval / (max_step(params) / ACCURACY_REFINE)))
    v0 = np.array([0.0, 1.0, 0.0, 0.0])
    args = (
        v0,
        params.tunnel_coupling / HBAR,
        params.detuning / HBAR,
        params.gamma_d,
        interval / substeps,
        n_points - 1,
        substeps,
    )
    total_steps = (n_points - 1) * substeps
    return "rk4_reduced", args, total_steps


def counting_workload(periods: float):
    qpc = QpcConfig(
        transmission=0.5, fermi_energy=1e4, bias_energy=1e3, distance=200.0, rel_permittivity=13.0
    )
    r = rates(qpc)
    params = SystemParams(detuning=3.0, tunnel_coupling=1.0, gamma_d=r.gamma_d)
    t_final = periods * params.oscillation_period
    n_max = suggest_n_max(r, t_final)
    guard = counting_max_step(params, r)
    n_points = 101
    interval = t_final / (n_points - 1)
    substeps = max(1, math.ceil(interval / (guard / ACCURACY_REFINE)))
    y0 = np.zeros((n_max + 1, 4))
    y0[0, 1] = 1.0
    args = (
        y0,
        params.tunnel_coupling / HBAR,
        params.detuning / HBAR,
        r.d_rate,
        r.d_prime_rate,
        interval / substeps,
        n_points - 1,
        substeps,
    )
    total_steps = (n_points - 1) * substeps
    return "rk4_counting", args, total_steps


def time_call(fn, args, repeat: int) -> tuple:
    best = math.inf
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=3, help="repetitions, best time wins")
    ap.add_argument("--quick", action="store_true", help="shrink the workloads ~10x")
    args = ap.parse_args()

    workloads = [
        reduced_workload(t_final=300.0 if args.quick else 3000.0, n_points=301),
        counting_workload(periods=0.25 if args.quick else 2.0),
    ]

    print(f"{'workload':14} {'steps':>12} {'python [s]':>12} {'cython [s]':>12} {'speedup':>9}")
    for name, call_args, steps in workloads:
        t_py, out_py = time_call(getattr(_core_py, name), call_args, args.repeat)
        if _core is not None:
            t_cy, out_cy = time_call(getattr(_core, name), call_args, args.repeat)
            a = out_py[0] if isinstance(out_py, tuple) else out_py
            b = out_cy[0] if isinstance(out_cy, tuple) else out_cy
            dev = float(np.max(np.abs(np.asarray(a) - np.asarray(b))))
            if dev > 1e-12:
                raise AssertionError(f"backend mismatch in {name}: {dev}")
            print(f"{name:14} {steps:>12} {t_py:>12.3f} {t_cy:>12.3f} {t_py / t_cy:>8.1f}x")
        else:
            print(f"{name:14} {steps:>12} {t_py:>12.3f} {'n/a':>12} {'':>9}")
    if _core is None:
        print("compiled extension not available; only the fallback was timed")


if __name__ == "__main__":
    main()
