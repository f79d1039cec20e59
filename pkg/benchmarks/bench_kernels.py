"""Compare the compiled and pure-Python moment integrators.

    python benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import time

import numpy as np

from sqnamr import kernels
from sqnamr.langevin import MomentState


def _time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    y0 = MomentState.vacuum().to_vector()
    grid = np.linspace(0.0, 40.0, 201)
    backends = kernels.backends()
    print(f"default backend: {kernels.BACKEND}")
    results = {}
    for name, mod in backends.items():
        traj_t, (traj, info) = _time(
            lambda: mod.integrate_moments(y0, 0.3, 1.0, 2.0, grid), args.repeat)
        ss_t, (y, t_ss, _) = _time(
            lambda: mod.integrate_to_steady(y0, 0.3, 1.0, 2.0), args.repeat)
        results[name] = traj
        print(f"{name:7s} trajectory {traj_t * 1e3:9.3f} ms ({info['steps']} steps)   "
              f"steady state {ss_t * 1e3:9.3f} ms (t = {t_ss:.1f})")
    if len(results) == 2:
        diff = np.max(np.abs(results["cython"] - results["python"]))
        print(f"max |cython - python| over the trajectory: {diff:.3e}")


if __name__ == "__main__":
    main()
