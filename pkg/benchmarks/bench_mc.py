"""Benchmark the Monte Carlo path kernels: compiled core vs numpy fallback.

Usage: python benchmarks/bench_mc.py [--paths N] [--dt F]
"""

import argparse
import os
import time

import pppcontract as pc


def run(result, sim, force_python: bool):
    if force_python:
        os.environ["PPPCONTRACT_PUREPY"] = "1"
    else:
        os.environ.pop("PPPCONTRACT_PUREPY", None)
    t0 = time.perf_counter()
    out = pc.simulate_principal_value(result, sim)
    elapsed = time.perf_counter() - t0
    os.environ.pop("PPPCONTRACT_PUREPY", None)
    return out, elapsed


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--paths", type=int, default=20_000)
    ap.add_argument("--dt", type=float, default=1e-3)
    args = ap.parse_args()

    print("solving (sigma=1.2, dx=0.01) ...")
    t0 = time.perf_counter()
    result = pc.solve_hjbvi(pc.SolverConfig(model=pc.ContractModel.default()))
    print(f"  solve: {time.perf_counter() - t0:.2f}s "
          f"({result.iterations} policy iterations, boundary {result.free_boundary:.3f})")

    sim = pc.SimConfig(x0=1.0, paths=args.paths, dt=args.dt, seed=7)
    have_core = pc.backend_name() == "cython"
    rows = []
    if have_core:
        out_c, t_c = run(result, sim, force_python=False)
        rows.append(("cython", t_c, out_c))
    out_p, t_p = run(result, sim, force_python=True)
    rows.append(("python", t_p, out_p))

    print(f"\nprincipal-value simulation, x0=1.0, {args.paths} paths, dt={args.dt:g}:")
    for name, elapsed, out in rows:
        print(f"  {name:7s} {elapsed:8.2f}s  ({args.paths / elapsed:10.0f} paths/s)  "
              f"mean={out.mean:.6f} se={out.std_error:.6f}")
    if have_core:
        print(f"  speedup: {t_p / t_c:.1f}x")
        same = abs(rows[0][2].mean - rows[1][2].mean) <= 1e-9
        print(f"  backends agree to 1e-9: {same}")
    else:
        print("  compiled core not built; only the numpy fallback was timed")


if __name__ == "__main__":
    main()
