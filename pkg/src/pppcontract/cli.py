"""Command-line interface: solve, sigma sweeps, Monte Carlo verification, checks.

Exit codes: 0 success, 2 configuration error, 3 solver non-convergence,
4 verification failure.  All CSV output uses 12 significant digits and is
byte-stable for a given configuration and seed.
"""

from __future__ import annotations

import argparse
import io
import math
import sys
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .discretization import Grid, PolicyField, assemble_system, solve_tridiagonal
from .howard import SolverConfig, SolverNonConvergenceError, solve_hjbvi
from .model import (ContractModel, ModelParams, best_effort_from_sensitivity,
                    sensitivity_from_effort)
from .montecarlo import SimConfig, incentive_check, simulate_principal_value

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NSOLVE = 3
EXIT_VERIFY = 4

MC_TOLERANCE_PAD = 0.05


class ConfigError(Exception):
    pass


@dataclass
class RunConfig:
    alpha: float = 0.035
    beta: float = 0.017
    lam: float = 0.08
    delta: float = 0.065
    sigma: float = 1.2
    reservation: float = 0.0
    rho: float = 0.0
    xmax: float = 10.0
    dx: float = 0.01
    eps: float = 1e-9
    maxiter: int = 200
    amax: float = 100.0
    na: int = 512
    refine: int = 3
    paths: int = 10_000
    dt: float = 1e-3
    tmax: float = 400.0
    seed: int = 0
    x0: tuple[float, ...] = (1.0,)
    sweep: tuple[float, ...] = (1.2, 1.65, 2.2)
    out: str = "."

    def model(self) -> ContractModel:
        return ContractModel.default(ModelParams(
            alpha=self.alpha, beta=self.beta, lambda_agent=self.lam,
            delta_principal=self.delta, sigma=self.sigma,
            reservation=self.reservation, rho=self.rho))

    def solver_config(self, sigma: float | None = None) -> SolverConfig:
        cfg = self if sigma is None else replace(self, sigma=sigma)
        return SolverConfig(model=cfg.model(), x_max=cfg.xmax, delta=cfg.dx,
                            tol=cfg.eps, max_iterations=cfg.maxiter,
                            a_max=cfg.amax, n_a=cfg.na, refine_passes=cfg.refine)


_FLOAT_KEYS = {"alpha": "alpha", "beta": "beta", "lambda": "lam", "delta": "delta",
               "sigma": "sigma", "reservation": "reservation", "rho": "rho",
               "xmax": "xmax", "dx": "dx", "eps": "eps", "amax": "amax",
               "dt": "dt", "tmax": "tmax"}
_INT_KEYS = {"maxiter": "maxiter", "na": "na", "refine": "refine",
             "paths": "paths", "seed": "seed"}
_LIST_KEYS = {"x0": "x0", "sweep": "sweep"}
_STR_KEYS = {"out": "out"}


def _parse_float_list(text: str) -> tuple[float, ...]:
    vals = tuple(float(tok) for tok in text.replace(",", " ").split())
    if not vals:
        raise ValueError("empty list")
    return vals


def parse_config_file(path: str | Path, config: RunConfig) -> RunConfig:
    """Apply `key = value` lines (# starts a comment) onto a RunConfig."""
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip().lower()
        value = value.strip()
        try:
            if key in _FLOAT_KEYS:
                config = replace(config, **{_FLOAT_KEYS[key]: float(value)})
            elif key in _INT_KEYS:
                config = replace(config, **{_INT_KEYS[key]: int(value)})
            elif key in _LIST_KEYS:
                config = replace(config, **{_LIST_KEYS[key]: _parse_float_list(value)})
            elif key in _STR_KEYS:
                config = replace(config, **{_STR_KEYS[key]: value})
            else:
                raise ConfigError(f"{path}:{lineno}: unknown key '{key}'")
        except ConfigError:
            raise
        except ValueError as exc:
            raise ConfigError(f"{path}:{lineno}: bad value for '{key}': {exc}") from exc
    return config


def parse_config(args: argparse.Namespace) -> RunConfig:
    """Defaults, then config file, then flag overrides."""
    config = RunConfig()
    if args.config:
        config = parse_config_file(args.config, config)
    overrides = {}
    for name in ("alpha", "beta", "lam", "delta", "sigma", "xmax", "dx", "eps",
                 "amax", "na", "paths", "dt", "seed", "out"):
        value = getattr(args, name, None)
        if value is not None:
            overrides[name] = value
    if getattr(args, "x0", None) is not None:
        overrides["x0"] = _parse_float_list(args.x0)
    if overrides:
        config = replace(config, **overrides)
    return config


def _fmt(value: float) -> str:
    return f"{value:.12g}"


def _solution_csv(result) -> str:
    buf = io.StringIO()
    buf.write("x,value,effort,rent,stopping\n")
    x_all = np.concatenate(([0.0], result.grid.nodes, [result.grid.x_max]))
    a_all = np.concatenate(([0.0], result.policy.effort, [0.0]))
    r_all = np.concatenate(([0.0], result.policy.rent, [0.0]))
    stop_all = np.concatenate(([False], result.stopping, [True]))
    for x, v, a, r, s in zip(x_all, result.values, a_all, r_all, stop_all):
        buf.write(f"{_fmt(x)},{_fmt(v)},{_fmt(a)},{_fmt(r)},{1 if s else 0}\n")
    return buf.getvalue()


def _write(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def _solve_one(config: RunConfig, sigma: float):
    result = solve_hjbvi(config.solver_config(sigma))
    print(f"sigma={sigma:g}: v(0)={result.v0:.6f} boundary={result.free_boundary:.4f} "
          f"iterations={result.iterations} residual={result.complementarity_residual:.3e}")
    return result


def cmd_solve(config: RunConfig) -> int:
    try:
        result = _solve_one(config, config.sigma)
    except SolverNonConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NSOLVE
    _write(Path(config.out) / f"solution_{config.sigma:g}.csv", _solution_csv(result))
    return EXIT_OK


def cmd_sweep(config: RunConfig) -> int:
    if not config.sweep:
        print("error: sweep list is empty", file=sys.stderr)
        return EXIT_CONFIG
    failed = False
    boundaries: list[tuple[float, float]] = []
    for sigma in sorted(config.sweep):
        try:
            result = _solve_one(config, sigma)
        except SolverNonConvergenceError as exc:
            print(f"error: sigma={sigma:g}: {exc}", file=sys.stderr)
            failed = True
            continue
        _write(Path(config.out) / f"solution_{sigma:g}.csv", _solution_csv(result))
        boundaries.append((sigma, result.free_boundary))
    buf = io.StringIO()
    buf.write("sigma,boundary\n")
    for sigma, b in boundaries:
        buf.write(f"{_fmt(sigma)},{_fmt(b)}\n")
    _write(Path(config.out) / "regions.csv", buf.getvalue())
    return EXIT_NSOLVE if failed else EXIT_OK


def cmd_simulate(config: RunConfig) -> int:
    try:
        result = _solve_one(config, config.sigma)
    except SolverNonConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NSOLVE
    x_all = np.concatenate(([0.0], result.grid.nodes, [result.grid.x_max]))
    ok = True
    buf = io.StringIO()
    buf.write("x0,pde_value,mc_mean,mc_se,tau_mean,censored_frac\n")
    for x0 in config.x0:
        sim = SimConfig(x0=x0, paths=config.paths, dt=config.dt,
                        t_max=config.tmax, seed=config.seed)
        est = simulate_principal_value(result, sim)
        pde = float(np.interp(x0, x_all, result.values))
        if abs(est.mean - pde) > 3.0 * est.std_error + MC_TOLERANCE_PAD:
            ok = False
        if est.censored_fraction > 0.05:
            print(f"warning: x0={x0:g}: {100 * est.censored_fraction:.1f}% of paths "
                  "censored at the horizon", file=sys.stderr)
        buf.write(f"{_fmt(x0)},{_fmt(pde)},{_fmt(est.mean)},{_fmt(est.std_error)},"
                  f"{_fmt(est.mean_stop_time)},{_fmt(est.censored_fraction)}\n")
        print(f"x0={x0:g}: pde={pde:.5f} mc={est.mean:.5f} se={est.std_error:.5f}")
    _write(Path(config.out) / "mc_report.csv", buf.getvalue())
    return EXIT_OK if ok else EXIT_VERIFY


def _check_lines(config: RunConfig):
    """Invariant suite behind `check`: yields (name, passed, detail)."""
    model = config.model()
    p = model.params

    # feedback-map round trip over a log-spaced effort grid
    a_grid = np.concatenate(([0.0], np.logspace(-3, 2, 40)))
    back = best_effort_from_sensitivity(sensitivity_from_effort(a_grid, model), model)
    err = float(np.max(np.abs(back - a_grid)))
    yield "effort/sensitivity round trip", err <= 1e-10, f"max err {err:.2e}"

    # zero-policy ODE oracle at dx and dx/2 (first-order convergence)
    errs = []
    for dx in (config.dx, config.dx / 2.0):
        grid = Grid.from_spacing(config.xmax, dx)
        system = assemble_system(grid, PolicyField.zeros(grid), model, 0.0, -config.xmax)
        v = solve_tridiagonal(system)
        exact = -config.xmax ** (1.0 - p.delta_principal / p.lambda_agent) \
            * grid.nodes ** (p.delta_principal / p.lambda_agent)
        mask = grid.nodes >= 0.5
        errs.append(float(np.max(np.abs(v - exact)[mask])))
    yield "zero-policy ODE oracle", errs[0] <= 5e-2, f"max err {errs[0]:.2e}"
    ratio = errs[0] / errs[1] if errs[1] else float("inf")
    yield "ODE oracle first-order rate", ratio >= 1.5, f"halving gain {ratio:.2f}x"

    # solve: M-matrix audit, complementarity, obstacle
    result = solve_hjbvi(config.solver_config())
    yield ("M-matrix audit",
           result.mmatrix_min_diag > 0.0 and result.mmatrix_max_offdiag <= 0.0
           and result.mmatrix_rowsum_identity,
           f"{result.systems_audited} systems, min diag {result.mmatrix_min_diag:.3e}")
    yield ("complementarity residual", result.complementarity_residual <= 1e-8,
           f"{result.complementarity_residual:.2e}")
    yield ("obstacle", result.obstacle_violation <= 1e-12,
           f"violation {result.obstacle_violation:.2e}")

    # incentive compatibility, small common-random-number study
    sim = SimConfig(x0=1.0, paths=min(config.paths, 4000), dt=max(config.dt, 1e-3),
                    t_max=config.tmax, seed=config.seed)
    report = incentive_check(result, sim, scales=(0.0, 0.5, 1.0, 1.5, 2.0))
    detail = " ".join(f"{s:g}:{m:.4f}" for s, m in zip(report.scales, report.means))
    yield "incentive compatibility", report.passed, detail


def cmd_check(config: RunConfig) -> int:
    ok = True
    for name, passed, detail in _check_lines(config):
        ok &= passed
        print(f"[{'PASS' if passed else 'FAIL'}] {name}: {detail}")
    return EXIT_OK if ok else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pppcontract",
        description="Principal-agent partnership contract solver "
                    "(Howard iteration + Monte Carlo verification)")
    sub = parser.add_subparsers(dest="command")
    for name, help_ in (("solve", "solve one sigma, write solution_<sigma>.csv"),
                        ("sweep", "solve the sigma sweep, write regions.csv"),
                        ("simulate", "Monte Carlo verification, write mc_report.csv"),
                        ("check", "run the invariant suite")):
        cmd = sub.add_parser(name, help=help_)
        cmd.add_argument("--config", type=str, default=None)
        cmd.add_argument("--sigma", type=float, default=None)
        cmd.add_argument("--alpha", type=float, default=None)
        cmd.add_argument("--beta", type=float, default=None)
        cmd.add_argument("--lambda", dest="lam", type=float, default=None)
        cmd.add_argument("--delta", type=float, default=None)
        cmd.add_argument("--xmax", type=float, default=None)
        cmd.add_argument("--dx", type=float, default=None)
        cmd.add_argument("--eps", type=float, default=None)
        cmd.add_argument("--amax", type=float, default=None)
        cmd.add_argument("--na", type=int, default=None)
        cmd.add_argument("--paths", type=int, default=None)
        cmd.add_argument("--dt", type=float, default=None)
        cmd.add_argument("--seed", type=int, default=None)
        cmd.add_argument("--x0", type=str, default=None,
                         help="comma-separated starting states")
        cmd.add_argument("--out", type=str, default=None)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not args.command:
        parser.print_usage(sys.stderr)
        return EXIT_CONFIG
    try:
        config = parse_config(args)
        config.model()  # validate parameters before any solve
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    handler = {"solve": cmd_solve, "sweep": cmd_sweep,
               "simulate": cmd_simulate, "check": cmd_check}[args.command]
    return handler(config)


if __name__ == "__main__":
    sys.exit(main())
