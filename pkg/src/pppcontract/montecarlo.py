"""Monte Carlo verification of the PDE solution.

Simulates the promised-value state under the converged feedback policy,
directly under the agent's measure (the Girsanov drift shift cancels the
-Z*phi/sigma term, leaving dJ = (lambda*J - U(r(J)) + h(a(J))) dt + s dW).
The principal's discounted payoff estimate should match the solver's value
function; the agent's own payoff at unit effort should return the starting
state itself, and scaled efforts must not beat it (incentive compatibility).

Paths absorbed at the zero state terminate collecting the result's x = 0
value for the principal (the stationary zero-state contract; this is the
Dirichlet datum of the solve, so estimates stay comparable to v) and zero
for the agent.  Reductions use exact summation (math.fsum), so results do
not depend on any partitioning of the paths across workers.
"""

from __future__ import annotations

import math
import os
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import _mc_py
from .howard import SolveResult
from .model import ContractModel

try:
    from ._core import _mc as _mc_core
except ImportError:  # pure-python install
    _mc_core = None

__all__ = [
    "SimConfig",
    "SimResult",
    "IncentiveReport",
    "interpolate_policy",
    "simulate_principal_value",
    "simulate_agent_value",
    "incentive_check",
    "backend_name",
]

CENSOR_WARN_FRACTION = 0.05


@dataclass(frozen=True)
class SimConfig:
    """Path-simulation settings."""

    x0: float
    paths: int = 10_000
    dt: float = 1e-3
    t_max: float = 400.0
    seed: int = 0
    interpolation: str = "linear"

    def __post_init__(self):
        if self.dt <= 0.0 or self.t_max <= 0.0:
            raise ValueError("dt and t_max must be positive")
        if self.paths < 1:
            raise ValueError("need at least one path")
        if self.x0 < 0.0:
            raise ValueError("x0 must be nonnegative")
        if self.interpolation != "linear":
            raise ValueError("only piecewise-linear policy interpolation is supported")

    @property
    def n_steps(self) -> int:
        return int(round(self.t_max / self.dt))


@dataclass
class SimResult:
    """Payoff estimate with sampling error and termination statistics."""

    mean: float
    std_error: float
    mean_stop_time: float
    censored_fraction: float
    absorbed_fraction: float
    paths: int

    def __post_init__(self):
        assert self.std_error >= 0.0
        assert 0.0 <= self.censored_fraction <= 1.0
        assert 0.0 <= self.absorbed_fraction <= 1.0


@dataclass
class IncentiveReport:
    """Agent values per effort scale, against the recommended scale 1."""

    scales: list[float]
    means: list[float]
    std_errors: list[float]
    base_mean: float
    base_std_error: float
    passed: bool
    margins: list[float] = field(default_factory=list)


def backend_name() -> str:
    if _mc_core is not None and not os.environ.get("PPPCONTRACT_PUREPY"):
        return "cython"
    return "python"


def _policy_nodes(result: SolveResult):
    """Policies on the full node set; zero at both boundaries (absorbing state
    at 0, stopping region at x_max)."""
    a = np.concatenate(([0.0], result.policy.effort, [0.0]))
    r = np.concatenate(([0.0], result.policy.rent, [0.0]))
    return a, r


def interpolate_policy(result: SolveResult, x: float):
    """(effort, rent, continuation flag) at a state by linear interpolation."""
    a_nodes, r_nodes = _policy_nodes(result)
    x = min(max(float(x), 0.0), result.grid.x_max)
    spacing = result.grid.delta
    n_knots = a_nodes.shape[0] - 1
    pos = x / spacing
    cell = min(int(pos), n_knots - 1)
    w = pos - cell
    a = (1.0 - w) * a_nodes[cell] + w * a_nodes[cell + 1]
    r = (1.0 - w) * r_nodes[cell] + w * r_nodes[cell + 1]
    return float(a), float(r), bool(x < result.free_boundary)


def _default_family_fns(params):
    al, be, sg = params.alpha, params.beta, params.sigma

    def phi_fn(a):
        return -np.expm1(-al * a)

    def h_fn(a):
        return np.expm1(be * a)

    def u_fn(r):
        return np.where(r > 0.0, 0.5 * np.power(np.maximum(r, 1e-300), 0.75), 0.0)

    def s_fn(a):
        return np.where(a > 0.0, sg * (be / al) * np.exp((al + be) * a), 0.0)

    return phi_fn, h_fn, u_fn, s_fn


def _run(kind: int, result: SolveResult, sim: SimConfig, model: ContractModel,
         effort_scale: float) -> SimResult:
    params = model.params
    a_nodes, r_nodes = _policy_nodes(result)
    rate = params.delta_principal if kind == _mc_py.KIND_PRINCIPAL else params.lambda_agent
    v0_credit = result.v0
    use_core = (_mc_core is not None and model.is_default_family
                and not os.environ.get("PPPCONTRACT_PUREPY"))
    if use_core:
        payoff, term, status = _mc_core.simulate_paths_default(
            kind, sim.x0, sim.paths, sim.dt, sim.n_steps, sim.seed,
            result.free_boundary, result.grid.x_max, v0_credit, effort_scale,
            a_nodes, r_nodes, result.grid.delta, rate, params.lambda_agent,
            params.sigma, params.alpha, params.beta)
    else:
        if model.is_default_family:
            phi_fn, h_fn, u_fn, s_fn = _default_family_fns(params)
        else:
            from .discretization import diffusion

            phi_fn, h_fn = model.phi, model.h
            u_fn = model.utility
            s_fn = lambda a: np.asarray(diffusion(a, model), float)
        payoff, term, status = _mc_py.simulate_paths(
            kind, sim.x0, sim.paths, sim.dt, sim.n_steps, sim.seed,
            result.free_boundary, result.grid.x_max, v0_credit, effort_scale,
            a_nodes, r_nodes, result.grid.delta, rate, params.lambda_agent,
            params.sigma, phi_fn, h_fn, u_fn, s_fn)

    n = sim.paths
    mean = math.fsum(payoff) / n
    if n > 1:
        var = math.fsum((p - mean) ** 2 for p in payoff) / (n - 1)
        se = math.sqrt(max(var, 0.0) / n)
    else:
        se = 0.0
    censored = float(np.count_nonzero(status == _mc_py.STATUS_CENSORED)) / n
    absorbed = float(np.count_nonzero(status == _mc_py.STATUS_ABSORBED)) / n
    if censored > CENSOR_WARN_FRACTION:
        warnings.warn(
            f"{100 * censored:.1f}% of paths hit the horizon t_max={sim.t_max}; "
            "estimates may be unreliable", RuntimeWarning, stacklevel=3)
    return SimResult(mean=mean, std_error=se,
                     mean_stop_time=math.fsum(term) / n,
                     censored_fraction=censored, absorbed_fraction=absorbed,
                     paths=n)


def simulate_principal_value(result: SolveResult, sim: SimConfig,
                             model: ContractModel | None = None) -> SimResult:
    """Estimate the principal's value at sim.x0 under the converged policy."""
    model = model or result.model
    if sim.x0 > result.grid.x_max:
        raise ValueError("x0 outside the solved domain")
    return _run(_mc_py.KIND_PRINCIPAL, result, sim, model, 1.0)


def simulate_agent_value(result: SolveResult, sim: SimConfig,
                         model: ContractModel | None = None,
                         effort_scale: float = 1.0) -> SimResult:
    """Estimate the agent's value when exerting effort_scale times the
    recommendation; at scale 1 this must reproduce sim.x0 (the state is the
    promised value)."""
    if effort_scale < 0.0:
        raise ValueError("effort_scale must be nonnegative")
    model = model or result.model
    if sim.x0 > result.grid.x_max:
        raise ValueError("x0 outside the solved domain")
    return _run(_mc_py.KIND_AGENT, result, sim, model, effort_scale)


def incentive_check(result: SolveResult, sim: SimConfig,
                    model: ContractModel | None = None,
                    scales=(0.0, 0.5, 1.0, 1.5, 2.0)) -> IncentiveReport:
    """Simulate deviations with common random numbers; scale 1 must win
    within 3 combined standard errors."""
    scales = [float(s) for s in scales]
    if 1.0 not in scales:
        raise ValueError("the recommended scale 1 must be among the scales")
    model = model or result.model
    results = {s: simulate_agent_value(result, sim, model, effort_scale=s)
               for s in scales}
    base = results[1.0]
    margins = []
    ok = True
    for s in scales:
        rs = results[s]
        tol = 3.0 * math.hypot(rs.std_error, base.std_error)
        margin = rs.mean - base.mean - tol
        margins.append(margin)
        if s != 1.0 and margin > 0.0:
            ok = False
    return IncentiveReport(
        scales=scales,
        means=[results[s].mean for s in scales],
        std_errors=[results[s].std_error for s in scales],
        base_mean=base.mean, base_std_error=base.std_error,
        passed=ok, margins=margins)
