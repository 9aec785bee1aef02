"""Numerical solver for a continuous-time public-private partnership contract
with hidden effort and an optimal stopping decision.

The principal's value function solves a Hamilton-Jacobi-Bellman variational
inequality on the agent's promised-value state; it is discretized by a
monotone upwind scheme and solved by Howard policy iteration, and the result
is verified by Monte Carlo simulation of the controlled state.
"""

from .model import (ModelParams, ContractModel, best_effort_from_sensitivity,
                    sensitivity_from_effort, optimal_rent, incentive_effort_cap,
                    boundary_value)
from .discretization import (Grid, PolicyField, TridiagonalSystem, drift,
                             diffusion, assemble_system, solve_tridiagonal,
                             discrete_hamiltonian, SingularSystemError)
from .howard import (SolverConfig, SolveResult, SolverNonConvergenceError,
                     improve_policy, partition_regions, evaluate_policy,
                     solve_hjbvi, extract_free_boundary)
from .montecarlo import (SimConfig, SimResult, IncentiveReport,
                         interpolate_policy, simulate_principal_value,
                         simulate_agent_value, incentive_check, backend_name)

__version__ = "0.1.0"

__all__ = [
    "ModelParams", "ContractModel", "best_effort_from_sensitivity",
    "sensitivity_from_effort", "optimal_rent", "incentive_effort_cap",
    "boundary_value",
    "Grid", "PolicyField", "TridiagonalSystem", "drift", "diffusion",
    "assemble_system", "solve_tridiagonal", "discrete_hamiltonian",
    "SingularSystemError",
    "SolverConfig", "SolveResult", "SolverNonConvergenceError",
    "improve_policy", "partition_regions", "evaluate_policy", "solve_hjbvi",
    "extract_free_boundary",
    "SimConfig", "SimResult", "IncentiveReport", "interpolate_policy",
    "simulate_principal_value", "simulate_agent_value", "incentive_check",
    "backend_name",
]
