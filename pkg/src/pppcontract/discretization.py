"""Spatial grid, generator coefficients and the monotone upwind operator.

The stationary equation solved on the continuation region is

    delta*v - [ 0.5*s(a)^2 v'' + mu(x,a,r) v' ] = phi(a) - r,

with drift mu = lambda*x - U(r) + h(a) and volatility s(a) =
sigma*h'(a)/phi'(a) (zero at a = 0).  The first derivative is one-sided in
the drift direction (forward difference when mu >= 0), the second centered;
the resulting rows have positive diagonal, nonpositive off-diagonals and row
sums exactly delta, so the matrix is a strictly diagonally dominant M-matrix
and the scheme is monotone.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import ContractModel, sensitivity_from_effort

__all__ = [
    "Grid",
    "PolicyField",
    "TridiagonalSystem",
    "SingularSystemError",
    "drift",
    "diffusion",
    "assemble_system",
    "solve_tridiagonal",
    "discrete_hamiltonian",
    "hamiltonian_profile",
    "slopes_and_curvature",
]


class SingularSystemError(RuntimeError):
    """Raised when forward elimination meets a vanishing pivot."""


@dataclass(frozen=True)
class Grid:
    """Uniform interior grid on (0, x_max): nodes i*delta, i = 1..n."""

    x_max: float
    n: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("need at least 2 interior nodes")
        if self.x_max <= 0.0:
            raise ValueError("x_max must be positive")

    @classmethod
    def from_spacing(cls, x_max: float, delta: float) -> "Grid":
        m = x_max / delta
        if abs(m - round(m)) > 1e-9 * max(1.0, m):
            raise ValueError(f"x_max={x_max} is not a multiple of delta={delta}")
        return cls(x_max=float(x_max), n=int(round(m)) - 1)

    @property
    def delta(self) -> float:
        return self.x_max / (self.n + 1)

    @property
    def nodes(self) -> np.ndarray:
        return self.delta * np.arange(1, self.n + 1)


@dataclass
class PolicyField:
    """Per-node control pair (effort, rent) on the interior grid."""

    effort: np.ndarray
    rent: np.ndarray

    def __post_init__(self):
        self.effort = np.ascontiguousarray(self.effort, dtype=float)
        self.rent = np.ascontiguousarray(self.rent, dtype=float)
        if self.effort.shape != self.rent.shape or self.effort.ndim != 1:
            raise ValueError("effort and rent must be 1-d arrays of equal length")
        if not (np.all(np.isfinite(self.effort)) and np.all(np.isfinite(self.rent))):
            raise ValueError("policy entries must be finite")
        if (self.effort < 0.0).any() or (self.rent < 0.0).any():
            raise ValueError("policy entries must be nonnegative")

    @classmethod
    def zeros(cls, grid: Grid) -> "PolicyField":
        return cls(np.zeros(grid.n), np.zeros(grid.n))


@dataclass
class TridiagonalSystem:
    """Rows of (delta - L^{a,r}) v = phi(a) - r with Dirichlet data folded in.

    ``sub[0]`` and ``sup[-1]`` hold the stencil coefficients that multiply the
    known boundary values; their contribution is already moved into ``rhs``,
    and the solver ignores them.  Keeping them makes the row-sum identity
    sub + main + sup = delta hold exactly on every row.
    """

    sub: np.ndarray
    main: np.ndarray
    sup: np.ndarray
    rhs: np.ndarray

    def row_sums(self) -> np.ndarray:
        return self.sub + self.main + self.sup


def drift(x, a, r, model: ContractModel):
    """State drift under the agent's measure: lambda*x - U(r) + h(a)."""
    lam = model.params.lambda_agent
    out = lam * np.asarray(x, float) - model.utility(r) + model.h(a)
    return out if np.ndim(out) else float(out)


def diffusion(a, model: ContractModel):
    """State volatility s(a) = sigma*h'(a)/phi'(a), zero at zero effort."""
    return sensitivity_from_effort(a, model)


def assemble_system(grid: Grid, policy: PolicyField, model: ContractModel,
                    v0: float, v_right: float) -> TridiagonalSystem:
    """Monotone upwind rows for a fixed policy, boundary values folded into rhs."""
    if policy.effort.shape[0] != grid.n:
        raise ValueError("policy length does not match grid")
    x = grid.nodes
    dx = grid.delta
    dp = model.params.delta_principal

    mu = drift(x, policy.effort, policy.rent, model)
    s2h = 0.5 * diffusion(policy.effort, model) ** 2
    if not (np.all(np.isfinite(mu)) and np.all(np.isfinite(s2h))):
        raise ValueError("non-finite generator coefficients")

    mup = np.maximum(mu, 0.0)
    mum = np.maximum(-mu, 0.0)
    sub = -(s2h / dx**2 + mum / dx)
    sup = -(s2h / dx**2 + mup / dx)
    main = dp - sub - sup
    rhs = model.phi(policy.effort) - policy.rent
    rhs = np.asarray(rhs, float).copy()
    rhs[0] -= sub[0] * v0
    rhs[-1] -= sup[-1] * v_right
    return TridiagonalSystem(sub=sub, main=main, sup=sup, rhs=rhs)


def solve_tridiagonal(system: TridiagonalSystem) -> np.ndarray:
    """Thomas forward elimination / back substitution.

    ``sub[0]``/``sup[-1]`` are boundary fold-in bookkeeping and not part of
    the linear map.  Pivots below 1e-14 (relative) signal a singular system.
    """
    main = system.main
    sub = system.sub
    sup = system.sup
    rhs = system.rhs
    n = main.shape[0]
    scale = float(np.max(np.abs(main))) or 1.0
    tiny = 1e-14 * scale

    w = np.empty(n - 1)
    g = np.empty(n)
    if abs(main[0]) < tiny:
        raise SingularSystemError("zero pivot in row 0")
    w[0] = sup[0] / main[0]
    g[0] = rhs[0] / main[0]
    for i in range(1, n):
        denom = main[i] - sub[i] * w[i - 1]
        if abs(denom) < tiny:
            raise SingularSystemError(f"zero pivot in row {i}")
        if i < n - 1:
            w[i] = sup[i] / denom
        g[i] = (rhs[i] - sub[i] * g[i - 1]) / denom
    v = np.empty(n)
    v[-1] = g[-1]
    for i in range(n - 2, -1, -1):
        v[i] = g[i] - w[i] * v[i + 1]
    return v


def slopes_and_curvature(v: np.ndarray, grid: Grid, v0: float, v_right: float):
    """Forward/backward difference quotients and centered second differences."""
    vfull = np.concatenate(([v0], v, [v_right]))
    dx = grid.delta
    fwd = (vfull[2:] - vfull[1:-1]) / dx
    bwd = (vfull[1:-1] - vfull[:-2]) / dx
    second = (vfull[2:] - 2.0 * vfull[1:-1] + vfull[:-2]) / dx**2
    return fwd, bwd, second


def hamiltonian_profile(v: np.ndarray, effort, rent, grid: Grid,
                        model: ContractModel, v0: float, v_right: float) -> np.ndarray:
    """Row residuals delta*v - L^{a,r}v - phi(a) + r at every node (vectorized).

    Branch selection matches assemble_system: forward difference iff mu >= 0.
    """
    fwd, bwd, second = slopes_and_curvature(v, grid, v0, v_right)
    x = grid.nodes
    dp = model.params.delta_principal
    mu = drift(x, effort, rent, model)
    s2h = 0.5 * diffusion(effort, model) ** 2
    up = np.where(mu >= 0.0, fwd, bwd)
    return dp * v - s2h * second - mu * up - model.phi(effort) + np.asarray(rent, float)


def discrete_hamiltonian(i: int, v: np.ndarray, a: float, r: float, grid: Grid,
                         model: ContractModel, v0: float, v_right: float) -> float:
    """Residual of row i (1-based node index i corresponds to v[i-1])."""
    if not 1 <= i <= grid.n:
        raise IndexError(f"node index {i} outside 1..{grid.n}")
    k = i - 1
    dx = grid.delta
    left = v0 if k == 0 else v[k - 1]
    right = v_right if k == grid.n - 1 else v[k + 1]
    x = grid.delta * i
    dp = model.params.delta_principal
    mu = float(drift(x, a, r, model))
    s = float(diffusion(a, model))
    second = (right - 2.0 * v[k] + left) / dx**2
    slope = (right - v[k]) / dx if mu >= 0.0 else (v[k] - left) / dx
    return dp * v[k] - 0.5 * s * s * second - mu * slope - float(model.phi(a)) + r
