"""Contract primitives and feedback maps.

The model is built from three scalar function families: the effort impact
``phi`` (bounded, concave, increasing), the effort cost ``h`` (convex,
increasing) and the consortium's rent utility ``U`` (concave, increasing,
with infinite marginal utility at zero).  The default family is

    phi(a) = 1 - exp(-alpha*a),   h(a) = exp(beta*a) - 1,   U(r) = 0.5*r**0.75.

All callables accept floats or numpy arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

__all__ = [
    "ModelParams",
    "ContractModel",
    "best_effort_from_sensitivity",
    "sensitivity_from_effort",
    "optimal_rent",
    "incentive_effort_cap",
    "boundary_value",
    "golden_section_max",
]

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


class BracketError(RuntimeError):
    """Raised when bracket expansion fails to enclose a finite maximizer."""


def golden_section_max(f: Callable[[float], float], lo: float, hi: float,
                       tol: float = 1e-9, max_iter: int = 300) -> tuple[float, float]:
    """Golden-section maximization of a unimodal f on [lo, hi].

    Returns (argmax, max).  Endpoints are included as candidates so a
    boundary maximum is returned exactly.
    """
    a, b = float(lo), float(hi)
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
    candidates = [(lo, f(lo)), (hi, f(hi)), (c, fc), (d, fd)]
    return max(candidates, key=lambda p: p[1])


def expand_bracket(f: Callable[[float], float], cap: float = 1e6) -> tuple[float, float]:
    """Expanding bracket for a concave f: double the right end until f decreases.

    Starts from [0, 1]; raises BracketError if no decrease was seen below cap.
    """
    lo, hi = 0.0, 1.0
    f_prev = f(hi / 2.0)
    while f(hi) > f_prev and hi < cap:
        f_prev = f(hi)
        hi *= 2.0
    if hi >= cap:
        raise BracketError(f"no finite maximizer found below cap={cap:g}")
    return lo, hi


@dataclass(frozen=True)
class ModelParams:
    """Economic parameters of the contract.

    ``reservation`` (the agent's outside value) and ``rho`` (an admissibility
    exponent) are carried for reporting only and never enter the computation.
    """

    alpha: float = 0.035
    beta: float = 0.017
    lambda_agent: float = 0.08
    delta_principal: float = 0.065
    sigma: float = 1.2
    reservation: float = 0.0
    rho: float = 0.0

    def __post_init__(self):
        if not (self.alpha > 0.0 and self.beta > 0.0 and self.sigma > 0.0):
            raise ValueError("alpha, beta, sigma must be positive")
        if not self.delta_principal > 0.0:
            raise ValueError("delta_principal must be positive")
        if self.lambda_agent < self.delta_principal:
            raise ValueError(
                "lambda_agent must be >= delta_principal "
                "(the consortium is the more impatient party)")
        if self.reservation < 0.0:
            raise ValueError("reservation must be nonnegative")


def _fd_derivative(f: Callable, order: int = 1):
    """Central finite-difference fallback for user-supplied families."""

    def d1(a):
        step = 1e-6 * np.maximum(1.0, np.abs(a))
        return (f(a + step) - f(a - step)) / (2.0 * step)

    def d2(a):
        step = 1e-6 * np.maximum(1.0, np.abs(a))
        return (f(a + step) - 2.0 * f(a) + f(a - step)) / (step * step)

    return d1 if order == 1 else d2


def _bisect_inverse(f: Callable, target: float, lo: float, hi_start: float = 1.0,
                    cap: float = 1e12, tol: float = 1e-13) -> float:
    """Inverse of an increasing scalar map by bracket expansion + bisection."""
    if f(lo) >= target:
        return lo
    hi = hi_start
    while f(hi) < target:
        hi *= 2.0
        if hi > cap:
            raise BracketError("inverse bracket expansion exceeded cap")
    lo_, hi_ = lo, hi
    for _ in range(200):
        mid = 0.5 * (lo_ + hi_)
        if f(mid) < target:
            lo_ = mid
        else:
            hi_ = mid
        if hi_ - lo_ <= tol * max(1.0, hi_):
            break
    return 0.5 * (lo_ + hi_)


@dataclass
class ContractModel:
    """Parameters plus the three function families with derivative/inverse access.

    Construct with :meth:`default` for the closed-form exponential/power family
    (the fast path; array-vectorized, analytic derivatives and inverses).  A
    custom family may pass bare callables; missing derivatives fall back to
    central differences and missing inverses to bisection.
    """

    params: ModelParams
    phi: Callable = None
    phi_prime: Callable = None
    phi_second: Callable = None
    h: Callable = None
    h_prime: Callable = None
    h_second: Callable = None
    h_inverse: Callable = None
    utility: Callable = None
    utility_prime: Callable = None
    utility_prime_inverse: Callable = None
    utility_inverse: Callable = None
    is_default_family: bool = field(default=False)

    @classmethod
    def default(cls, params: ModelParams | None = None) -> "ContractModel":
        params = params or ModelParams()
        al, be = params.alpha, params.beta
        return cls(
            params=params,
            phi=lambda a: -np.expm1(-al * np.asarray(a, float)),
            phi_prime=lambda a: al * np.exp(-al * np.asarray(a, float)),
            phi_second=lambda a: -al * al * np.exp(-al * np.asarray(a, float)),
            h=lambda a: np.expm1(be * np.asarray(a, float)),
            h_prime=lambda a: be * np.exp(be * np.asarray(a, float)),
            h_second=lambda a: be * be * np.exp(be * np.asarray(a, float)),
            h_inverse=lambda u: np.log1p(np.maximum(np.asarray(u, float), 0.0)) / be,
            utility=lambda r: 0.5 * np.power(np.maximum(np.asarray(r, float), 0.0), 0.75),
            utility_prime=lambda r: 0.375 * np.power(np.maximum(np.asarray(r, float), 1e-300), -0.25),
            utility_prime_inverse=lambda m: np.power(0.375 / np.asarray(m, float), 4.0),
            utility_inverse=lambda u: np.power(2.0 * np.maximum(np.asarray(u, float), 0.0), 4.0 / 3.0),
            is_default_family=True,
        )

    def __post_init__(self):
        if self.phi is None or self.h is None or self.utility is None:
            if self.phi is None and self.h is None and self.utility is None:
                d = ContractModel.default(self.params)
                for name in ("phi", "phi_prime", "phi_second", "h", "h_prime",
                             "h_second", "h_inverse", "utility", "utility_prime",
                             "utility_prime_inverse", "utility_inverse"):
                    setattr(self, name, getattr(d, name))
                self.is_default_family = True
                return
            raise ValueError("a custom family must supply phi, h and utility together")
        if self.phi_prime is None:
            self.phi_prime = _fd_derivative(self.phi, 1)
        if self.phi_second is None:
            self.phi_second = _fd_derivative(self.phi, 2)
        if self.h_prime is None:
            self.h_prime = _fd_derivative(self.h, 1)
        if self.h_second is None:
            self.h_second = _fd_derivative(self.h, 2)
        if self.h_inverse is None:
            self.h_inverse = np.vectorize(
                lambda u: _bisect_inverse(self.h, float(u), 0.0))
        if self.utility_prime is None:
            self.utility_prime = _fd_derivative(self.utility, 1)
        if self.utility_inverse is None:
            self.utility_inverse = np.vectorize(
                lambda u: _bisect_inverse(self.utility, float(u), 0.0))
        if self.utility_prime_inverse is None:
            # U' is decreasing; invert -U' which is increasing.
            self.utility_prime_inverse = np.vectorize(
                lambda m: _bisect_inverse(lambda r: -self.utility_prime(r), -float(m), 1e-300))


def sensitivity_from_effort(a, model: ContractModel):
    """Diffusion sensitivity z = sigma*h'(a)/phi'(a) backing an effort a (0 at a=0)."""
    a = np.asarray(a, float)
    z = model.params.sigma * model.h_prime(a) / model.phi_prime(a)
    out = np.where(a > 0.0, z, 0.0)
    return out if out.ndim else float(out)


def best_effort_from_sensitivity(z, model: ContractModel):
    """Agent's best-response effort to a diffusion sensitivity z.

    Zero at or below the threshold sigma*h'(0)/phi'(0); above it, the unique
    root of sigma*h'(a)/phi'(a) = z (closed form for the default family).
    """
    z = np.asarray(z, float)
    p = model.params
    threshold = p.sigma * float(model.h_prime(0.0)) / float(model.phi_prime(0.0))
    if model.is_default_family:
        ratio = np.maximum(z, threshold) * (p.alpha / (p.sigma * p.beta))
        a = np.log(ratio) / (p.alpha + p.beta)
    else:
        hp, pp = model.h_prime, model.phi_prime

        def solve_one(zv):
            if zv <= threshold:
                return 0.0
            return _bisect_inverse(lambda x: p.sigma * hp(x) / pp(x), zv, 0.0)

        a = np.vectorize(solve_one)(z)
    out = np.where(z > threshold, a, 0.0)
    return out if out.ndim else float(out)


def optimal_rent(w_prime, model: ContractModel):
    """Principal's optimal rent for a value-function slope w'.

    Zero when w' >= 0; otherwise (U')^{-1}(-1/w'), which for the default
    family is (0.375*(-w'))**4.  Continuous at w' = 0.
    """
    w = np.asarray(w_prime, float)
    if model.is_default_family:
        r = np.power(0.375 * np.maximum(-w, 0.0), 4.0)
    else:
        r = np.where(w < 0.0,
                     model.utility_prime_inverse(-1.0 / np.where(w < 0.0, w, -1.0)),
                     0.0)
    out = np.where(w < 0.0, r, 0.0)
    return out if out.ndim else float(out)


def incentive_effort_cap(rent, model: ContractModel):
    """Largest effort an agent will accept against a rent: h(a) <= U(r).

    Any larger recommendation is dominated by shirking (the agent's flow
    utility would go negative), so the principal's search is limited to it.
    """
    cap = model.h_inverse(model.utility(rent))
    return cap if np.ndim(cap) else float(cap)


def boundary_value(model: ContractModel, y_cap: float = 1e6) -> float:
    """Contract value at a zero promised state.

    max{ sup_{y>=0} [phi(h^{-1}(U(y))) - y] / delta, 0 }, the best stationary
    rent flow.  The supremum is concave in y; located by bracket expansion and
    golden-section refinement to 1e-9.
    """

    def f(y: float) -> float:
        return float(model.phi(model.h_inverse(model.utility(y)))) - y

    lo, hi = expand_bracket(f, cap=y_cap)
    _, best = golden_section_max(f, lo, hi, tol=1e-9)
    best = max(best, f(0.0))
    return max(best / model.params.delta_principal, 0.0)
