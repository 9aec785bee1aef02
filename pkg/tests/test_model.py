"""Contract-primitive tests: feedback maps, inverses, boundary value."""

import math

import numpy as np
import pytest

import pppcontract as pc
from pppcontract.model import BracketError, golden_section_max

ALPHA, BETA, SIGMA = 0.035, 0.017, 1.2


def bisect_effort(z, model, lo=0.0, hi=1e4):
    """Independent root-find oracle for sigma*h'(a)/phi'(a) = z."""
    f = lambda a: SIGMA * BETA * math.exp(BETA * a) / (ALPHA * math.exp(-ALPHA * a)) - z
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if f(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


class TestParams:
    def test_defaults_valid(self):
        p = pc.ModelParams()
        assert p.alpha == 0.035 and p.beta == 0.017

    def test_impatience_ordering_enforced(self):
        with pytest.raises(ValueError):
            pc.ModelParams(lambda_agent=0.05, delta_principal=0.065)

    @pytest.mark.parametrize("kw", [dict(alpha=-1.0), dict(beta=0.0),
                                    dict(sigma=0.0), dict(delta_principal=-0.1)])
    def test_positivity_enforced(self, kw):
        with pytest.raises(ValueError):
            pc.ModelParams(**kw)


class TestFamilyShapes:
    def test_anchors(self, default_model):
        m = default_model
        assert float(m.phi(0.0)) == 0.0
        assert float(m.h(0.0)) == 0.0
        assert float(m.utility(0.0)) == 0.0
        assert float(m.phi_prime(0.0)) == ALPHA

    def test_monotone_concave_convex(self, default_model):
        m = default_model
        a = np.linspace(0.0, 80.0, 400)
        assert np.all(np.diff(m.phi(a)) > 0.0) and np.all(m.phi_second(a) < 0.0)
        assert np.all(np.diff(m.h(a)) > 0.0) and np.all(m.h_second(a) > 0.0)
        assert np.all(m.phi(a) < 1.0)
        r = np.linspace(1e-6, 10.0, 400)
        assert np.all(np.diff(m.utility(r)) > 0.0)
        # Inada: marginal utility blows up at zero
        assert float(m.utility_prime(1e-12)) > 1e2


class TestBestEffort:
    def test_zero_sensitivity(self, default_model):
        assert pc.best_effort_from_sensitivity(0.0, default_model) == 0.0

    def test_threshold_maps_to_zero(self, default_model):
        z_thr = SIGMA * BETA / ALPHA
        assert pc.best_effort_from_sensitivity(z_thr, default_model) == 0.0
        assert pc.best_effort_from_sensitivity(-3.0, default_model) == 0.0

    def test_closed_form_against_bisection(self, default_model):
        z = 2.0 * SIGMA * BETA / ALPHA
        a = pc.best_effort_from_sensitivity(z, default_model)
        assert a == pytest.approx(math.log(2.0) / (ALPHA + BETA), abs=1e-12)
        assert a == pytest.approx(bisect_effort(z, default_model), abs=1e-8)

    def test_round_trip_log_grid(self, default_model):
        a = np.concatenate(([0.0], np.logspace(-4, 2, 60)))
        z = pc.sensitivity_from_effort(a, default_model)
        back = pc.best_effort_from_sensitivity(z, default_model)
        assert back[0] == 0.0
        assert np.max(np.abs(back - a)) <= 1e-10

    def test_nondecreasing_in_z(self, default_model):
        z = np.linspace(-1.0, 12.0, 500)
        a = pc.best_effort_from_sensitivity(z, default_model)
        assert np.all(np.diff(a) >= 0.0)
        assert np.all(a[z <= SIGMA * BETA / ALPHA] == 0.0)


class TestSensitivity:
    def test_zero_effort(self, default_model):
        assert pc.sensitivity_from_effort(0.0, default_model) == 0.0

    def test_direct_value(self, default_model):
        # sigma * (beta/alpha) * exp((alpha+beta)*10), evaluated independently
        expected = SIGMA * (BETA * math.exp(BETA * 10.0)) / (ALPHA * math.exp(-ALPHA * 10.0))
        assert pc.sensitivity_from_effort(10.0, default_model) == pytest.approx(expected, rel=1e-13)
        assert expected == pytest.approx(0.98042, abs=5e-5)

    def test_increasing(self, default_model):
        a = np.linspace(1e-9, 50.0, 300)
        s = pc.sensitivity_from_effort(a, default_model)
        assert np.all(np.diff(s) > 0.0)


class TestOptimalRent:
    def test_nonnegative_slope_gives_zero(self, default_model):
        assert pc.optimal_rent(0.5, default_model) == 0.0
        assert pc.optimal_rent(0.0, default_model) == 0.0

    def test_unit_slope(self, default_model):
        assert pc.optimal_rent(-1.0, default_model) == pytest.approx(0.375**4, abs=1e-12)

    def test_double_slope(self, default_model):
        assert pc.optimal_rent(-2.0, default_model) == pytest.approx(0.75**4, abs=1e-12)

    def test_foc_is_satisfied(self, default_model):
        # U'(r*) = -1/w' checked with the model's own derivative
        for w in (-0.3, -1.0, -2.5):
            r = pc.optimal_rent(w, default_model)
            assert float(default_model.utility_prime(r)) == pytest.approx(-1.0 / w, rel=1e-10)

    def test_continuous_and_nonincreasing(self, default_model):
        w = np.linspace(-3.0, 1.0, 801)
        r = pc.optimal_rent(w, default_model)
        assert np.all(np.diff(r) <= 1e-15)
        assert r[np.argmin(np.abs(w + 1e-3))] <= 1e-11  # r -> 0 as w -> 0-


class TestIncentiveCap:
    def test_zero_rent_allows_no_effort(self, default_model):
        assert pc.incentive_effort_cap(0.0, default_model) == 0.0

    def test_cap_equates_cost_and_utility(self, default_model):
        for r in (0.02, 0.1, 1.0):
            cap = pc.incentive_effort_cap(r, default_model)
            assert float(default_model.h(cap)) == pytest.approx(
                float(default_model.utility(r)), rel=1e-12)


class TestBoundaryValue:
    def test_reference_value(self, default_model):
        v0 = pc.boundary_value(default_model)
        assert v0 == pytest.approx(0.942, abs=0.01)

    def test_against_dense_scan(self, default_model):
        m = default_model
        y = np.arange(0.0, 2.0, 1e-4)
        brute = np.max(m.phi(m.h_inverse(m.utility(y))) - y) / m.params.delta_principal
        assert pc.boundary_value(m) == pytest.approx(brute, abs=1e-6)

    def test_degenerate_utility(self):
        m = pc.ContractModel(
            params=pc.ModelParams(),
            phi=lambda a: -np.expm1(-0.035 * np.asarray(a, float)),
            h=lambda a: np.expm1(0.017 * np.asarray(a, float)),
            utility=lambda r: np.zeros_like(np.asarray(r, float)))
        assert pc.boundary_value(m) == 0.0

    def test_linear_in_inverse_delta(self):
        m1 = pc.ContractModel.default(pc.ModelParams(delta_principal=0.04))
        m2 = pc.ContractModel.default(pc.ModelParams(delta_principal=0.08))
        assert pc.boundary_value(m1) == pytest.approx(2.0 * pc.boundary_value(m2), rel=1e-9)

    def test_runtime_under_millisecond(self, default_model):
        import time
        pc.boundary_value(default_model)  # warm
        best = min(
            (lambda t0: (pc.boundary_value(default_model), time.perf_counter() - t0))(
                time.perf_counter())[1]
            for _ in range(5))
        assert best < 1e-3

    def test_bracket_failure_signals(self):
        m = pc.ContractModel(
            params=pc.ModelParams(),
            phi=lambda a: np.asarray(a, float),          # unbounded impact
            h=lambda a: np.asarray(a, float),
            utility=lambda r: 4.0 * np.asarray(r, float))
        with pytest.raises(BracketError):
            pc.boundary_value(m)


class TestGoldenSection:
    def test_quadratic(self):
        xstar, fstar = golden_section_max(lambda y: -(y - 0.3) ** 2, 0.0, 1.0)
        assert xstar == pytest.approx(0.3, abs=1e-8)
        assert fstar == pytest.approx(0.0, abs=1e-15)

    def test_boundary_maximum(self):
        xstar, _ = golden_section_max(lambda y: -y, 0.0, 1.0)
        assert xstar == 0.0


class TestCustomFamilyFallbacks:
    def test_fd_derivatives_and_inverses(self):
        m = pc.ContractModel(
            params=pc.ModelParams(),
            phi=lambda a: -np.expm1(-0.035 * np.asarray(a, float)),
            h=lambda a: np.expm1(0.017 * np.asarray(a, float)),
            utility=lambda r: 0.5 * np.power(np.maximum(np.asarray(r, float), 0.0), 0.75))
        ref = pc.ContractModel.default()
        for a in (0.5, 3.0, 20.0):
            assert float(m.phi_prime(a)) == pytest.approx(float(ref.phi_prime(a)), rel=1e-6)
            assert float(m.h_inverse(m.h(a))) == pytest.approx(a, rel=1e-9)
        r = pc.optimal_rent(-1.0, m)
        assert r == pytest.approx(0.375**4, rel=1e-6)
