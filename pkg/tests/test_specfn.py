import math

import numpy as np
import pytest
from scipy import integrate
from scipy.special import erfc

from fadeperf.specfn import (
    NonConvergenceError,
    RuleKind,
    exp_integral_ei,
    gauss_hermite_nodes,
    gcq_nodes,
    incomplete_beta,
    log_gamma_complex,
    pfq,
    upper_incomplete_gamma,
)


class TestLogGamma:
    def test_gamma_one(self):
        assert log_gamma_complex(1.0) == pytest.approx(0.0, abs=1e-14)

    def test_half(self):
        assert log_gamma_complex(0.5).real == pytest.approx(
            math.log(math.sqrt(math.pi)), rel=1e-13
        )

    def test_gamma_three(self):
        assert log_gamma_complex(3.0).real == pytest.approx(math.log(2.0), rel=1e-13)

    def test_pole(self):
        with pytest.raises(ValueError):
            log_gamma_complex(-2.0)

    def test_recurrence_right_half_plane(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            z = complex(rng.uniform(0.2, 20.0), rng.uniform(-20.0, 20.0))
            lhs = np.exp(log_gamma_complex(z + 1.0))
            rhs = z * np.exp(log_gamma_complex(z))
            assert abs(lhs - rhs) <= 1e-10 * abs(rhs)


class TestUpperIncompleteGamma:
    def test_at_zero(self):
        assert upper_incomplete_gamma(1.0, 0.0) == pytest.approx(1.0, rel=1e-14)

    def test_exponential_case(self):
        assert upper_incomplete_gamma(1.0, 2.0) == pytest.approx(
            math.exp(-2.0), rel=1e-13
        )

    def test_half_order(self):
        # sqrt(pi) * erfc(sqrt(2)), cross-checked by direct quadrature.
        oracle, _ = integrate.quad(
            lambda t: t**-0.5 * math.exp(-t), 2.0, np.inf, epsabs=1e-14
        )
        got = upper_incomplete_gamma(0.5, 2.0)
        assert got == pytest.approx(oracle, rel=1e-10)
        assert got == pytest.approx(math.sqrt(math.pi) * erfc(math.sqrt(2.0)), rel=1e-12)

    def test_monotone_decreasing(self):
        vals = [upper_incomplete_gamma(0.7, x) for x in (0.0, 0.5, 1.0, 2.0, 5.0)]
        assert all(a > b for a, b in zip(vals, vals[1:]))

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            upper_incomplete_gamma(0.0, 1.0)
        with pytest.raises(ValueError):
            upper_incomplete_gamma(1.0, -0.1)

    def test_complement_identity(self):
        for b in (0.5, 1.0, 2.3):
            for x in (0.3, 1.0, 4.0):
                lower, _ = integrate.quad(
                    lambda t: t ** (b - 1.0) * math.exp(-t), 0.0, x, epsabs=1e-14
                )
                total = upper_incomplete_gamma(b, x) + lower
                assert total == pytest.approx(math.gamma(b), rel=1e-10)


class TestIncompleteBeta:
    def test_empty_integral(self):
        assert incomplete_beta(0.0, 1.0, 1.0) == 0.0

    def test_log_case(self):
        assert incomplete_beta(-1.0, 1.0, 0.0) == pytest.approx(
            -math.log(2.0), rel=1e-12
        )

    def test_uniform(self):
        assert incomplete_beta(0.5, 1.0, 1.0) == pytest.approx(0.5, rel=1e-12)

    def test_log_identity(self):
        for a, g in ((0.5, 1.0), (1.0, 3.0), (2.0, 10.0)):
            lhs = -incomplete_beta(-a * g, 1.0, 0.0)
            assert lhs == pytest.approx(math.log1p(a * g), rel=1e-10)

    def test_complex_branch_for_negative_z(self):
        val = incomplete_beta(-0.5, 0.5, 0.75)
        assert isinstance(val, complex)
        # |z^a| factor: the magnitude matches the real integral.
        direct, _ = integrate.quad(
            lambda v: v**-0.5 * (1.0 + 0.5 * v) ** -0.25, 0.0, 1.0
        )
        assert abs(val) == pytest.approx(0.5**0.5 * direct, rel=1e-9)

    def test_divergent_endpoint(self):
        with pytest.raises(ValueError):
            incomplete_beta(1.0, 1.0, -0.5)


class TestExpIntegral:
    def test_e1_relation(self):
        # E1(x) = -Ei(-x) against a continued-fraction-free quadrature oracle.
        oracle, _ = integrate.quad(
            lambda t: math.exp(-t) / t, 1.0, np.inf, epsabs=1e-14
        )
        assert -exp_integral_ei(-1.0) == pytest.approx(oracle, rel=1e-12)

    def test_asymptotic_limit(self):
        assert exp_integral_ei(-200.0) == pytest.approx(0.0, abs=1e-80)

    def test_quadrature_value(self):
        oracle, _ = integrate.quad(
            lambda t: math.exp(-t) / t, 0.5, np.inf, epsabs=1e-14
        )
        assert exp_integral_ei(-0.5) == pytest.approx(-oracle, rel=1e-12)

    def test_pole(self):
        with pytest.raises(ValueError):
            exp_integral_ei(0.0)


class TestPfq:
    def test_exponential_series(self):
        assert pfq([], [], 1.0) == pytest.approx(math.e, rel=1e-14)

    def test_log_value(self):
        assert pfq([1.0, 1.0], [2.0], -1.0) == pytest.approx(
            math.log(2.0), rel=1e-12
        )

    def test_z_zero(self):
        assert pfq([0.5], [1.5], 0.0) == 1.0

    def test_divergent_orders(self):
        with pytest.raises(NonConvergenceError):
            pfq([1.0, 1.0, 1.0], [1.0], 0.5)

    def test_gauss_series_outside_disk_via_pfaff(self):
        # Reachable through the log-form transformation: ln(1+z)/z.
        assert pfq([1.0, 1.0], [2.0], -1.5) == pytest.approx(
            math.log(2.5) / 1.5, rel=1e-12
        )

    def test_gauss_series_unreachable(self):
        with pytest.raises(NonConvergenceError):
            pfq([1.0, 1.0], [2.0], -1e5)

    def test_nonpositive_denominator(self):
        with pytest.raises(ValueError):
            pfq([1.0], [-2.0], 0.1)


class TestGcqNodes:
    def test_single_node(self):
        rule = gcq_nodes(1)
        assert rule.kind is RuleKind.GCQ
        assert rule.nodes[0] == pytest.approx(1.0, rel=1e-14)
        assert rule.weights[0] == pytest.approx(math.pi**2 / 2.0, rel=1e-14)

    def test_node_symmetry_product(self):
        # tan(pi/4 (1+c)) * tan(pi/4 (1-c)) = 1: nodes pair into reciprocals.
        for N in (2, 8, 31):
            rule = gcq_nodes(N)
            prod = rule.nodes * rule.nodes[::-1]
            assert np.allclose(prod, 1.0, rtol=1e-12)

    def test_ranges(self):
        rule = gcq_nodes(64)
        assert np.all(rule.weights > 0.0)
        assert np.all(rule.nodes > 0.0)
        assert np.all(np.isfinite(rule.nodes))

    def test_deterministic(self):
        a, b = gcq_nodes(33), gcq_nodes(33)
        assert np.array_equal(a.nodes, b.nodes)
        assert np.array_equal(a.weights, b.weights)

    def test_invalid(self):
        with pytest.raises(ValueError):
            gcq_nodes(0)

    def test_integrates_exponential(self):
        rule = gcq_nodes(512)
        approx = float(np.sum(rule.weights * np.exp(-rule.nodes)))
        assert approx == pytest.approx(1.0, rel=1e-4)


class TestGaussHermite:
    def test_single_node(self):
        rule = gauss_hermite_nodes(1)
        assert rule.nodes[0] == pytest.approx(0.0, abs=1e-15)
        assert rule.weights[0] == pytest.approx(math.sqrt(math.pi), rel=1e-14)

    def test_two_nodes(self):
        rule = gauss_hermite_nodes(2)
        assert sorted(rule.nodes) == pytest.approx(
            [-1.0 / math.sqrt(2.0), 1.0 / math.sqrt(2.0)], rel=1e-13
        )
        assert rule.weights == pytest.approx(
            [math.sqrt(math.pi) / 2.0] * 2, rel=1e-13
        )

    def test_weight_sum(self):
        for K in (1, 5, 20, 64):
            rule = gauss_hermite_nodes(K)
            assert float(np.sum(rule.weights)) == pytest.approx(
                math.sqrt(math.pi), abs=1e-12
            )

    def test_deterministic(self):
        a, b = gauss_hermite_nodes(20), gauss_hermite_nodes(20)
        assert np.array_equal(a.nodes, b.nodes)
        assert np.array_equal(a.weights, b.weights)
