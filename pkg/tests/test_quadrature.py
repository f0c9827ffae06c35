import math

import pytest

from dimerdiff.quadrature import (
    QuadratureConvergenceError,
    QuadratureSpec,
    integrate_adaptive,
    integrate_fixed,
)


class TestAdaptive:
    def test_polynomial(self):
        assert integrate_adaptive(lambda x: x * x, 0.0, 1.0) == pytest.approx(1.0 / 3.0, abs=1e-12)

    def test_log_endpoint_singularity(self):
        # antiderivative of ln(1/x) is x - x ln x, so the integral is 1
        val = integrate_adaptive(lambda x: math.log(1.0 / x), 0.0, 1.0)
        assert val == pytest.approx(1.0, rel=1e-9)

    def test_truncated_exponential(self):
        a = 2.0
        val = integrate_adaptive(lambda x: math.exp(-a * x), 0.0, 40.0 / a)
        assert val == pytest.approx(0.5, rel=1e-9)

    def test_empty_interval(self):
        assert integrate_adaptive(math.sin, 1.0, 1.0) == 0.0

    def test_reversed_interval_rejected(self):
        with pytest.raises(ValueError):
            integrate_adaptive(math.sin, 1.0, 0.0)

    def test_linearity(self):
        f = lambda x: math.sin(3.0 * x)
        g = lambda x: math.exp(-x)
        lhs = integrate_adaptive(lambda x: 2.5 * f(x) - 1.5 * g(x), 0.0, 2.0)
        rhs = 2.5 * integrate_adaptive(f, 0.0, 2.0) - 1.5 * integrate_adaptive(g, 0.0, 2.0)
        assert lhs == pytest.approx(rhs, abs=2e-9)

    def test_interval_additivity(self):
        f = lambda x: math.cos(x) / (1.0 + x * x)
        whole = integrate_adaptive(f, 0.0, 3.0)
        parts = integrate_adaptive(f, 0.0, 1.3) + integrate_adaptive(f, 1.3, 3.0)
        assert whole == pytest.approx(parts, abs=2e-9)

    def test_convergence_error_carries_estimate(self):
        spec = QuadratureSpec(rel_tol=1e-12, abs_tol=1e-15, max_subdivisions=2)
        with pytest.raises(QuadratureConvergenceError) as excinfo:
            integrate_adaptive(lambda x: math.log(1.0 / x), 0.0, 1.0, spec)
        err = excinfo.value
        assert err.estimate == pytest.approx(1.0, rel=1e-2)
        assert err.error_bound > 0.0

    def test_spec_validation(self):
        with pytest.raises(ValueError):
            QuadratureSpec(rel_tol=0.0)
        with pytest.raises(ValueError):
            QuadratureSpec(max_subdivisions=0)


class TestFixed:
    def test_sine_lobe(self):
        assert integrate_fixed(math.sin, 0.0, math.pi, 1000) == pytest.approx(2.0, abs=1e-10)

    @pytest.mark.parametrize("n", [2, 3, 7, 100])
    def test_constant_exact(self, n):
        assert integrate_fixed(lambda x: 1.0, 0.0, 1.0, n) == pytest.approx(1.0, abs=1e-15)

    def test_rejects_single_panel(self):
        with pytest.raises(ValueError):
            integrate_fixed(math.sin, 0.0, 1.0, 1)

    def test_agrees_with_adaptive_on_smooth_integrand(self):
        f = lambda x: math.exp(-x) * math.cos(4.0 * x)
        fixed = integrate_fixed(f, 0.0, 5.0, 2**16)
        adaptive = integrate_adaptive(f, 0.0, 5.0)
        assert abs(fixed - adaptive) <= 1e-8 * abs(adaptive)
