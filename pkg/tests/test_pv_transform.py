"""Tests for the sine integral and the principal-value transform"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, special

from bebound.cf_core import DiscreteDist
from bebound.errors import DomainError, QuadratureError, SymmetryError
from bebound.filters import PRAWITZ
from bebound.pv_transform import QuadratureResult, g_transform, sine_integral


def ones(t):
    return np.ones(np.shape(t), dtype=complex)


class TestSineIntegral:
    def test_zero(self):
        assert sine_integral(0.0) == 0.0

    def test_at_pi(self):
        assert sine_integral(math.pi) == pytest.approx(1.851937051982466, abs=1e-13)

    def test_limit(self):
        assert abs(sine_integral(1e6) - math.pi / 2) < 1e-5
        assert sine_integral(math.inf) == math.pi / 2

    @pytest.mark.parametrize("x", [1e-8, 0.1, 1.0, 1.999, 2.0, 2.001, 5.0, 16.0, 17.0, 50.0, 1000.0])
    def test_matches_scipy(self, x):
        assert sine_integral(x) == pytest.approx(special.sici(x)[0], abs=1e-13)

    @given(st.floats(min_value=0.0, max_value=1e4, allow_nan=False))
    def test_odd(self, x):
        assert sine_integral(-x) == -sine_integral(x)

    def test_array(self):
        x = np.array([[0.5, 3.0], [-4.0, 30.0]])
        values = sine_integral(x)
        assert values.shape == (2, 2)
        assert np.allclose(values, special.sici(x)[0], atol=1e-13)

    def test_nan(self):
        with pytest.raises(DomainError):
            sine_integral(float("nan"))


class TestGTransform:
    def test_constant_integrand_is_the_sine_integral(self):
        result = g_transform(ones, ones, 10.0, 0.7, tol=1e-12)
        assert result.value == pytest.approx(sine_integral(7.0) / math.pi, abs=1e-12)
        assert result.abs_error_estimate <= 1e-12

    def test_even_real_product_vanishes_at_zero(self):
        result = g_transform(PRAWITZ.component(1), ones, 8.0, 0.0, tol=1e-11)
        assert result.value == pytest.approx(0.0, abs=1e-11)

    def test_prawitz_upper_bound_for_point_mass(self):
        # F = 1{x >= 0}; the upper Prawitz bound at x = 1 sits just above 1
        result = g_transform(PRAWITZ.eval, ones, 10.0, 1.0)
        upper = 0.5 + result.value
        assert 0.98 <= upper <= 1.02
        assert upper >= 1.0 - 1e-9

    def test_linearity(self, rng):
        first = DiscreteDist.rademacher().cf_values
        second = DiscreteDist.bernoulli(0.3).standardized().cf_values
        a, b = rng.uniform(-2, 2, 2)
        tol = 1e-10
        combined = g_transform(PRAWITZ.eval, lambda t: a * first(t) + b * second(t), 12.0, 0.4, tol=tol)
        separate = (a * g_transform(PRAWITZ.eval, first, 12.0, 0.4, tol=tol).value
                    + b * g_transform(PRAWITZ.eval, second, 12.0, 0.4, tol=tol).value)
        assert combined.value == pytest.approx(separate, abs=2 * (1 + abs(a) + abs(b)) * tol)

    @settings(max_examples=15, deadline=None)
    @given(st.floats(min_value=-3.0, max_value=3.0), st.floats(min_value=1.0, max_value=20.0))
    def test_antisymmetry_in_x(self, x, T):
        weight = DiscreteDist.bernoulli(0.3).standardized().cf_values
        tol = 1e-10
        direct = g_transform(PRAWITZ.eval, weight, T, x, tol=tol)
        mirrored = g_transform(PRAWITZ.reflected(), lambda t: weight(-np.asarray(t)), T, -x, tol=tol)
        assert mirrored.value == pytest.approx(-direct.value, abs=2 * tol)

    def test_small_imaginary_residual(self):
        weight = DiscreteDist.rademacher().cf_values
        result = g_transform(PRAWITZ.eval, weight, 15.0, 1.3, tol=1e-10)
        assert result.imag_residual <= 1e-8

    def test_matches_excluded_neighbourhood_integral(self):
        # (i/2pi) int_{eps<|t|<T} e^{-itx} f(t)/t dt = -(1/pi) int_eps^T Im(e^{-itx} f(t))/t dt for Hermitian f
        T, x = 5.0, 0.5
        weight = DiscreteDist.rademacher().cf_values
        result = g_transform(PRAWITZ.eval, weight, T, x, tol=1e-11)

        def integrand(t):
            value = np.exp(-1j * t * x) * PRAWITZ.eval(t / T) * weight(np.array([t]))[0]
            return value.imag / t

        gaps = []
        for eps in (1e-4, 1e-6):
            reference, _ = integrate.quad(integrand, eps, T, epsabs=1e-13, limit=500)
            gaps.append(abs(result.value + reference / math.pi))
        assert gaps[0] < 1e-11 + 10 * 1e-4
        assert gaps[1] < 1e-11 + 10 * 1e-6

    def test_reproducible(self):
        weight = DiscreteDist.rademacher().cf_values
        first = g_transform(PRAWITZ.eval, weight, 20.0, 2.5)
        second = g_transform(PRAWITZ.eval, weight, 20.0, 2.5)
        assert first == second

    def test_non_hermitian_weight_is_rejected(self):
        constant_i = lambda t: np.full(np.shape(t), 1j, dtype=complex)
        with pytest.raises(SymmetryError):
            g_transform(PRAWITZ.component(1), constant_i, 10.0, 1.0)

    def test_subdivision_cap(self):
        kinked = lambda t: np.abs(np.sin(3 * np.asarray(t, dtype=float))).astype(complex)
        with pytest.raises(QuadratureError) as excinfo:
            g_transform(PRAWITZ.eval, kinked, 10.0, 1.0, tol=1e-14, max_subdivisions=30)
        assert excinfo.value.tol == 1e-14

    @pytest.mark.parametrize("T", [0.0, -1.0, math.inf])
    def test_bad_T(self, T):
        with pytest.raises(DomainError):
            g_transform(PRAWITZ.eval, ones, T, 1.0)


def test_results_add():
    left = QuadratureResult(value=1.0, imag_residual=1e-12, abs_error_estimate=1e-10, subdivisions=4)
    right = QuadratureResult(value=-0.25, imag_residual=0.0, abs_error_estimate=2e-10, subdivisions=6)
    total = left + right
    assert total.value == 0.75
    assert total.abs_error_estimate == pytest.approx(3e-10)
    assert total.subdivisions == 10
