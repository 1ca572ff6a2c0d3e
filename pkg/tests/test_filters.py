"""Tests for the Prawitz filter, N2-hat and the c_{2,p} constants"""

import math

import numpy as np
import pytest

from bebound.errors import DomainError
from bebound.filters import (
    FILTERS,
    PRAWITZ,
    SmoothingFilter,
    c2p_constant,
    get_filter,
    kernel_residual,
    n2_hat_eval,
    n2_hat_quadrature,
    prawitz_eval,
    refined_sup,
    validate_filter,
)


class TestPrawitzEval:
    def test_value_at_zero(self):
        assert prawitz_eval(0.0) == pytest.approx(1.0 + 0.0j, abs=1e-15)

    def test_value_at_half(self):
        assert prawitz_eval(0.5) == pytest.approx(0.5 - 1j * math.pi / 4, abs=1e-15)

    @pytest.mark.parametrize("t", [1.5, -1.5, 1.0 + 1e-12, 7.0])
    def test_zero_outside_support(self, t):
        assert prawitz_eval(t) == 0

    def test_vanishes_towards_the_boundary(self):
        magnitudes = [abs(prawitz_eval(sign * (1 - eps))) for sign in (1, -1) for eps in (1e-3, 1e-6, 1e-9)]
        assert magnitudes[0] > magnitudes[1] > magnitudes[2]
        assert magnitudes[3] > magnitudes[4] > magnitudes[5]
        assert magnitudes[2] < 1e-6 and magnitudes[5] < 1e-6

    def test_hermitian_parity(self, rng):
        t = rng.uniform(-1, 1, 1000)
        assert np.max(np.abs(prawitz_eval(-t) - np.conj(prawitz_eval(t)))) <= 1e-12

    def test_series_and_cotangent_branches_agree(self):
        # the small-argument series takes over below 0.05
        below = prawitz_eval(np.array([0.05 - 1e-12]))[0]
        above = prawitz_eval(np.array([0.05 + 1e-12]))[0]
        assert below == pytest.approx(above, abs=1e-10)

    def test_array_input_keeps_shape(self):
        values = prawitz_eval(np.linspace(-2, 2, 11))
        assert values.shape == (11,)
        assert values.dtype == complex


class TestComponents:
    def test_component_two_is_i_times_m2(self):
        t = np.array([-0.3, 0.2, 0.7])
        assert np.allclose(PRAWITZ.component(2)(t), 1j * PRAWITZ.m2(t))
        assert np.allclose(PRAWITZ.component(1)(t) + PRAWITZ.component(2)(t), PRAWITZ(t))

    def test_bad_component_index(self):
        with pytest.raises(DomainError):
            PRAWITZ.component(3)

    def test_n2_is_m2_over_t(self):
        t = np.array([-0.9, -0.1, 0.25, 0.8])
        assert np.allclose(PRAWITZ.n2_values(t), PRAWITZ.m2(t) / t, atol=1e-15)

    def test_registry(self):
        assert get_filter("prawitz") is PRAWITZ
        assert FILTERS["prawitz"].kappa == 1.0
        with pytest.raises(DomainError):
            get_filter("gaussian")


class TestN2Hat:
    @pytest.mark.parametrize("u, expected", [
        (0.0, -math.pi),
        (2 * math.pi, 0.0),
        (math.pi, -4 / math.pi),
    ])
    def test_closed_form_examples(self, u, expected):
        assert n2_hat_eval(u) == pytest.approx(expected, abs=1e-13)

    def test_range(self):
        values = n2_hat_eval(np.linspace(-100, 100, 10001))
        assert np.all(values <= 0) and np.all(values >= -math.pi)

    def test_closed_form_matches_quadrature(self):
        for u in np.linspace(0.0, 30.0, 50):
            assert n2_hat_quadrature(float(u)) == pytest.approx(float(n2_hat_eval(u)), abs=1e-8)


class TestC2p:
    def test_c22_is_four_pi(self):
        constant = c2p_constant(2.0)
        assert constant.value == pytest.approx(4 * math.pi, abs=1e-8)
        assert constant.argmax_u == pytest.approx(math.pi)

    def test_c22_grid_envelope(self):
        u = np.linspace(0.0, 200.0, 100_001)
        values = u ** 2 * np.abs(n2_hat_eval(u))
        assert values.max() <= 4 * math.pi + 1e-9
        assert values.max() > 4 * math.pi - 1e-4

    def test_c21(self):
        constant = c2p_constant(1.0)
        assert 4.55 < constant.value < 4.555
        assert constant.value == pytest.approx(
            4 * math.pi * max(math.sin(x / 2) ** 2 / x for x in np.linspace(2.0, 2.7, 70001)), rel=1e-8
        )
        assert 3.62 < constant.value / math.pi * 5 / 2 <= 3.6231

    def test_half_power_dominates_fine_grid(self):
        constant = c2p_constant(0.5)
        u = np.linspace(1e-6, 200.0, 1_000_000)
        grid = np.abs(u) ** 0.5 * np.abs(n2_hat_eval(u))
        assert constant.value >= grid.max() - 1e-10

    @pytest.mark.parametrize("p", [0.0, -1.0, 2.5])
    def test_domain(self, p):
        with pytest.raises(DomainError):
            c2p_constant(p)


class TestRefinedSup:
    @pytest.mark.parametrize("threshold", [0.0, 3 * math.pi])
    def test_p2_keeps_four_pi(self, threshold):
        assert refined_sup(2.0, threshold) == pytest.approx(4 * math.pi)

    def test_p1_above_ten(self):
        value = refined_sup(1.0, 10.0)
        u = np.linspace(10.0, 210.0, 200_001)
        grid_max = float(np.max(u * np.abs(n2_hat_eval(u))))
        assert grid_max - 1e-10 <= value <= c2p_constant(1.0).value

    def test_nonincreasing_in_threshold(self):
        values = [refined_sup(1.0, threshold) for threshold in (0.0, 5.0, 10.0, 20.0, 50.0)]
        assert all(a >= b - 1e-12 for a, b in zip(values, values[1:]))

    def test_negative_threshold(self):
        with pytest.raises(DomainError):
            refined_sup(1.0, -1.0)


class TestKernelResidual:
    def test_decays(self):
        at_50 = kernel_residual(PRAWITZ, 50.0)
        at_500 = kernel_residual(PRAWITZ, 500.0)
        assert abs(at_50) < 0.15
        assert abs(at_500) < abs(at_50)

    def test_needs_large_x(self):
        with pytest.raises(DomainError):
            kernel_residual(PRAWITZ, 0.5)


class TestValidateFilter:
    def test_prawitz_passes(self):
        validation = validate_filter(PRAWITZ)
        assert validation.support_ok
        assert validation.parity_max_error <= 1e-12
        assert validation.l1_bounded
        assert validation.ok

    def test_broken_filter_is_flagged(self):
        broken = SmoothingFilter(
            name="broken",
            m1=lambda t: np.full(np.shape(t), 0.5),
            m2=lambda t: np.abs(np.asarray(t, dtype=float)),
        )
        validation = validate_filter(broken)
        assert validation.support_ok
        assert validation.parity_max_error > 0.1
        assert not validation.l1_bounded
        assert not validation.ok
