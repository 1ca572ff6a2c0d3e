"""Tests for the bound producers, the correction chain and the moment/Nagaev audits"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bebound import bounds
from bebound.audit import random_dist
from bebound.cf_core import (
    DiscreteDist,
    NormalLaw,
    load_source,
    make_standardized_iid_sum,
    normal_char_fn,
    parse_dist_spec,
    parse_grid,
)
from bebound.errors import DomainError
from bebound.oracle import X0, convolve_iid
from bebound.reports import BoundReport
from tests.conftest import discrete_dists

SANDWICH_SOURCES = [("point:0", 1, True), ("rademacher", 1, False), ("rademacher", 4, False),
                    ("bernoulli:0.3", 9, False), ("normal", 1, False)]


class TestConstants:
    def test_coefficients(self):
        assert bounds._coefficient(3, 2.0, bounds.PRAWITZ) == 16.0
        assert 3.62 < bounds._coefficient(3, 1.0, bounds.PRAWITZ) <= 3.6231

    def test_x0_envelope(self):
        assert 2.039 < X0 < 2.040
        assert bounds.tyurin_envelope(X0, 2 / 3) < 0.36

    def test_psi(self):
        assert 0.34 <= bounds.psi(3.5) <= 0.36
        assert abs(bounds.psi(1e4) - math.sqrt(2 / math.pi)) < 1e-3
        assert bounds.psi(1e-4) < 1e-4 * math.sqrt(2 / math.pi) * (1 + 1e-9)
        samples = [bounds.psi(x) for x in (0.5, 1.0, 2.0, 3.5, 5.0, 10.0, 100.0)]
        assert all(a < b for a, b in zip(samples, samples[1:]))
        assert all(0 < value < 0.8 for value in samples)

    @pytest.mark.parametrize("x", [0.0, -1.0, math.inf])
    def test_psi_domain(self, x):
        with pytest.raises(DomainError):
            bounds.psi(x)

    def test_table(self):
        table = {entry.name: entry for entry in bounds.constants_table()}
        assert table["c22"].value == pytest.approx(4 * math.pi, abs=1e-8)
        assert table["coef_k3_p2"].value == 16.0
        assert table["psi_3_5"].value == pytest.approx(0.35, abs=0.01)
        assert table["c_u_iid_upper"].provenance == "literature"
        assert table["normal_abs_third"].value == pytest.approx(1.6, abs=0.01)


class TestSmoothingParameter:
    def test_default_T(self):
        assert bounds.default_T(1.0, 1) == pytest.approx(1 / math.sqrt(3))
        assert bounds.default_T(2.0, 16, c_T=0.5) == pytest.approx(1.0)

    def test_resolve_T(self):
        assert bounds.resolve_T(12.0, None, 1.0, 4) == 12.0
        assert bounds.resolve_T(None, 1.0, 1.0, 9) == pytest.approx(3.0)
        with pytest.raises(DomainError):
            bounds.resolve_T(12.0, 1.0, 1.0, 4)

    @pytest.mark.parametrize("beta3, n, c_T", [(0.0, 1, 0.5), (1.0, 0, 0.5), (1.0, 1, -0.5)])
    def test_default_T_domain(self, beta3, n, c_T):
        with pytest.raises(DomainError):
            bounds.default_T(beta3, n, c_T)


class TestCdfBounds:
    def test_degenerate_at_zero(self):
        cf = DiscreteDist.point_mass(0.0).char_fn()
        report = bounds.cdf_bounds(cf, 1.0, 1.0, 10.0)
        assert 1.0 - 1e-9 <= report.upper <= 1.2
        assert report.contains

    def test_accepts_laws(self, rademacher):
        direct = bounds.cdf_bounds(rademacher, 1.0, 0.3, 8.0)
        via_cf = bounds.cdf_bounds(rademacher.char_fn(), 1.0, 0.3, 8.0)
        assert direct.lower == via_cf.lower and direct.upper == via_cf.upper

    def test_scaled_distribution_function(self, bernoulli):
        half = lambda t: 0.5 * bernoulli.cf_values(np.asarray(t, dtype=float))
        report = bounds.cdf_bounds(half, 0.5, 0.5, 10.0)
        assert report.lower - 1e-9 <= 0.5 * bernoulli.cdf(0.5) <= report.upper + 1e-9
        assert report.exact is None

    def test_mass_mismatch(self, rademacher):
        with pytest.raises(DomainError):
            bounds.cdf_bounds(rademacher.char_fn(), 0.5, 0.0, 10.0)

    @pytest.mark.parametrize("T", [0.0, -3.0])
    def test_bad_T(self, rademacher, T):
        with pytest.raises(DomainError):
            bounds.cdf_bounds(rademacher.char_fn(), 1.0, 0.0, T)

    def test_reflection_agrees(self, bernoulli):
        cf = make_standardized_iid_sum(bernoulli, 3)
        tol = 1e-10
        for x in (-1.5, 0.0, 0.4, 2.0):
            direct = bounds.cdf_bounds(cf, 1.0, x, 10.0, tol=tol)
            reflected = bounds.cdf_bounds_by_reflection(cf, 1.0, x, 10.0, tol=tol)
            slack = direct.quadrature_error + reflected.quadrature_error + 1e-9
            assert reflected.lower == pytest.approx(direct.lower, abs=slack)
            assert reflected.contains

    def test_width_shrinks_with_T(self):
        cf = normal_char_fn()
        for x in (-1.0, 0.0, 0.5, 2.0):
            narrow = bounds.cdf_bounds(cf, 1.0, x, 30.0)
            wide = bounds.cdf_bounds(cf, 1.0, x, 10.0)
            assert narrow.upper - narrow.lower <= wide.upper - wide.lower

    @pytest.mark.slow
    @pytest.mark.parametrize("spec, n, raw", SANDWICH_SOURCES)
    def test_sandwich_contains_exact_cdf(self, spec, n, raw):
        cf, _ = load_source(spec, n, raw=raw)
        violations = []
        for T in (5.0, 10.0, 30.0):
            for x in parse_grid("-4:4:0.2"):
                report = bounds.cdf_bounds(cf, 1.0, x, T)
                assert report.lower <= report.upper
                if not report.contains:
                    violations.append((T, x))
        assert violations == []


class TestTailMomentBound:
    def test_normal_example(self):
        report = bounds.tail_moment_bound(normal_char_fn(), 3, 3.0, 40.0, mode="surrogate")
        assert report.exact["tail_ge"] == pytest.approx(27 * 1.349898031630095e-3, rel=1e-12)
        assert report.contains
        assert report.params.p == 2.0

    def test_exact_abs_needs_atoms(self):
        with pytest.raises(DomainError):
            bounds.tail_moment_bound(NormalLaw(), 3, 1.0, 10.0, mode="exact_abs")

    def test_report_layout(self, rademacher):
        cf = make_standardized_iid_sum(rademacher, 4)
        report = bounds.tail_moment_bound(cf.law, 3, 1.0, 10.0)
        assert report.kind == "tail_moment"
        assert report.radius >= 0
        assert report.lower == pytest.approx(report.center - report.radius - report.quadrature_error)
        assert report.upper == pytest.approx(report.center + report.radius + report.quadrature_error)
        assert set(report.exact) == {"tail_ge", "tail_gt"}

    @pytest.mark.parametrize("kwargs", [
        {"x": -1.0},
        {"k": 0},
        {"mode": "absolute"},
        {"k": 4},
        {"T": 0.0},
    ])
    def test_domain(self, rademacher, kwargs):
        args = {"source": make_standardized_iid_sum(rademacher, 2), "k": 3, "x": 1.0, "T": 10.0}
        args.update(kwargs)
        with pytest.raises(DomainError):
            bounds.tail_moment_bound(**args)

    def test_dash_mode_alias(self, rademacher):
        report = bounds.tail_moment_bound(rademacher, 3, 0.5, 10.0, mode="exact-abs")
        assert report.params.mode == "exact_abs"

    @pytest.mark.slow
    @pytest.mark.parametrize("spec, n", [("rademacher", 1), ("rademacher", 4), ("bernoulli:0.3", 9)])
    def test_both_modes_contain_and_dominate(self, spec, n):
        cf, _ = load_source(spec, n)
        tol = 1e-9
        for T in (10.0, 30.0):
            for x in parse_grid("0:4:0.5"):
                exact = bounds.tail_moment_bound(cf.law, 3, x, T, mode="exact_abs", tol=tol)
                surrogate = bounds.tail_moment_bound(cf, 3, x, T, mode="surrogate", tol=tol)
                assert exact.contains and surrogate.contains, (T, x)
                assert surrogate.radius >= exact.radius - 2 * tol

    @pytest.mark.slow
    def test_normal_surrogate_contains(self):
        cf = normal_char_fn()
        for x in parse_grid("0:4:0.5"):
            assert bounds.tail_moment_bound(cf, 3, x, 30.0, mode="surrogate").contains


class TestPositivePart:
    @settings(max_examples=10, deadline=None)
    @given(discrete_dists(min_atoms=2, max_atoms=4), st.sampled_from([0.5, 1.0, 2.5]))
    def test_brackets_exact_tail(self, dist, x):
        report = bounds.positive_part_bounds(dist, 3, x, 15.0)
        assert report.kind == "positive_part"
        assert report.contains

    def test_rejects_nonpositive_x(self, rademacher):
        with pytest.raises(DomainError):
            bounds.positive_part_bounds(rademacher, 3, 0.0, 10.0)


class TestCorrection:
    def test_terms_for_point_mass(self):
        terms = bounds.fix_correction(DiscreteDist.point_mass(-1.0), 3, 2.0, 1.0, 10.0)
        assert terms.coefficient == 16.0
        assert terms.exact_term == pytest.approx(16.0 / 100.0 * 1.0 / 4.0)
        assert terms.moment_min_term == pytest.approx(16.0 / 100.0 * 1.0)

    def test_normal_terms(self):
        terms = bounds.fix_correction(NormalLaw(), 3, 2.0, 3.5, 10.0)
        assert terms.exact_term == pytest.approx(16.0 / 100.0 * bounds.psi(3.5) / 3.5 ** 2, rel=1e-8)

    @pytest.mark.parametrize("p", [0.5, 1.0, 2.0])
    def test_terms_scale_as_power_of_T(self, bernoulli, p):
        dist = bernoulli.standardized()
        for x in (0.5, 2.0):
            at_T = bounds.fix_correction(dist, 3, p, x, 7.0)
            at_2T = bounds.fix_correction(dist, 3, p, x, 14.0)
            assert at_2T.exact_term / at_T.exact_term == pytest.approx(2.0 ** -p, rel=1e-12)
            assert at_2T.moment_min_term / at_T.moment_min_term == pytest.approx(2.0 ** -p, rel=1e-12)

    def test_moment_data_terms_scale_as_power_of_T(self):
        cf = normal_char_fn()
        at_T = bounds._correction_terms(None, cf, 3, 1.0, 0.0, 5.0, bounds.PRAWITZ)
        at_2T = bounds._correction_terms(None, cf, 3, 1.0, 0.0, 10.0, bounds.PRAWITZ)
        assert at_2T[0] / at_T[0] == pytest.approx(0.5, rel=1e-12)
        assert at_2T[1] / at_T[1] == pytest.approx(0.5, rel=1e-12)
        assert at_T[2] == at_2T[2]

    def test_domain(self, rademacher):
        with pytest.raises(DomainError):
            bounds.fix_correction(rademacher, 3, 3.0, 1.0, 10.0)
        with pytest.raises(DomainError):
            bounds.fix_correction(rademacher, 3, 1.0, 0.0, 10.0)

    def _check_chain(self, dist, tol=1e-9):
        for x in (0.5, 1.0, 2.0, 3.5):
            swap, swap_error = bounds.surrogate_swap_error(dist, 3, x, 10.0, tol=tol)
            for p in (1.0, 2.0):
                terms = bounds.fix_correction(dist, 3, p, x, 10.0)
                assert terms.exact_term <= terms.moment_min_term * (1 + 1e-12)
                assert swap <= terms.exact_term + swap_error + 2 * tol

    def test_chain_on_random_dists(self):
        rng = np.random.default_rng(2024)
        for _ in range(10):
            self._check_chain(random_dist(rng, 5))

    @pytest.mark.slow
    def test_chain_on_many_random_dists(self):
        rng = np.random.default_rng(7)
        for _ in range(200):
            self._check_chain(random_dist(rng, 5))


class TestMomentChains:
    @pytest.mark.parametrize("spec, n", [("rademacher", 1), ("rademacher", 4), ("bernoulli:0.3", 1),
                                         ("bernoulli:0.3", 9), ("atoms:-2,0.2;0,0.5;1,0.3", 3)])
    def test_chain_holds(self, spec, n):
        dist = parse_dist_spec(spec)
        for x in (0.5, 1.0, 2.0, 3.5):
            report = bounds.e_rat_bounds(dist, x, n)
            assert report.chain_holds
            assert report.notes

    def test_symmetric_refinement(self, rademacher, bernoulli):
        assert bounds.e_rat_bounds(rademacher, 1.0, 1).chain2_symmetric == pytest.approx(0.5)
        assert bounds.e_rat_bounds(bernoulli, 1.0, 1).chain2_symmetric is None

    def test_raw_distribution(self):
        dist = DiscreteDist.from_atoms([(-3.0, 0.5), (1.0, 0.5)])
        report = bounds.e_rat_bounds(dist, 2.0, standardize=False)
        assert report.beta3 == pytest.approx(14.0)
        assert report.exact == pytest.approx(0.5 * 27 / 25)

    @pytest.mark.parametrize("spec", ["rademacher", "bernoulli:0.3"])
    def test_rosenthal_exact(self, spec):
        base = parse_dist_spec(spec).standardized()
        for n in range(1, 65):
            third = convolve_iid(base, n).scaled(1 / math.sqrt(n)).abs_moment(3)
            assert third <= bounds.rosenthal_ub(base.beta3, n)

    def test_rosenthal_domain(self):
        with pytest.raises(DomainError):
            bounds.rosenthal_ub(0.5, 1)
        with pytest.raises(DomainError):
            bounds.rosenthal_ub(1.0, 0)


class TestNagaev:
    def test_derivation_for_rademacher(self):
        check = bounds.small_n_nagaev(1.0, 1, 2.5, law=DiscreteDist.rademacher())
        assert check.applicable
        assert check.bound == pytest.approx(4.5 / (1 + 2.5 ** 3))
        claims = {step.claim: step for step in check.derivation}
        assert claims["1 + max(E|X|^3, E|Z|^3) <= 3 + beta3/sqrt(n)"].holds
        assert claims["3 + beta3/sqrt(n) <= 4.5 beta3/sqrt(n)"].holds
        assert all(step.holds for step in check.derivation)

    def test_two_regime_argument_near_threshold(self):
        # r = 0.7: the single chain breaks, the split at x0 carries both regimes
        check = bounds.small_n_nagaev(0.7 * 4, 16, 1.0)
        claims = {step.claim: step.holds for step in check.derivation}
        assert not claims["3 + beta3/sqrt(n) <= 4.5 beta3/sqrt(n)"]
        assert claims["x <= x0: (1 + x0^3) 0.4748 beta3/sqrt(n) <= 4.5 beta3/sqrt(n)"]
        assert claims["x > x0: (1 + x0^-3)(2 + beta3/sqrt(n)) <= 4.5 beta3/sqrt(n)"]

    def test_not_applicable(self):
        assert not bounds.small_n_nagaev(1.0, 9, 1.0).applicable

    @pytest.mark.slow
    @pytest.mark.parametrize("spec, n", [("rademacher", 1), ("rademacher", 2), ("bernoulli:0.1", 1),
                                         ("bernoulli:0.1", 4), ("bernoulli:0.1", 9), ("bernoulli:0.1", 16)])
    def test_audit_passes(self, spec, n):
        check = bounds.nagaev_audit(parse_dist_spec(spec), n)
        assert check.passed
        if check.applicable:
            assert check.observed <= 4.5

    def test_domain(self):
        with pytest.raises(DomainError):
            bounds.small_n_nagaev(0.5, 1, 1.0)
        with pytest.raises(DomainError):
            bounds.small_n_nagaev(1.0, 1, -1.0)


class TestHTriplePrime:
    @pytest.mark.parametrize("x", [0.5, 1.0, 2.0, 5.0])
    def test_ratio_bounded(self, x):
        grid = -np.logspace(-3, 4, 1000)
        assert bounds.h_triple_prime_check(x, grid) <= 1.001

    def test_far_out_is_small(self):
        assert bounds.h_triple_prime_check(1.0, [-1e4]) < 1e-5

    def test_matches_closed_form(self):
        x = 2.0
        u = np.array([-0.3, -1.0, -4.0])
        for point, exact in zip(u, bounds.h_triple_prime_exact(x, u)):
            assert bounds.h_triple_prime_check(x, [point]) == pytest.approx(abs(exact) * x * x / 6, rel=1e-5)
        assert bounds.h_triple_prime_exact(x, np.array([0.5]))[0] == 0.0

    def test_domain(self):
        with pytest.raises(DomainError):
            bounds.h_triple_prime_check(1.0, [-1.0, 0.0])
        with pytest.raises(DomainError):
            bounds.h_triple_prime_check(0.0, [-1.0])
        with pytest.raises(DomainError):
            bounds.h_triple_prime_check(1.0, [])


def test_grid_order_is_kept():
    xs = list(np.linspace(-2, 2, 9))
    assert bounds.evaluate_grid(lambda x: x * x, xs, max_workers=4) == [x * x for x in xs]


def test_report_rejects_inverted_interval():
    with pytest.raises(ValueError):
        BoundReport(kind="cdf_sandwich", x=0.0, T=1.0, lower=1.0, upper=0.0, quadrature_error=0.0,
                    params={"tol": 1e-9})
