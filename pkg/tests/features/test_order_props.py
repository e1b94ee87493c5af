"""
Feature tests for properties in the order at fixed argument.

This tests the following features:
1. Log-convexity and log-concavity scans in the plain and sqrt(nu) scales
2. The six Turan-type inequalities in the sqrt(nu) scale
3. Monotonicity of K ratios
4. Finite-difference complete monotonicity of facts a-d
"""
import pytest

from besselturan.order_props import (MAX_CM_ORDER, CMFact, OrderFunctionKind, cm_check, kratio_monotone_check,
                                     log_value, logconvexity_check, order_suite, sqrt_turan_inequalities)
from besselturan.utils.errors import DomainError
from besselturan.utils.grids import linear_grid
from besselturan.utils.verdicts import Outcome


@pytest.mark.order_props
class TestKinds:
    """OrderFunctionKind metadata."""

    def test_properties(self):
        assert OrderFunctionKind.K_PLAIN.properties == ("log-convex",)
        assert OrderFunctionKind.I_PLAIN.properties == ("log-concave",)
        assert "completely-monotonic" in OrderFunctionKind.P_SQRT.properties

    def test_scales_and_domains(self, fresh_settings):
        assert OrderFunctionKind.I_SQRT.sqrt_order
        assert not OrderFunctionKind.IOVERK_PLAIN.sqrt_order
        assert OrderFunctionKind.I_SQRT.domain_min == 0.0
        assert OrderFunctionKind.I_PLAIN.domain_min == -1.0
        assert OrderFunctionKind.K_PLAIN.domain_min == fresh_settings().nu_min

    def test_k_ratio_has_no_log_value(self):
        with pytest.raises(DomainError):
            log_value(OrderFunctionKind.KRATIO_SQRT, 1.0, 1.0)

    def test_log_value_of_product_is_sum(self):
        li, _ = log_value(OrderFunctionKind.I_PLAIN, 1.5, 2.0)
        lk, _ = log_value(OrderFunctionKind.K_PLAIN, 1.5, 2.0)
        lp, _ = log_value(OrderFunctionKind.P_PLAIN, 1.5, 2.0)
        assert lp == pytest.approx(li + lk, rel=1e-14)


@pytest.mark.order_props
class TestLogConvexity:
    """Midpoint predicates in the order."""

    @pytest.mark.parametrize("u", [0.01, 1.0, 50.0])
    def test_k_is_log_convex_on_the_reals(self, u):
        report = logconvexity_check(OrderFunctionKind.K_PLAIN, [-10.0, -1.0, -0.25, 0.5, 3.0, 15.0], 0.25, u)
        assert report.asserted
        assert report.count(Outcome.FAILS) == 0
        assert {v.label for v in report.verdicts} == {"K_plain.log-convex"}

    @pytest.mark.parametrize("u", [0.01, 1.0, 50.0])
    def test_i_is_log_concave_above_minus_one(self, u):
        report = logconvexity_check(OrderFunctionKind.I_PLAIN, [-0.75, 0.0, 1.0, 7.5], 0.25, u)
        assert report.count(Outcome.FAILS) == 0
        assert {v.label for v in report.verdicts} == {"I_plain.log-concave"}

    @pytest.mark.parametrize("kind", [OrderFunctionKind.I_SQRT, OrderFunctionKind.P_SQRT,
                                      OrderFunctionKind.IOVERK_SQRT, OrderFunctionKind.K_SQRT])
    def test_sqrt_kinds(self, kind):
        report = logconvexity_check(kind, [0.25, 1.0, 4.0, 16.0], 0.5, 2.0)
        assert report.count(Outcome.FAILS) == 0

    def test_conjectured_kind_is_not_asserted(self):
        report = logconvexity_check(OrderFunctionKind.P_PLAIN, [-0.5, 0.0, 1.0], 0.5, 1.0)
        assert not report.asserted
        assert report.verdicts[0].label == "P_plain.log-convex"

    def test_invalid_scans(self):
        with pytest.raises(DomainError):
            logconvexity_check(OrderFunctionKind.I_PLAIN, [-1.0], 0.25, 1.0)
        with pytest.raises(DomainError):
            logconvexity_check(OrderFunctionKind.I_SQRT, [0.0], 0.25, 1.0)
        with pytest.raises(DomainError):
            logconvexity_check(OrderFunctionKind.K_PLAIN, [1.0], 0.0, 1.0)
        with pytest.raises(DomainError):
            logconvexity_check(OrderFunctionKind.KRATIO_SQRT, [1.0], 0.25, 1.0)
        with pytest.raises(DomainError):
            logconvexity_check(OrderFunctionKind.K_PLAIN, [99.8], 0.25, 1.0)


@pytest.mark.order_props
class TestSqrtTuranInequalities:
    """The six inequalities in the sqrt(nu) scale."""

    @pytest.mark.parametrize("u", [0.1, 1.0, 10.0, 100.0])
    def test_all_hold(self, u):
        grid = [0.25, 1.0, 4.0, 9.0]
        report = sqrt_turan_inequalities(u, grid)
        assert report.command == "sqrt-turan"
        assert len(report.verdicts) == 6 * len(grid)
        assert report.count(Outcome.FAILS) == 0
        assert {v.label for v in report.verdicts} == {"sqrt.I", "sqrt.K", "sqrt.Kratio", "sqrt.P", "sqrt.IoverK",
                                                      "sqrt.IoverK_plain"}

    def test_printed_direction_is_refuted(self):
        """I/K is strictly log-concave in the order, so the reversed midpoint inequality fails everywhere."""
        grid = [0.5, 2.0, 6.0]
        report = sqrt_turan_inequalities(1.0, grid)
        assert report.details["printed_direction_fails"] == len(grid)

    def test_orders_must_be_positive(self):
        with pytest.raises(DomainError):
            sqrt_turan_inequalities(1.0, [0.0, 1.0])


@pytest.mark.order_props
class TestKRatios:
    """Monotonicity of K ratios in the order."""

    def test_streams(self):
        report = kratio_monotone_check(1.0, 1.0, [-2.0, -0.5, 0.5, 1.0, 3.0])
        assert len(report.by_label("kratio.shift")) == 4
        assert len(report.by_label("kratio.sqrt")) == 2
        assert report.all_hold

    def test_fractional_shift(self):
        report = kratio_monotone_check(5.0, 0.5, linear_grid(-3.0, 3.0, 0.5))
        assert report.count(Outcome.FAILS) == 0

    def test_shift_must_be_positive(self):
        with pytest.raises(DomainError):
            kratio_monotone_check(1.0, 0.0, [1.0, 2.0])


@pytest.mark.order_props
class TestCompleteMonotonicity:
    """Finite-difference sign checks of facts a-d."""

    @pytest.mark.parametrize("fact", list(CMFact))
    @pytest.mark.parametrize("u", [0.5, 2.0])
    def test_facts_hold(self, fact, u):
        report = cm_check(fact, [0.25, 1.0, 4.0], MAX_CM_ORDER, 0.25, u)
        assert len(report.verdicts) == 3 * (MAX_CM_ORDER + 1)
        assert report.count(Outcome.FAILS) == 0

    def test_fact_d_with_larger_second_argument(self):
        report = cm_check(CMFact.D, [0.5, 2.0], 3, 0.5, 1.0, v=3.0)
        assert report.count(Outcome.FAILS) == 0
        assert report.config["v"] == 3.0

    def test_fact_c_with_shift(self):
        report = cm_check(CMFact.C, [0.0, 1.0], 3, 0.5, 1.0, alpha=0.5, n=2)
        assert report.count(Outcome.FAILS) == 0
        assert {v.label for v in report.verdicts} == {f"cm.c.k{k}" for k in range(4)}

    @pytest.mark.parametrize("kwargs", [
        {"fact": CMFact.A, "nu_grid": [1.0], "max_k": 5, "h": 0.25},
        {"fact": CMFact.A, "nu_grid": [1.0], "max_k": 2, "h": 0.0},
        {"fact": CMFact.D, "nu_grid": [1.0], "max_k": 2, "h": 0.25, "v": 0.5},
        {"fact": CMFact.C, "nu_grid": [1.0], "max_k": 2, "h": 0.25, "alpha": -0.5},
        {"fact": CMFact.C, "nu_grid": [1.0], "max_k": 2, "h": 0.25, "n": 0},
        {"fact": CMFact.B, "nu_grid": [-0.5, 1.0], "max_k": 2, "h": 0.25},
        {"fact": CMFact.D, "nu_grid": [0.0, 1.0], "max_k": 2, "h": 0.25},
    ])
    def test_invalid_parameters(self, kwargs):
        with pytest.raises(DomainError):
            cm_check(u=1.0, **kwargs)


@pytest.mark.order_props
@pytest.mark.slow
class TestSuite:
    """The merged order-scan report."""

    def test_suite(self):
        report = order_suite([0.1, 1.0, 10.0], linear_grid(0.25, 4.0, 0.25), h=0.25, max_k=3, workers=2)
        assert report.command == "order-scan"
        assert report.asserted
        assert report.count(Outcome.FAILS) == 0
        assert report.details["printed_direction_fails"] > 0
