"""
Feature tests for the product P_nu(u) = I_nu(u) K_nu(u).

This tests the following features:
1. Evaluation and the half-order closed form
2. Derivatives through the order recurrences against direct formulas
3. The integer-order chain, order monotonicity and the exploratory (h2) and chain convexity
4. Shape checks in u
5. The exploratory log-convexity scan in the order
"""
import math

import mpmath
import pytest

from besselturan.core import OrderArg
from besselturan.product import (CONJECTURE_STEPS, chain_convexity_scan, check_h2, conjecture_scan, d2P_via_h6,
                                 dP_via_h5, direct_derivative, eval_P, h2_scan, h5_residual, h6_difference_check,
                                 half_order_identity_check, order_monotonicity_scan, product, product_integral_check,
                                 product_suite, recurrence_scan, sequence_scan, u_shape_checks)
from besselturan.utils.errors import DomainError
from besselturan.utils.grids import linear_grid, log_grid
from besselturan.utils.verdicts import Outcome

from ..utils import reference as ref


def dp_half(u):
    return math.exp(-2.0 * u) / u + math.expm1(-2.0 * u) / (2.0 * u * u)


@pytest.mark.product
class TestEvaluation:
    """P_nu(u) values."""

    @pytest.mark.parametrize("u", [1e-3, 0.1, 1.0, 10.0, 300.0, 650.0])
    def test_half_order_closed_form(self, u):
        value, err = product(0.5, u)
        assert ref.rel(value, ref.p_half(u)) < 1e-13
        assert err < 1e-13 * value

    def test_large_argument_does_not_overflow(self):
        """The factors overflow and underflow separately; the product is about 1/(2u)."""
        value = eval_P(OrderArg(2.0, 2000.0))
        assert value.p == pytest.approx(1.0 / 4000.0, rel=1e-3)
        assert value.dp_du is None and value.d2p_du2 is None

    def test_half_order_identity_report(self):
        report = half_order_identity_check(log_grid(1e-3, 300.0, 4))
        assert report.command == "product:half-order"
        assert report.all_hold


@pytest.mark.product
class TestDerivatives:
    """(h5), (h6) and the direct derivative."""

    @pytest.mark.parametrize("u", [0.1, 1.0, 4.0])
    def test_h5_half_order(self, u):
        assert ref.rel(dP_via_h5(OrderArg(0.5, u)).dp_du, dp_half(u)) < 1e-12
        assert ref.rel(direct_derivative(OrderArg(0.5, u))[0], dp_half(u)) < 1e-12

    @pytest.mark.parametrize("u", [0.5, 1.0, 2.0])
    def test_h6_half_order(self, u):
        value = d2P_via_h6(OrderArg(0.5, u))
        assert ref.rel(value.d2p_du2, ref.d2p_half(u)) < 1e-10
        assert value.dp_du is not None

    @pytest.mark.parametrize("nu,u", [(0.25, 0.3), (1.5, 2.0), (-0.75, 1.0), (7.0, 12.0)])
    def test_residuals(self, nu, u):
        p = OrderArg(nu, u)
        assert h5_residual(p) < 1e-10
        assert h6_difference_check(p) < 1e-6

    def test_derivative_is_negative(self):
        for nu in (0.0, 0.5, 3.0):
            assert direct_derivative(OrderArg(nu, 1.0))[0] < 0

    @pytest.mark.parametrize("fn", [dP_via_h5, d2P_via_h6, h5_residual, h6_difference_check])
    def test_recurrences_exclude_order_zero(self, fn):
        with pytest.raises(DomainError):
            fn(OrderArg(0.03, 1.0))

    def test_recurrence_scan(self):
        report = recurrence_scan([0.0, 0.5, 1.5, 4.0], [0.1, 1.0, 10.0])
        assert report.details["skipped_nu"] == 1
        assert report.count(Outcome.FAILS) == 0
        assert {v.label for v in report.verdicts} == {"h5.residual", "h6.fd", "h6.concave"}


@pytest.mark.product
class TestOrderInequalities:
    """Chains and inequalities across orders."""

    def test_integer_chain(self):
        report = sequence_scan(1.0, 10)
        assert len(report.verdicts) == 10
        assert report.all_hold
        assert report.asserted

    def test_chain_needs_two_steps(self):
        with pytest.raises(DomainError):
            sequence_scan(1.0, 1)
        with pytest.raises(DomainError):
            chain_convexity_scan(1.0, 1)

    def test_chain_convexity_at_order_one_argument(self):
        """P_0 + P_2 - 2 P_1 at u = 1 is about 0.0732."""
        report = chain_convexity_scan(1.0, 10)
        assert len(report.verdicts) == 9
        assert report.verdicts[0].slack == pytest.approx(0.0732476, abs=1e-6)
        assert not report.asserted

    def test_chain_convexity_fails_at_large_argument(self):
        """For u well above n the chain is concave: slack near -1/(2u^3) at n = 1."""
        report = chain_convexity_scan(10.0, 3)
        first = report.verdicts[0]
        assert first.outcome is Outcome.FAILS
        assert first.slack == pytest.approx(-1.0 / 2000.0, rel=0.1)
        assert report.counterexamples

    def test_order_monotonicity(self, quarter_grid):
        report = order_monotonicity_scan(2.0, [0.0] + quarter_grid)
        assert len(report.verdicts) == len(quarter_grid)
        assert report.all_hold
        with pytest.raises(DomainError):
            order_monotonicity_scan(2.0, [-0.5, 0.5])

    def test_h2_holds_at_small_argument(self):
        assert check_h2(OrderArg(1.0, 1.0)).slack == pytest.approx(0.0732476, abs=1e-6)
        assert check_h2(OrderArg(3.0, 0.2)).holds

    def test_h2_fails_at_half_order(self):
        """P_{-1/2} + P_{3/2} - 2 P_{1/2} = 3.5 e^{-2} - 1/2 at u = 1."""
        v = check_h2(OrderArg(0.5, 1.0))
        assert v.slack == pytest.approx(3.5 * math.exp(-2.0) - 0.5, rel=1e-12)
        assert v.fails

    def test_h2_order_range(self):
        with pytest.raises(DomainError):
            check_h2(OrderArg(0.25, 1.0))
        assert check_h2(OrderArg(0.25, 1.0), exploratory=True).label == "h2"

    def test_h2_scan_is_exploratory(self):
        report = h2_scan([-0.75, 0.0, 0.25, 0.5, 2.0], [0.5, 1.0, 5.0])
        assert not report.asserted
        assert len(report.verdicts) == 4 * 3
        assert report.details["stated_range_fails"] >= 1
        assert len(report.counterexamples) == report.count(Outcome.FAILS)


@pytest.mark.product
class TestShape:
    """Shape of P_nu in u."""

    @pytest.mark.parametrize("nu", [-0.5, 0.5, 1.5, 6.0])
    def test_shape_holds(self, nu):
        report = u_shape_checks(nu, log_grid(0.01, 10.0, 4))
        assert report.count(Outcome.FAILS) == 0

    def test_labels_depend_on_order(self):
        grid = [0.5, 1.0, 2.0]
        assert {v.label for v in u_shape_checks(-0.5, grid).verdicts} == {"P.decr"}
        assert {v.label for v in u_shape_checks(0.5, grid).verdicts} == {"P.decr", "cdf.incr", "cdf.range",
                                                                        "uP.concave"}
        assert "h5.sign" in {v.label for v in u_shape_checks(2.0, grid).verdicts}

    def test_shape_needs_order_above_minus_one(self):
        with pytest.raises(DomainError):
            u_shape_checks(-1.0, [1.0, 2.0])


@pytest.mark.product
class TestIntegralAndConjecture:
    """The integral representation and the log-convexity scan."""

    def test_integral_tolerance_floor(self):
        with pytest.raises(DomainError):
            product_integral_check(OrderArg(1.0, 1.0), tol=1e-10)

    def test_integral_window(self):
        with pytest.raises(DomainError):
            product_integral_check(OrderArg(6.0, 1.0))

    @pytest.mark.slow
    def test_integral_matches(self):
        assert product_integral_check(OrderArg(1.0, 1.0)).holds

    def test_conjecture_is_never_asserted(self):
        report = conjecture_scan([0.1, 1.0], [0.5, 1.0, 2.0], h_values=(1.0, 0.5))
        assert report.command == "conjecture"
        assert not report.asserted
        assert {v.label for v in report.verdicts} == {"conj.h=1", "conj.h=0.5"}
        assert report.details["candidates"] == len(report.counterexamples)

    def test_conjecture_rows_start_above_minus_one(self):
        report = conjecture_scan([1.0], [-1.0, 0.5], h_values=(0.5,))
        assert len(report.verdicts) == 1

    def test_default_steps(self):
        assert CONJECTURE_STEPS == (1.0, 0.5, 0.125, 0.03125)

    def test_log_convex_at_order_zero(self):
        """P_0 P_2 - P_1^2 at u = 1 is about 0.00185."""
        with mpmath.workdps(30):
            p = [mpmath.besseli(n, 1) * mpmath.besselk(n, 1) for n in range(3)]
            expected = float(p[0] * p[2] - p[1] ** 2)
        report = conjecture_scan([1.0], [0.0], h_values=(1.0,))
        (verdict,) = report.verdicts
        assert verdict.outcome is Outcome.HOLDS
        assert verdict.slack == pytest.approx(expected, rel=1e-10)
        assert verdict.slack == pytest.approx(0.0018465, rel=1e-2)
        assert report.counterexamples == []

    @pytest.mark.slow
    def test_candidate_below_order_zero_persists(self):
        """At nu = -1/2, u = 1 the failure survives every step of the schedule and the oracle."""
        report = conjecture_scan([1.0], [-0.5])
        candidates = report.counterexamples
        assert [c["h"] for c in candidates] == [1.0, 0.5, 0.125, 0.03125]
        assert all(c["nu"] == -0.5 and c["u"] == 1.0 for c in candidates)
        assert [c["oracle_slack"] for c in candidates] == pytest.approx([-0.03326, -0.03872, -0.006805, -0.000536],
                                                                         rel=2e-3)
        # P_{-1/2}(1) = cosh(1)/e, P_{3/2}(1) = 2/e^2, P_{1/2}(1) = (1 - e^{-2})/2
        exact = math.cosh(1.0) * math.exp(-1.0) * 2.0 * math.exp(-2.0) - (0.5 * -math.expm1(-2.0)) ** 2
        assert candidates[0]["oracle_slack"] == pytest.approx(exact, rel=1e-12)
        assert report.details["candidates"] == 4
        assert not report.asserted


@pytest.mark.product
@pytest.mark.slow
class TestSuite:
    """The merged product report."""

    def test_suite(self):
        report = product_suite([0.1, 1.0, 10.0], linear_grid(0.25, 3.0, 0.25), n_max=20,
                               shape_u_grid=log_grid(0.01, 10.0, 4), workers=2)
        assert report.command == "product"
        assert report.count(Outcome.FAILS) == 0
        assert report.counterexamples == []
        exploratory = report.details["exploratory"]
        assert exploratory["h2"]["verdicts"] == 12 * 3
        assert exploratory["h2"]["stated_range_fails"] >= 1
        assert exploratory["h1.convex"]["verdicts"] == 3 * 19
        assert not {v.label for v in report.verdicts} & {"h2", "h1.convex"}
