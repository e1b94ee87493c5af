"""
Feature tests for the closed-form bounds on ratios and logarithmic derivatives.

This tests the following features:
1. Sandwich intervals around I_nu/I_{nu-1}, K_nu/K_{nu-1} and the logarithmic derivatives
2. Validity ranges of each side
3. Verdicts of every bound on a grid
4. The equivalence audit between each Turan inequality and its bound forms
"""
import math

import pytest
from scipy import special

from besselturan.bounds import (FAMILIES, TargetKind, bound_verdicts, bounds_scan, equivalence_audit,
                                i_logderiv_bounds, i_ratio_bounds, k_logderiv_bounds, k_ratio_bounds,
                                reciprocal_ratio_bounds, sandwich_verdicts, target_value)
from besselturan.core import OrderArg
from besselturan.utils.verdicts import Outcome


@pytest.mark.bounds
class TestSandwiches:
    """The closed-form intervals at hand-checked points."""

    def test_i_ratio_at_two_three(self):
        """I_2(3)/I_1(3) = 0.5679... lies between (l1) and (l3)."""
        p = OrderArg(2.0, 3.0)
        interval = i_ratio_bounds(p)
        assert interval.lower == pytest.approx(0.53518, abs=1e-5)
        assert interval.upper == pytest.approx(0.58114, abs=1e-5)
        assert interval.domain_ok
        ratio = float(special.ive(2.0, 3.0) / special.ive(1.0, 3.0))
        value, err = target_value(TargetKind.I_RATIO, p)
        assert value == pytest.approx(ratio, rel=1e-12)
        assert err < 1e-14
        assert interval.contains(value)

    def test_no_i_ratio_bounds_below_zero(self):
        interval = i_ratio_bounds(OrderArg(-0.5, 2.0))
        assert interval.lower is None and interval.upper is None
        assert not interval.domain_ok

    def test_k_ratio_half_order(self):
        """K_{1/2} = K_{-1/2}, so the ratio is exactly 1 and only (l2) applies."""
        p = OrderArg(0.5, 1.5)
        interval = k_ratio_bounds(p)
        assert interval.lower is None
        assert interval.contains(1.0)
        assert target_value(TargetKind.K_RATIO, p)[0] == pytest.approx(1.0, rel=1e-14)

    def test_k_ratio_lower_side_needs_order_above_one(self):
        assert k_ratio_bounds(OrderArg(1.0, 2.0)).lower is None
        assert k_ratio_bounds(OrderArg(2.5, 2.0)).lower is not None

    def test_i_logderiv_half_order(self):
        """u coth u - 1/2 at u = 1 is 0.81304..."""
        interval = i_logderiv_bounds(OrderArg(0.5, 1.0))
        assert interval.contains(1.0 / math.tanh(1.0) - 0.5)
        assert interval.upper == pytest.approx(math.hypot(1.0, 0.5))

    def test_k_logderiv_half_order(self):
        p = OrderArg(0.5, 1.0)
        interval = k_logderiv_bounds(p)
        value, _ = target_value(TargetKind.K_LOGDERIV, p)
        assert value == pytest.approx(-1.5, rel=1e-13)
        assert interval.contains(value)
        assert interval.lower is None

    def test_reciprocal_forms(self):
        p = OrderArg(1.5, 4.0)
        i_inv, k_inv = reciprocal_ratio_bounds(p)
        assert i_inv.contains(target_value(TargetKind.I_INV_RATIO, p)[0])
        assert k_inv.contains(target_value(TargetKind.K_INV_RATIO, p)[0])
        assert i_inv.upper_label == "r1" and k_inv.lower_label == "r2"

    def test_sandwich_slack_signs(self):
        verdicts = sandwich_verdicts(i_ratio_bounds(OrderArg(2.0, 3.0)), OrderArg(2.0, 3.0))
        assert [v.label for v in verdicts] == ["l1", "l3"]
        assert all(v.slack > 0 and v.holds for v in verdicts)


@pytest.mark.bounds
class TestBoundVerdicts:
    """Every valid bound holds on a coarse grid."""

    @pytest.mark.parametrize("nu", [-0.75, 0.0, 0.5, 1.5, 4.0, 19.0])
    @pytest.mark.parametrize("u", [1e-3, 0.1, 1.0, 10.0, 200.0])
    def test_no_bound_fails(self, nu, u):
        verdicts = bound_verdicts(OrderArg(nu, u))
        assert verdicts
        assert not [v for v in verdicts if v.outcome is Outcome.FAILS]

    def test_labels_follow_validity(self):
        labels = {v.label for v in bound_verdicts(OrderArg(-0.5, 1.0))}
        assert labels == {"l2", "b1", "b2", "r1", "r2"}
        labels = {v.label for v in bound_verdicts(OrderArg(2.0, 1.0))}
        assert labels == {"l1", "l2", "l3", "l4", "b1", "b2", "b3", "b4", "r1", "r2"}

    def test_scan(self, small_nu_grid, small_u_grid):
        report = bounds_scan(small_nu_grid, small_u_grid, workers=2)
        assert report.command == "bounds"
        assert report.count(Outcome.FAILS) == 0
        assert report.counterexamples == []


@pytest.mark.bounds
class TestEquivalenceAudit:
    """Each Turan inequality decides as its bound forms do."""

    def test_small_audit_agrees(self):
        report = equivalence_audit([-0.5, 0.25, 1.5, 3.0], [0.01, 1.0, 50.0], workers=2)
        assert report.command == "equivalence-audit"
        assert report.counterexamples == []
        families = report.details["families"]
        assert set(families) == set(FAMILIES)
        assert all(counts["disagree"] == 0 for counts in families.values())
        # F1 and F2 at every point, F3 for nu > 0 and F4 for nu > 1
        assert sum(families["F2"].values()) == 12
        assert sum(families["F3"].values()) == 9
        assert sum(families["F4"].values()) == 6

    def test_flag_for_third_family(self):
        report = equivalence_audit([0.5], [1.0])
        assert "third family" in report.details["flagged"]
