"""
Feature tests for the extended-precision oracle.

This tests the following features:
1. Oracle values against mpmath's own Bessel functions and closed forms
2. Certified digit counts and the domain of the oracle
3. Seeded sampling of the validated window
4. The certification report comparing the fast evaluators with the oracle
"""
from unittest.mock import patch

import mpmath
import pytest

from besselturan.core import Kind, OrderArg, eval_I, eval_K
from besselturan.oracle import (OracleValue, certify, oracle_I, oracle_K, oracle_P, oracle_wronskian,
                                sample_points)
from besselturan.product import product
from besselturan.utils.config import get_settings
from besselturan.utils.errors import DomainError, EvaluationOverflowError, EvaluationUnderflowError
from besselturan.utils.verdicts import Outcome


@pytest.mark.oracle
class TestOracleValues:
    """Reference values at a few hand-picked points."""

    def test_i_one_at_one(self):
        value = oracle_I(OrderArg(1.0, 1.0))
        assert value.kind is Kind.I
        assert float(value) == pytest.approx(0.5651591039924850, rel=1e-15)

    def test_k_half_closed_form(self):
        """K_{1/2}(1) = sqrt(pi/2) e^{-1}, checked to far beyond double precision."""
        with mpmath.workdps(50):
            expected = mpmath.sqrt(mpmath.pi / 2) * mpmath.exp(-1)
            value = oracle_K(OrderArg(0.5, 1.0))
            assert abs(value.value - expected) / expected < mpmath.mpf("1e-30")

    @pytest.mark.parametrize("nu", [0.0, 1.0, 3.0])
    def test_k_integer_order_via_extrapolation(self, nu):
        """Integer orders take the Richardson path and still agree with mpmath.besselk."""
        with mpmath.workdps(40):
            expected = mpmath.besselk(nu, 2.5)
            value = oracle_K(OrderArg(nu, 2.5))
            assert abs(value.value - expected) / expected < mpmath.mpf("1e-20")

    @pytest.mark.parametrize("nu,u", [(0.3, 0.2), (2.75, 7.0), (-0.4, 1.5), (15.0, 40.0)])
    def test_i_matches_mpmath(self, nu, u):
        with mpmath.workdps(40):
            expected = mpmath.besseli(nu, u)
            assert abs(oracle_I(OrderArg(nu, u)).value - expected) / expected < mpmath.mpf("1e-28")

    def test_k_is_even_in_the_order(self):
        assert oracle_K(OrderArg(-1.3, 2.0)).value == oracle_K(OrderArg(1.3, 2.0)).value

    def test_product_and_wronskian(self):
        p = OrderArg(0.5, 2.0)
        assert float(oracle_P(p)) == pytest.approx(float((1 - mpmath.exp(-4)) / 4), rel=1e-15)
        w = oracle_wronskian(OrderArg(1.7, 3.0))
        assert abs(w.value - 1) < mpmath.mpf("1e-25")


@pytest.mark.oracle
class TestCertifiedDigits:
    """Digit accounting and the oracle's domain."""

    def test_digits_meet_minimum(self):
        minimum = get_settings().oracle_min_digits
        assert oracle_I(OrderArg(2.5, 10.0)).certified_digits >= minimum
        assert oracle_K(OrderArg(2.5, 10.0)).certified_digits >= minimum

    def test_product_digits_follow_weaker_factor(self):
        p = OrderArg(1.25, 3.0)
        expected = min(oracle_I(p).certified_digits, oracle_K(p).certified_digits) - 1
        assert oracle_P(p).certified_digits == expected

    def test_rel_diff(self):
        value = OracleValue(mpmath.mpf(2), 40, Kind.I)
        assert value.rel_diff(2.0) == 0.0
        assert value.rel_diff(2.2) == pytest.approx(0.1)
        assert OracleValue(mpmath.mpf(0), 40, Kind.I).rel_diff(1e-20) == 1e-20

    def test_argument_limit(self):
        with pytest.raises(DomainError):
            oracle_I(OrderArg(1.0, 1500.0))

    @pytest.mark.parametrize("nu,u", [(0.3, 0.2), (2.75, 7.0), (40.0, 25.0), (-0.6, 0.05)])
    def test_fast_evaluators_agree(self, nu, u):
        p = OrderArg(nu, u)
        assert oracle_I(p).rel_diff(eval_I(p).value) < 1e-12
        assert oracle_K(p).rel_diff(eval_K(p).value) < 1e-12
        assert oracle_P(p).rel_diff(product(nu, u)[0]) < 1e-12


@pytest.mark.oracle
class TestSampling:
    """Seeded sample points."""

    def test_sampling_is_deterministic(self):
        assert sample_points(10, 7) == sample_points(10, 7)
        assert sample_points(10, 7) != sample_points(10, 8)

    def test_points_lie_in_window(self):
        settings = get_settings()
        for p in sample_points(200, 20240601):
            assert settings.window_nu_min <= p.nu <= settings.nu_max
            assert 1e-3 <= p.u <= settings.u_max_unscaled


@pytest.mark.oracle
@pytest.mark.slow
class TestCertify:
    """The certification report."""

    def test_report_shape(self):
        report = certify(points=20, seed=20240601, workers=2)
        assert report.command == "certify"
        failed = len(report.details["oracle_failures"]) + len(report.details["evaluation_failures"])
        assert len(report.verdicts) == 7 * (20 - failed) + 3 * failed
        assert report.config["seed"] == 20240601
        labels = {v.label for v in report.verdicts}
        assert labels <= {"certify.I", "certify.K", "certify.P", "wronskian", "r1", "r2", "r3"}
        assert len(report.counterexamples) == len(report.failures())

    def test_default_run_covers_every_point(self):
        """The seeded default sample includes orders near 100 at tiny u, where unscaled I underflows."""
        report = certify()
        assert report.details["evaluation_failures"] == []
        assert len({(v.point.nu, v.point.u) for v in report.by_label("certify.I")}) == 1000
        assert len(report.by_label("certify.K")) == 1000

    def test_same_seed_same_verdicts(self):
        first = certify(points=5, seed=11, workers=1)
        second = certify(points=5, seed=11, workers=3)
        assert first.to_csv() == second.to_csv()


@pytest.mark.oracle
class TestCertifyPoint:
    """Single certification points with the sample patched in."""

    def test_underflowing_values_are_compared_scaled(self):
        p = OrderArg(95.317, 0.0251)
        with pytest.raises(EvaluationUnderflowError):
            eval_I(p)
        with patch("besselturan.oracle.sample_points", return_value=[p]):
            report = certify(points=1, workers=1)
        assert report.details["evaluation_failures"] == []
        assert report.by_label("certify.I")[0].outcome is Outcome.HOLDS
        assert len(report.verdicts) == 7

    def test_evaluation_errors_become_failed_rows(self):
        p = OrderArg(1.0, 1.0)
        with patch("besselturan.oracle.sample_points", return_value=[p]), \
                patch("besselturan.oracle.scaled_i", side_effect=EvaluationOverflowError("too large")):
            report = certify(points=1, workers=1)
        assert report.details["evaluation_failures"] == [{"nu": 1.0, "u": 1.0, "error": "too large"}]
        assert [v.outcome for v in report.verdicts] == [Outcome.FAILS] * 3
        assert len(report.counterexamples) == 3
