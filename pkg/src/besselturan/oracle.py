'''
Oracle.py

Slow extended-precision reference values for I_nu, K_nu and their product, used to certify the
double-precision evaluators in besselturan.core.

I_nu is summed from its ascending power series with a computed tail bound. K_nu comes from the
reflection formula K_nu = (pi/2)(I_{-nu} - I_nu)/sin(nu pi); within 1e-8 of an integer order the
symmetric averages at nu +- delta, +-2 delta, ... are Richardson-extrapolated instead.

Every call builds its own mpmath context, so the oracle is safe to call from concurrent workers.
The working precision starts at `oracle_dps` and grows by the number of digits the reflection
formula is expected to cancel at the given argument.
'''
from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass
from typing import List, Optional, Tuple

import mpmath
import numpy as np

from besselturan.core import (Kind, OrderArg, ScaledValue, recurrence_residuals, scaled_i, scaled_k,
                              wronskian_residual)
from besselturan.product import product
from besselturan.utils.config import get_settings
from besselturan.utils.errors import BesselTuranError, ConvergenceError, DomainError, PrecisionLossError
from besselturan.utils.report import ScanReport
from besselturan.utils.runner import map_rows
from besselturan.utils.verdicts import InequalityVerdict

logger = logging.getLogger(__name__)

ORACLE_U_MAX = 1000.0
NEAR_INTEGER = 1e-8
RICHARDSON_DELTA = 1e-6
GUARD_DIGITS = 5


@dataclass(frozen=True)
class OracleValue:
    '''
    An extended-precision reference value.

    Attributes:
        value (mpmath.mpf): The value at the oracle's working precision.
        certified_digits (int): Number of correct significant decimal digits.
        kind (Kind): Which function the value belongs to.
    '''
    value: mpmath.mpf
    certified_digits: int
    kind: Kind

    def __float__(self) -> float:
        return float(self.value)

    def rel_diff(self, approx: float) -> float:
        '''|approx - value| / |value| in double precision.'''
        if self.value == 0:
            return abs(approx)
        return float(abs((self.value - approx) / self.value))

    def rel_diff_scaled(self, approx: ScaledValue, exponent: float) -> float:
        '''
        rel_diff against approx * e^{exponent}, formed in extended precision so values outside the
        double range compare as well.
        '''
        ctx = _context(0.0)
        unscaled = ctx.ldexp(ctx.mpf(approx.mantissa), approx.exponent) * ctx.exp(exponent)
        if self.value == 0:
            return float(abs(unscaled))
        return float(abs((self.value - unscaled) / self.value))


def _context(u: float, extra: int = 0) -> mpmath.MPContext:
    settings = get_settings()
    ctx = mpmath.MPContext()
    # the reflection formula cancels about 2u/ln(10) digits at large u
    ctx.dps = settings.oracle_dps + int(math.ceil(2.0 * u / math.log(10.0))) + extra + 16
    return ctx


def _check(p: OrderArg) -> None:
    if p.u > ORACLE_U_MAX:
        raise DomainError("u", p.u, f"oracle arguments must not exceed {ORACLE_U_MAX:g}")


def _digits(ctx, x) -> float:
    return float(-ctx.log10(x)) if x > 0 else float(ctx.dps)


def _series_i(ctx, nu, u) -> Tuple[mpmath.mpf, int]:
    '''Sum of the ascending series for I_nu(u) and its certified digit count.'''
    settings = get_settings()
    half = u / 2
    q = half * half
    goal = ctx.mpf(10) ** (-(ctx.dps - GUARD_DIGITS))

    def direct(k):
        return half ** (nu + 2 * k) * ctx.rgamma(k + 1) * ctx.rgamma(nu + k + 1)

    term = direct(0)
    total = term
    largest = abs(term)
    for k in range(settings.oracle_max_terms):
        denom = (k + 1) * (nu + k + 1)
        term = direct(k + 1) if term == 0 else term * q / denom
        total += term
        largest = max(largest, abs(term))
        if nu + k + 2 <= 0 or total == 0:
            continue
        # once the term ratio r is below 1 and decreasing, the tail is bounded by |t| r / (1 - r)
        ratio = q / ((k + 2) * (nu + k + 2))
        if ratio >= 1:
            continue
        tail = abs(term) * ratio / (1 - ratio)
        if tail <= goal * abs(total):
            break
    else:
        raise ConvergenceError(f"oracle series for I_{nu}({u}) exceeded {settings.oracle_max_terms} terms",
                               partial=total)
    loss = max(0.0, _digits(ctx, abs(total) / largest)) if total != 0 else float(ctx.dps)
    rounding = math.log10(k + 2)
    certified = min(ctx.dps - GUARD_DIGITS - loss - rounding, _digits(ctx, tail / abs(total)))
    return total, int(math.floor(certified))


def _reflection_k(ctx, nu, u) -> Tuple[mpmath.mpf, int]:
    minus, d_minus = _series_i(ctx, -nu, u)
    plus, d_plus = _series_i(ctx, nu, u)
    diff = minus - plus
    loss = max(0.0, _digits(ctx, abs(diff) / max(abs(minus), abs(plus))))
    value = ctx.pi / 2 * diff / ctx.sinpi(nu)
    return value, int(math.floor(min(d_minus, d_plus) - loss - 1))


def _oracle_k_value(ctx, nu, u) -> Tuple[mpmath.mpf, int]:
    nearest = round(float(nu))
    if abs(float(nu) - nearest) >= NEAR_INTEGER:
        return _reflection_k(ctx, nu, u)
    # symmetric averages are even in delta; three Richardson levels remove delta^2, delta^4, delta^6
    delta = ctx.mpf(RICHARDSON_DELTA)
    averages = []
    digits = []
    for j in range(4):
        step = delta * 2 ** j
        up, d_up = _reflection_k(ctx, nu + step, u)
        down, d_down = _reflection_k(ctx, nu - step, u)
        averages.append((up + down) / 2)
        digits.append(min(d_up, d_down))
    table = [averages]
    for level in range(1, 4):
        factor = ctx.mpf(4) ** level
        prev = table[-1]
        table.append([(factor * prev[i] - prev[i + 1]) / (factor - 1) for i in range(len(prev) - 1)])
    value = table[3][0]
    truncation = abs(value - table[2][0])
    certified = min(min(digits) - 1, _digits(ctx, truncation / abs(value)))
    return value, int(math.floor(certified))


def oracle_I(p: OrderArg) -> OracleValue:
    '''
    Extended-precision I_nu(u) from the ascending power series.

    Args:
        p (OrderArg): Evaluation point, u <= 1000.

    Returns:
        OracleValue: The value and its certified digit count.

    Raises:
        ConvergenceError: If more than `oracle_max_terms` terms are needed.
        PrecisionLossError: If fewer than `oracle_min_digits` digits survive.
    '''
    _check(p)
    ctx = _context(p.u)
    value, digits = _series_i(ctx, ctx.mpf(p.nu), ctx.mpf(p.u))
    return _certify(OracleValue(value, digits, Kind.I), p)


def oracle_K(p: OrderArg) -> OracleValue:
    '''
    Extended-precision K_nu(u) from the reflection formula (Richardson-extrapolated near integers).

    Raises:
        PrecisionLossError: If cancellation leaves fewer than `oracle_min_digits` digits.
    '''
    _check(p)
    ctx = _context(p.u, extra=8)
    value, digits = _oracle_k_value(ctx, abs(ctx.mpf(p.nu)), ctx.mpf(p.u))
    return _certify(OracleValue(value, digits, Kind.K), p)


def oracle_P(p: OrderArg) -> OracleValue:
    '''Extended-precision I_nu(u) K_nu(u); certified digits are those of the weaker factor less one.'''
    i = oracle_I(p)
    k = oracle_K(p)
    return OracleValue(i.value * k.value, min(i.certified_digits, k.certified_digits) - 1, Kind.P)


def _certify(result: OracleValue, p: OrderArg, minimum: Optional[int] = None) -> OracleValue:
    if minimum is None:
        minimum = get_settings().oracle_min_digits
    if result.certified_digits < minimum:
        raise PrecisionLossError(f"oracle {result.kind.value}_{p.nu}({p.u}) certified only "
                                 f"{result.certified_digits} digits (need {minimum})")
    logger.debug("oracle %s_%s(%s): %d digits", result.kind.value, p.nu, p.u, result.certified_digits)
    return result


def oracle_wronskian(p: OrderArg) -> OracleValue:
    '''u (I_nu K_{nu+1} + I_{nu+1} K_nu) in extended precision; equals 1 to the certified digits.'''
    nxt = p.shifted(1.0)
    i0, i1 = oracle_I(p), oracle_I(nxt)
    k0, k1 = oracle_K(p), oracle_K(nxt)
    value = p.u * (i0.value * k1.value + i1.value * k0.value)
    digits = min(i0.certified_digits, i1.certified_digits, k0.certified_digits, k1.certified_digits) - 1
    return OracleValue(value, digits, Kind.P)


CERTIFY_TOL = 1e-12
WRONSKIAN_TOL = 5e-13
RECURRENCE_TOL = 1e-12


def sample_points(n: int, seed: int, u_min: float = 1e-3) -> List[OrderArg]:
    '''
    n pseudo-random points of the validated window: nu uniform on [window_nu_min, nu_max], u
    log-uniform on [u_min, u_max_unscaled].
    '''
    settings = get_settings()
    rng = np.random.default_rng(seed)
    nus = rng.uniform(settings.window_nu_min, settings.nu_max, n)
    us = np.exp(rng.uniform(math.log(u_min), math.log(settings.u_max_unscaled), n))
    return [OrderArg(float(nu), float(u)) for nu, u in zip(nus, us)]


def _certify_point(p: OrderArg) -> Tuple[List[InequalityVerdict], Optional[dict]]:
    try:
        i_ref, k_ref = oracle_I(p), oracle_K(p)
    except BesselTuranError as exc:
        logger.warning("certify: oracle failed at nu=%s, u=%s: %s", p.nu, p.u, exc)
        undecided = [InequalityVerdict.judge(f"certify.{k}", p, math.nan, math.inf) for k in "IKP"]
        return undecided, {"nu": p.nu, "u": p.u, "source": "oracle", "error": str(exc)}
    p_ref = OracleValue(i_ref.value * k_ref.value, min(i_ref.certified_digits, k_ref.certified_digits) - 1, Kind.P)
    try:
        # scaled values: I_nu underflows at large order and small u, K_nu at large u
        rels = {"I": i_ref.rel_diff_scaled(scaled_i(p.nu, p.u), p.u),
                "K": k_ref.rel_diff_scaled(scaled_k(p.nu, p.u), -p.u),
                "P": p_ref.rel_diff(product(p.nu, p.u)[0])}
        wronskian = abs(wronskian_residual(p.nu, p.u))
        residuals = recurrence_residuals(p.nu, p.u)
    except BesselTuranError as exc:
        logger.warning("certify: evaluation failed at nu=%s, u=%s: %s", p.nu, p.u, exc)
        failed = [InequalityVerdict.judge(f"certify.{k}", p, -math.inf, 0.0) for k in "IKP"]
        return failed, {"nu": p.nu, "u": p.u, "source": "evaluation", "error": str(exc)}
    verdicts = []
    for name, ref in (("I", i_ref), ("K", k_ref), ("P", p_ref)):
        verdicts.append(InequalityVerdict.judge(f"certify.{name}", p, CERTIFY_TOL - rels[name],
                                                10.0 ** -ref.certified_digits))
    verdicts.append(InequalityVerdict.judge("wronskian", p, WRONSKIAN_TOL - wronskian, 0.0, strict=False))
    for name, residual in residuals.items():
        verdicts.append(InequalityVerdict.judge(name, p, RECURRENCE_TOL - residual, 0.0, strict=False))
    return verdicts, None


def certify(points: int = 1000, seed: int = 20240601, workers: Optional[int] = None) -> ScanReport:
    '''
    Compares the double-precision evaluators with the oracle on seeded random points.

    Verdicts per point: "certify.I", "certify.K", "certify.P" (1e-12 minus the relative
    difference), "wronskian" (5e-13 minus the Wronskian residual) and "r1"-"r3" (1e-12 minus each
    recurrence residual). I and K are compared in scaled form, so points where the unscaled values
    leave the double range are certified too.

    Points where the oracle itself cannot certify 30 digits are listed in `details["oracle_failures"]`
    and their three value verdicts are indeterminate. Points where a double-precision evaluator raises
    are listed in `details["evaluation_failures"]` and their three value verdicts fail.
    '''
    start = time.perf_counter()
    sample = sample_points(points, seed)
    report = ScanReport(command="certify", config={"points": points, "seed": seed,
                                                   "tolerances": {"value": CERTIFY_TOL, "wronskian": WRONSKIAN_TOL,
                                                                  "recurrence": RECURRENCE_TOL}})
    failures = {"oracle": [], "evaluation": []}
    for verdicts, failure in map_rows(_certify_point, sample, workers):
        report.extend(verdicts)
        if failure is not None:
            failures[failure.pop("source")].append(failure)
    report.details["oracle_failures"] = failures["oracle"]
    report.details["evaluation_failures"] = failures["evaluation"]
    report.counterexamples = [v.to_dict() for v in report.failures()]
    report.wall_time = time.perf_counter() - start
    return report
