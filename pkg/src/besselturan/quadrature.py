'''
Quadrature.py

Exp-sinh quadrature on (0, inf) and the integral-representation checks built on it:

    gamma ratio:  K_{nu-1}(sqrt u) / (sqrt u K_nu(sqrt u)) = (4/pi^2) int gamma_nu(t) / (u + t^2) dt
    Nicholson:    J_nu^2(u) + Y_nu^2(u) = (8/pi^2) int K_0(2u sinh t) cosh(2 nu t) dt
    phi:          phi_nu(u) = -(4/pi^2) int 2 t^2 gamma_nu(t) / (u^2 + t^2)^2 dt
    phi':         phi'_nu(u) = (32/pi^2) int u t^2 gamma_nu(t) / (u^2 + t^2)^3 dt
    product:      I_nu(u) K_nu(u) = int I_{2nu}(2u sinh t) e^{-2u cosh t} dt

with gamma_nu(t) = 1 / (t (J_nu^2(t) + Y_nu^2(t))).

The substitution t = exp((pi/2) sinh s) maps (0, inf) onto the real line with doubly exponential decay
at both ends; the trapezoid rule in s is refined by halving the step, reusing previous nodes, until
two successive levels agree.
'''
from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass
from enum import Enum
from typing import Callable, List, Optional, Sequence, Union

from besselturan.core import EPS, JY_U_MAX, U_MIN, OrderArg, bessel_modulus, scaled_i, scaled_k
from besselturan.product import product_integral_check
from besselturan.turan import phi_gap
from besselturan.utils.config import get_settings
from besselturan.utils.errors import ConvergenceError, DomainError
from besselturan.utils.report import ScanReport
from besselturan.utils.runner import map_rows
from besselturan.utils.verdicts import InequalityVerdict

logger = logging.getLogger(__name__)

HALF_PI = 0.5 * math.pi
S_MAX = 6.5
H0 = 0.5
MIN_LEVELS = 3
LOG_LIMIT = 700.0
EULER_GAMMA = 0.57721566490153286


class IntegrandId(str, Enum):
    GAMMA_RATIO = "gamma_ratio"
    NICHOLSON = "nicholson"
    PHI = "phi"
    PHI_PRIME = "phi_prime"
    PHI_SPLIT = "phi_split"
    PRODUCT_REP = "product_rep"


@dataclass(frozen=True)
class QuadResult:
    '''
    Attributes:
        value (float): The integral.
        abs_err_est (float): Difference between the last two refinement levels.
        evaluations (int): Integrand evaluations spent.
    '''
    value: float
    abs_err_est: float
    evaluations: int


def gamma_nu(nu: float, t: float) -> float:
    '''
    gamma_nu(t) = 1 / (t (J_nu^2(t) + Y_nu^2(t))).

    Above the J/Y window the Hankel expansion of the modulus is used; gamma_nu tends to pi/2 there.

    Raises:
        DomainError: If nu is outside [0, 10] or t <= 0.
    '''
    if not 0.0 <= nu <= 10.0:
        raise DomainError("nu", nu, "gamma_nu needs nu in [0, 10]")
    if not t > 0:
        raise DomainError("t", t, "gamma_nu needs t > 0")
    if t > JY_U_MAX:
        mu = 4.0 * nu * nu
        x = 1.0 / (t * t)
        # t (J^2 + Y^2) ~ (2/pi) (1 + (mu-1)/8 t^-2 + 3 (mu-1)(mu-9)/128 t^-4)
        series = 1.0 + (mu - 1.0) / 8.0 * x + 3.0 * (mu - 1.0) * (mu - 9.0) / 128.0 * x * x
        return HALF_PI / series
    modulus = bessel_modulus(nu, t)
    if not math.isfinite(modulus):
        return 0.0
    return 1.0 / (t * modulus)


def _k0_small(z: float) -> float:
    # leading terms of K_0 below the core argument floor
    return -math.log(0.5 * z) - EULER_GAMMA


def _scaled_i_small_safe(nu: float, z: float) -> float:
    if z < U_MIN:
        return math.exp(nu * math.log(0.5 * z) - math.lgamma(nu + 1.0)) if nu > 0 else 1.0
    return scaled_i(nu, z).value


@dataclass(frozen=True)
class Integrand:
    '''
    A named integrand on (0, inf).

    Attributes:
        id (IntegrandId): Which representation the integrand belongs to.
        nu (float): Order.
        u (float): Argument of the represented function.
    '''
    id: IntegrandId
    nu: float
    u: float

    def __call__(self, t: float) -> float:
        nu, u = self.nu, self.u
        if self.id is IntegrandId.GAMMA_RATIO:
            return gamma_nu(nu, t) / (u + t * t)
        if self.id is IntegrandId.PHI:
            r = t / (u * u + t * t)
            return 2.0 * r * r * gamma_nu(nu, t)
        if self.id is IntegrandId.PHI_PRIME:
            d = u * u + t * t
            r = t / d
            return u * r * r / d * gamma_nu(nu, t)
        if self.id is IntegrandId.PHI_SPLIT:
            d = u * u + t * t
            g = gamma_nu(nu, t)
            # u gamma / d + u (t^2 - u^2) gamma / d^2
            return u * g / d + u * (1.0 - 2.0 * u * u / d) / d * g
        if self.id is IntegrandId.NICHOLSON:
            if t > LOG_LIMIT:
                return 0.0
            z = 2.0 * u * math.sinh(t)
            if z < U_MIN:
                return _k0_small(z) * math.cosh(2.0 * nu * t)
            # e^{-z} cosh(2 nu t) reassembled in one exponent
            log_weight = -z + 2.0 * nu * t
            if log_weight < -LOG_LIMIT:
                return 0.0
            return scaled_k(0.0, z).value * 0.5 * (math.exp(log_weight) + math.exp(-z - 2.0 * nu * t))
        if self.id is IntegrandId.PRODUCT_REP:
            if t > LOG_LIMIT:
                return 0.0
            z = 2.0 * u * math.sinh(t)
            # I_{2nu}(z) e^{-2u cosh t} = (e^{-z} I_{2nu}(z)) e^{-2u e^{-t}}
            return _scaled_i_small_safe(2.0 * nu, z) * math.exp(-2.0 * u * math.exp(-t))
        raise DomainError("id", self.id, "unknown integrand")


def integrate_semi_infinite(f: Union[Integrand, Callable[[float], float]], tol: Optional[float] = None,
                            max_evaluations: Optional[int] = None) -> QuadResult:
    '''
    Integrates f over (0, inf) with the exp-sinh rule.

    Args:
        f (Callable): Integrand, finite on (0, inf).
        tol (float, optional): Agreement required between successive levels, relative to
            max(1, |value|). Defaults to the configured quadrature tolerance.
        max_evaluations (int, optional): Evaluation cap. Defaults to the configured cap (2^20).

    Returns:
        QuadResult: Value, error estimate and evaluation count.

    Raises:
        DomainError: If tol < 1e-12.
        ConvergenceError: If the cap is reached first; `partial` holds the last QuadResult.
    '''
    settings = get_settings()
    tol = settings.quad_tol if tol is None else tol
    if tol < 1e-12:
        raise DomainError("tol", tol, "quadrature tolerance must be at least 1e-12")
    cap = settings.quad_max_evaluations if max_evaluations is None else max_evaluations

    def weighted(s: float) -> float:
        x = HALF_PI * math.sinh(s)
        t = math.exp(x)
        value = f(t)
        return value * HALF_PI * math.cosh(s) * t if value else 0.0

    h = H0
    n = int(round(S_MAX / h))
    total = sum(weighted(k * h) for k in range(-n, n + 1))
    evaluations = 2 * n + 1
    estimate = h * total
    for level in range(1, 64):
        h *= 0.5
        n *= 2
        if evaluations + n > cap:
            partial = QuadResult(estimate, math.inf, evaluations)
            raise ConvergenceError(f"exp-sinh quadrature reached {evaluations} evaluations", partial=partial)
        total += sum(weighted(k * h) for k in range(-n + 1, n, 2))
        evaluations += n
        previous, estimate = estimate, h * total
        err = abs(estimate - previous)
        if level >= MIN_LEVELS and err <= tol * max(1.0, abs(estimate)):
            logger.debug("quadrature converged at level %d (%d evaluations, err %.2e)", level, evaluations, err)
            return QuadResult(estimate, err + 4 * EPS * abs(estimate), evaluations)
    raise ConvergenceError("exp-sinh quadrature did not converge", partial=QuadResult(estimate, math.inf, evaluations))


def _integrate_with_retry(f: Integrand, tol: float, label: str) -> Optional[QuadResult]:
    cap = get_settings().quad_max_evaluations
    try:
        return integrate_semi_infinite(f, tol, max_evaluations=cap // 2)
    except ConvergenceError:
        logger.warning("%s: slow convergence at nu=%s, u=%s; doubling the evaluation budget", label, f.nu, f.u)
    try:
        return integrate_semi_infinite(f, tol, max_evaluations=cap)
    except ConvergenceError as exc:
        logger.warning("%s: no convergence at nu=%s, u=%s: %s", label, f.nu, f.u, exc)
        return None


def _agreement(label: str, point: OrderArg, lhs: float, lhs_err: float, quad: Optional[QuadResult],
               scale: float, tol: float) -> InequalityVerdict:
    # slack: tolerance minus relative disagreement
    if quad is None:
        return InequalityVerdict.judge(label, point, math.nan, math.inf)
    scale = abs(scale) if scale else 1.0
    combined = (lhs_err + quad.abs_err_est) / scale
    slack = max(tol, combined) - abs(lhs - quad.value) / scale
    return InequalityVerdict.judge(label, point, slack, combined)


def k_ratio_integral_check(nu: float, u: float, tol: float = 1e-8) -> InequalityVerdict:
    '''
    Checks K_{nu-1}(sqrt u) / (sqrt u K_nu(sqrt u)) = (4/pi^2) int gamma_nu(t) dt / (u + t^2).

    Raises:
        DomainError: If nu is outside (0, 10].
    '''
    if not 0.0 < nu <= 10.0:
        raise DomainError("nu", nu, "the gamma ratio formula is checked for nu in (0, 10]")
    root = math.sqrt(u)
    mid, down = scaled_k(nu, root), scaled_k(nu - 1, root)
    lhs = (down / mid) / root
    lhs_err = abs(lhs) * (mid.rel_err + down.rel_err + 2 * EPS)
    quad = _integrate_with_retry(Integrand(IntegrandId.GAMMA_RATIO, nu, u), tol * 0.1, "gamma ratio")
    if quad is not None:
        c = 4.0 / math.pi ** 2
        quad = QuadResult(c * quad.value, c * quad.abs_err_est, quad.evaluations)
    return _agreement("int.gamma_ratio", OrderArg(nu, u), lhs, lhs_err, quad, lhs, tol)


def nicholson_check(nu: float, u: float, tol: float = 1e-8) -> InequalityVerdict:
    '''
    Checks J_nu^2(u) + Y_nu^2(u) = (8/pi^2) int K_0(2u sinh t) cosh(2 nu t) dt, relative to the modulus.

    Hard cases (large nu with small u) get twice the evaluation budget on retry; if they still do not
    converge the verdict is indeterminate.
    '''
    if not 0.0 <= nu <= 5.0:
        raise DomainError("nu", nu, "the Nicholson formula is checked for nu in [0, 5]")
    if not 0.1 <= u <= 10.0:
        raise DomainError("u", u, "the Nicholson formula is checked for u in [0.1, 10]")
    lhs = bessel_modulus(nu, u)
    quad = _integrate_with_retry(Integrand(IntegrandId.NICHOLSON, nu, u), tol * 0.1, "nicholson")
    if quad is not None:
        c = 8.0 / math.pi ** 2
        quad = QuadResult(c * quad.value, c * quad.abs_err_est, quad.evaluations)
    return _agreement("int.nicholson", OrderArg(nu, u), lhs, 1e-12 * lhs, quad, lhs, tol)


def phi_integral_check(nu: float, u: float, tol: float = 1e-8, deriv_tol: float = 1e-6) -> List[InequalityVerdict]:
    '''
    Checks the integral representations of phi_nu(u) and phi'_nu(u).

    Returns three verdicts: the one-term phi formula ("int.phi"), the two-term phi formula
    ("int.phi_split"), and phi' against a centred difference of phi with step u eps^(1/3)
    ("int.phi_prime", differencing-limited tolerance `deriv_tol`).
    '''
    if not 0.0 < nu <= 10.0:
        raise DomainError("nu", nu, "the phi formulas are checked for nu in (0, 10]")
    if not 0.1 <= u <= 10.0:
        raise DomainError("u", u, "the phi formulas are checked for u in [0.1, 10]")
    point = OrderArg(nu, u)
    direct = phi_gap(point)
    c = 4.0 / math.pi ** 2
    verdicts = []

    quad = _integrate_with_retry(Integrand(IntegrandId.PHI, nu, u), tol * 0.1, "phi")
    if quad is not None:
        quad = QuadResult(-c * quad.value, c * quad.abs_err_est, quad.evaluations)
    verdicts.append(_agreement("int.phi", point, direct.value, direct.abs_err, quad, direct.value, tol))

    quad = _integrate_with_retry(Integrand(IntegrandId.PHI_SPLIT, nu, u), tol * 0.1, "phi split")
    if quad is not None:
        quad = QuadResult(-c / u * quad.value, c / u * quad.abs_err_est, quad.evaluations)
    verdicts.append(_agreement("int.phi_split", point, direct.value, direct.abs_err, quad, direct.value, tol))

    step = u * EPS ** (1.0 / 3.0)
    hi, lo = phi_gap(OrderArg(nu, u + step)), phi_gap(OrderArg(nu, u - step))
    derivative = (hi.value - lo.value) / (2.0 * step)
    deriv_err = (hi.abs_err + lo.abs_err) / (2.0 * step)
    quad = _integrate_with_retry(Integrand(IntegrandId.PHI_PRIME, nu, u), tol * 0.1, "phi prime")
    if quad is not None:
        c8 = 32.0 / math.pi ** 2
        quad = QuadResult(c8 * quad.value, c8 * quad.abs_err_est, quad.evaluations)
    verdicts.append(_agreement("int.phi_prime", point, derivative, deriv_err, quad, derivative, deriv_tol))
    return verdicts


def product_integral(nu: float, u: float, tol: float = 1e-10) -> Optional[QuadResult]:
    '''int_0^inf I_{2nu}(2u sinh t) e^{-2u cosh t} dt with the scaled integrand.'''
    return _integrate_with_retry(Integrand(IntegrandId.PRODUCT_REP, nu, u), tol, "product")


def gamma_monotonicity_check(nu_grid: Sequence[float], t_grid: Sequence[float]) -> ScanReport:
    '''gamma_nu(t) strictly decreasing in nu at fixed t, over consecutive grid orders ("gamma.decr").'''
    start = time.perf_counter()
    grid = sorted(set(nu_grid))
    report = ScanReport(command="integral:gamma", config={"nu_grid": list(nu_grid), "t_grid": list(t_grid)})
    for t in t_grid:
        values = [gamma_nu(nu, t) for nu in grid]
        for nu, a, b in zip(grid, values, values[1:]):
            report.extend([InequalityVerdict.judge("gamma.decr", OrderArg(nu, t), a - b, 1e-11 * (a + b))])
    report.counterexamples = [v.to_dict() for v in report.failures()]
    report.wall_time = time.perf_counter() - start
    return report


def integral_suite(nu_grid: Sequence[float], u_grid: Sequence[float], tol: float = 1e-8,
                   workers: Optional[int] = None) -> ScanReport:
    '''
    Every integral-representation check on the grid points inside its window: the gamma ratio
    formula, Nicholson, phi / phi' and the product representation, plus gamma_nu monotonicity in nu.
    '''
    start = time.perf_counter()

    def row(nu: float) -> List[InequalityVerdict]:
        verdicts = []
        for u in u_grid:
            if 0.0 < nu <= 10.0 and math.sqrt(u) <= JY_U_MAX:
                verdicts.append(k_ratio_integral_check(nu, u, tol))
            inside = 0.1 <= u <= 10.0
            if inside and 0.0 <= nu <= 5.0:
                verdicts.append(nicholson_check(nu, u, tol))
                verdicts.append(product_integral_check(OrderArg(nu, u), max(tol, 1e-9)))
            if inside and 0.0 < nu <= 10.0:
                verdicts.extend(phi_integral_check(nu, u, tol))
        return verdicts

    report = ScanReport(command="integral-check", config={"nu_grid": list(nu_grid), "u_grid": list(u_grid),
                                                          "tol": tol})
    for verdicts in map_rows(row, list(nu_grid), workers):
        report.extend(verdicts)
    gamma_orders = [nu for nu in nu_grid if 0.0 <= nu <= 10.0]
    if len(gamma_orders) > 1:
        monotone = gamma_monotonicity_check(gamma_orders, [0.1, 0.5, 1.0, 2.0, 5.0, 10.0])
        report.extend(monotone.verdicts)
    report.counterexamples = [v.to_dict() for v in report.failures()]
    report.wall_time = time.perf_counter() - start
    return report
