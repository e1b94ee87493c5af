'''
Order_props.py

Structure of I_nu(u), K_nu(u) and their combinations as functions of the order at fixed u:
log-convexity and log-concavity scans, the six Turan-type inequalities in the sqrt(nu) scale,
monotonicity of K ratios, and finite-difference checks of complete monotonicity.

Values enter every predicate through their logarithms or through exponentially scaled forms, so a
common factor e^{+-u} cancels and nothing overflows.
'''
from __future__ import annotations

import logging
import math
import time
from enum import Enum
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from besselturan.core import EPS, OrderArg, ScaledValue, scaled_i, scaled_k
from besselturan.utils.config import get_settings
from besselturan.utils.errors import DomainError
from besselturan.utils.grids import open_left
from besselturan.utils.report import ScanReport
from besselturan.utils.runner import map_rows
from besselturan.utils.verdicts import InequalityVerdict, error_budget

logger = logging.getLogger(__name__)

MAX_CM_ORDER = 4


class OrderFunctionKind(str, Enum):
    I_SQRT = "I_sqrt"
    K_SQRT = "K_sqrt"
    KRATIO_SQRT = "Kratio_sqrt"
    P_SQRT = "P_sqrt"
    IOVERK_SQRT = "IoverK_sqrt"
    IOVERK_PLAIN = "IoverK_plain"
    K_PLAIN = "K_plain"
    I_PLAIN = "I_plain"
    P_PLAIN = "P_plain"

    @property
    def properties(self) -> Tuple[str, ...]:
        return _PROPERTIES[self]

    @property
    def sqrt_order(self) -> bool:
        return self.value.endswith("_sqrt")

    @property
    def domain_min(self) -> float:
        '''Open lower end of the order interval on which the property is stated.'''
        if self.sqrt_order:
            return 0.0
        if self is OrderFunctionKind.K_PLAIN:
            return get_settings().nu_min
        return -1.0


_PROPERTIES: Dict[OrderFunctionKind, Tuple[str, ...]] = {
    OrderFunctionKind.I_SQRT: ("log-convex", "completely-monotonic"),
    OrderFunctionKind.K_SQRT: ("log-concave",),
    OrderFunctionKind.KRATIO_SQRT: ("decreasing", "completely-monotonic"),
    OrderFunctionKind.P_SQRT: ("log-convex", "completely-monotonic"),
    OrderFunctionKind.IOVERK_SQRT: ("log-convex",),
    OrderFunctionKind.IOVERK_PLAIN: ("log-concave",),
    OrderFunctionKind.K_PLAIN: ("log-convex",),
    OrderFunctionKind.I_PLAIN: ("log-concave",),
    OrderFunctionKind.P_PLAIN: ("conjectured log-convex",),
}


def _log(sv: ScaledValue) -> Tuple[float, float]:
    return sv.log_abs(), sv.rel_err


def log_value(kind: OrderFunctionKind, nu: float, u: float) -> Tuple[float, float]:
    '''
    log f(nu) up to an additive term that depends on u only, and its absolute error.

    Raises:
        DomainError: For KRATIO_SQRT, which is not a log-convexity kind.
    '''
    order = math.sqrt(nu) if kind.sqrt_order else nu
    if kind in (OrderFunctionKind.I_SQRT, OrderFunctionKind.I_PLAIN):
        return _log(scaled_i(order, u))
    if kind in (OrderFunctionKind.K_SQRT, OrderFunctionKind.K_PLAIN):
        return _log(scaled_k(order, u))
    if kind is OrderFunctionKind.KRATIO_SQRT:
        raise DomainError("kind", kind.value, "the sqrt-order K ratio is checked by kratio_monotone_check")
    li, ei = _log(scaled_i(order, u))
    lk, ek = _log(scaled_k(order, u))
    if kind in (OrderFunctionKind.P_SQRT, OrderFunctionKind.P_PLAIN):
        return li + lk, ei + ek
    return li - lk, ei + ek


def _midpoint(values: Sequence[Tuple[float, float]]) -> Tuple[float, float]:
    # log f(nu) + log f(nu + 2h) - 2 log f(nu + h)
    (a, ea), (b, eb), (c, ec) = values
    slack = a + c - 2.0 * b
    return slack, ea + ec + 2 * eb + EPS * (abs(a) + abs(c) + 2 * abs(b))


def _check_grid(kind: OrderFunctionKind, nu_grid: Sequence[float], reach: float) -> None:
    settings = get_settings()
    for nu in nu_grid:
        if nu <= kind.domain_min:
            raise DomainError("nu_grid", nu, f"{kind.value} is stated for nu > {kind.domain_min:g}")
        top = math.sqrt(nu + reach) if kind.sqrt_order else nu + reach
        if top > settings.nu_max:
            raise DomainError("nu_grid", nu, f"nu + {reach:g} leaves the evaluation window")


def logconvexity_check(kind: OrderFunctionKind, nu_grid: Sequence[float], h: float, u: float,
                       workers: Optional[int] = None) -> ScanReport:
    '''
    Midpoint predicate f(nu) f(nu + 2h) >= f(nu + h)^2 (log-convex kinds) or <= (log-concave kinds)
    at every grid order, in logarithmic form.

    The conjectured kind P_plain is scanned the same way but the report is not asserted.

    Raises:
        DomainError: If h <= 0, the grid leaves the kind's domain, or the kind is KRATIO_SQRT.
    '''
    if kind is OrderFunctionKind.KRATIO_SQRT:
        raise DomainError("kind", kind.value, "the sqrt-order K ratio is checked by kratio_monotone_check")
    if h <= 0:
        raise DomainError("h", h, "step must be positive")
    _check_grid(kind, nu_grid, 2 * h)
    start = time.perf_counter()
    sign = -1.0 if "log-concave" in kind.properties else 1.0
    label = f"{kind.value}.{kind.properties[0].split()[-1]}"

    def row(nu: float) -> InequalityVerdict:
        slack, err = _midpoint([log_value(kind, nu + j * h, u) for j in range(3)])
        return InequalityVerdict.judge(label, OrderArg(nu, u), sign * slack, err, strict=False)

    report = ScanReport(command=f"logconvexity:{kind.value}",
                        config={"kind": kind.value, "nu_grid": list(nu_grid), "h": h, "u": u},
                        asserted=kind is not OrderFunctionKind.P_PLAIN)
    report.extend(map_rows(row, list(nu_grid), workers))
    report.counterexamples = [v.to_dict() for v in report.failures()]
    report.wall_time = time.perf_counter() - start
    return report


def _lk(order: float, u: float) -> Tuple[float, float]:
    return _log(scaled_k(order, u))


def _sqrt_turan_point(nu: float, u: float) -> Tuple[List[InequalityVerdict], bool]:
    p = OrderArg(nu, u)
    r0, r1 = math.sqrt(nu), math.sqrt(nu + 1.0)
    verdicts = []
    for kind, label, sign in ((OrderFunctionKind.I_SQRT, "sqrt.I", 1.0),
                              (OrderFunctionKind.K_SQRT, "sqrt.K", -1.0),
                              (OrderFunctionKind.P_SQRT, "sqrt.P", 1.0),
                              (OrderFunctionKind.IOVERK_SQRT, "sqrt.IoverK", 1.0)):
        slack, err = _midpoint([log_value(kind, nu + j, u) for j in range(3)])
        verdicts.append(InequalityVerdict.judge(label, p, sign * slack, err, strict=False))

    # K_{r1} K_{r0+1} <= K_{r0} K_{r1+1}
    (a, ea), (b, eb), (c, ec), (d, ed) = _lk(r0, u), _lk(r1 + 1.0, u), _lk(r1, u), _lk(r0 + 1.0, u)
    slack = a + b - c - d
    err = ea + eb + ec + ed + EPS * (abs(a) + abs(b) + abs(c) + abs(d))
    verdicts.insert(2, InequalityVerdict.judge("sqrt.Kratio", p, slack, err, strict=False))

    # I/K in the plain order is log-concave; the printed form of this inequality has the opposite sign
    slack, err = _midpoint([log_value(OrderFunctionKind.IOVERK_PLAIN, nu + j, u) for j in range(3)])
    verdicts.append(InequalityVerdict.judge("sqrt.IoverK_plain", p, -slack, err, strict=False))
    return verdicts, slack < -error_budget(err)


def sqrt_turan_inequalities(u: float, nu_grid: Sequence[float], workers: Optional[int] = None) -> ScanReport:
    '''
    The six Turan-type inequalities that follow from log-convexity in the order, for nu > 0:

        sqrt.I             I_{sqrt(nu+1)}^2 <= I_{sqrt nu} I_{sqrt(nu+2)}
        sqrt.K             K_{sqrt(nu+1)}^2 >= K_{sqrt nu} K_{sqrt(nu+2)}
        sqrt.Kratio        K_{sqrt(nu+1)} K_{sqrt nu + 1} <= K_{sqrt nu} K_{sqrt(nu+1) + 1}
        sqrt.P             (I K)_{sqrt(nu+1)}^2 <= (I K)_{sqrt nu} (I K)_{sqrt(nu+2)}
        sqrt.IoverK        (I/K)_{sqrt(nu+1)}^2 <= (I/K)_{sqrt nu} (I/K)_{sqrt(nu+2)}
        sqrt.IoverK_plain  (I/K)_{nu+1}^2 >= (I/K)_nu (I/K)_{nu+2}

    The last one is checked in the log-concave direction; `details["printed_direction_fails"]`
    counts the grid points where the reversed inequality is refuted.

    Raises:
        DomainError: If a grid order is not positive or nu + 2 leaves the window.
    '''
    _check_grid(OrderFunctionKind.I_SQRT, nu_grid, 2.0)
    _check_grid(OrderFunctionKind.IOVERK_PLAIN, nu_grid, 2.0)
    start = time.perf_counter()
    report = ScanReport(command="sqrt-turan", config={"u": u, "nu_grid": list(nu_grid)})
    reversed_fails = 0
    for verdicts, printed_fails in map_rows(lambda nu: _sqrt_turan_point(nu, u), list(nu_grid), workers):
        report.extend(verdicts)
        reversed_fails += printed_fails
    report.details["printed_direction_fails"] = reversed_fails
    report.counterexamples = [v.to_dict() for v in report.failures()]
    report.wall_time = time.perf_counter() - start
    return report


def kratio_monotone_check(u: float, a: float, nu_grid: Sequence[float]) -> ScanReport:
    '''
    Two monotonicity streams over consecutive grid orders nu < nu':

        "kratio.shift"  K_{nu+a}(u)/K_nu(u) strictly increasing in nu on the reals
        "kratio.sqrt"   K_{sqrt nu}(u)/K_{sqrt nu + 1}(u) strictly decreasing on nu > 0

    Raises:
        DomainError: If a <= 0.
    '''
    if a <= 0:
        raise DomainError("a", a, "shift must be positive")
    start = time.perf_counter()
    grid = sorted(set(nu_grid))
    report = ScanReport(command="kratio", config={"u": u, "a": a, "nu_grid": list(nu_grid)})

    def shift_ratio(nu: float) -> Tuple[float, float]:
        top, bottom = scaled_k(nu + a, u), scaled_k(nu, u)
        r = top / bottom
        return r, abs(r) * (top.rel_err + bottom.rel_err + EPS)

    def sqrt_ratio(nu: float) -> Tuple[float, float]:
        s = math.sqrt(nu)
        top, bottom = scaled_k(s, u), scaled_k(s + 1.0, u)
        r = top / bottom
        return r, abs(r) * (top.rel_err + bottom.rel_err + EPS)

    shifted = [shift_ratio(nu) for nu in grid]
    for nu, (r0, e0), (r1, e1) in zip(grid, shifted, shifted[1:]):
        report.extend([InequalityVerdict.judge("kratio.shift", OrderArg(nu, u), r1 - r0, e0 + e1)])
    positive = open_left(grid, 0.0)
    ratios = [sqrt_ratio(nu) for nu in positive]
    for nu, (r0, e0), (r1, e1) in zip(positive, ratios, ratios[1:]):
        report.extend([InequalityVerdict.judge("kratio.sqrt", OrderArg(nu, u), r0 - r1, e0 + e1)])
    report.counterexamples = [v.to_dict() for v in report.failures()]
    report.wall_time = time.perf_counter() - start
    return report


class CMFact(str, Enum):
    '''Functions of nu (after the sqrt substitution) asserted to be completely monotonic.'''
    A = "a"  # I_{sqrt nu}(u)
    B = "b"  # 1 / K_{sqrt nu}(u)
    C = "c"  # K_{sqrt nu + alpha}(u) / K_{sqrt nu + alpha + n}(u)
    D = "d"  # I_{sqrt nu}(u) K_{sqrt nu}(v), v >= u


def _cm_function(fact: CMFact, u: float, v: float, alpha: float, n: int) -> Callable[[float], Tuple[float, float]]:
    # each value carries a common factor in e^{u}, e^{v} only, which does not change difference signs
    def f(nu: float) -> Tuple[float, float]:
        s = math.sqrt(nu)
        if fact is CMFact.A:
            sv = scaled_i(s, u)
            return sv.value, abs(sv.value) * sv.rel_err
        if fact is CMFact.B:
            sv = scaled_k(s, u)
            x = 1.0 / sv.value
            return x, x * (sv.rel_err + EPS)
        if fact is CMFact.C:
            top, bottom = scaled_k(s + alpha, u), scaled_k(s + alpha + n, u)
            x = top / bottom
            return x, x * (top.rel_err + bottom.rel_err + EPS)
        sv = scaled_i(s, u) * scaled_k(s, v)
        x = sv.value
        return x, abs(x) * sv.rel_err
    return f


def cm_check(fact: CMFact, nu_grid: Sequence[float], max_k: int, h: float, u: float, v: Optional[float] = None,
             alpha: float = 0.0, n: int = 1, workers: Optional[int] = None) -> ScanReport:
    '''
    Sign-alternating forward differences (-1)^k Delta_h^k f(nu) >= 0 for k = 0..max_k.

    The noise floor of each difference is the binomially weighted sum of the value errors; inside it
    the non-strict verdict counts as holding.

    Args:
        fact (CMFact): Which function of nu.
        nu_grid (Sequence[float]): Orders, nu >= 0 for facts a-c and nu > 0 for d.
        max_k (int): Highest difference order, at most 4.
        h (float): Difference step.
        u (float): Argument.
        v (float, optional): Second argument of fact d, v >= u. Defaults to u.
        alpha (float): Shift of fact c, alpha >= 0.
        n (int): Order gap of fact c, n >= 1.

    Raises:
        DomainError: On an invalid parameter.
    '''
    if not 0 <= max_k <= MAX_CM_ORDER:
        raise DomainError("max_k", max_k, f"must lie in [0, {MAX_CM_ORDER}]")
    if h <= 0:
        raise DomainError("h", h, "step must be positive")
    v = u if v is None else v
    if fact is CMFact.D and v < u:
        raise DomainError("v", v, "fact d needs v >= u")
    if fact is CMFact.C and (alpha < 0 or n < 1):
        raise DomainError("alpha/n", (alpha, n), "fact c needs alpha >= 0 and n >= 1")
    lowest = min(nu_grid) if nu_grid else 0.0
    if lowest < 0 or (fact is CMFact.D and lowest <= 0):
        raise DomainError("nu_grid", lowest, "orders must be nonnegative (positive for fact d)")
    start = time.perf_counter()
    f = _cm_function(fact, u, v, alpha, n)
    label = f"cm.{fact.value}"

    def row(nu: float) -> List[InequalityVerdict]:
        values = [f(nu + j * h) for j in range(max_k + 1)]
        verdicts = []
        for k in range(max_k + 1):
            delta = sum((-1) ** (k - j) * math.comb(k, j) * values[j][0] for j in range(k + 1))
            noise = sum(math.comb(k, j) * (values[j][1] + EPS * abs(values[j][0])) for j in range(k + 1))
            verdicts.append(InequalityVerdict.judge(f"{label}.k{k}", OrderArg(nu, u), (-1) ** k * delta, noise,
                                                    strict=False))
        return verdicts

    report = ScanReport(command=f"cm:{fact.value}",
                        config={"fact": fact.value, "nu_grid": list(nu_grid), "max_k": max_k, "h": h, "u": u,
                                "v": v, "alpha": alpha, "n": n})
    for verdicts in map_rows(row, list(nu_grid), workers):
        report.extend(verdicts)
    report.counterexamples = [v.to_dict() for v in report.failures()]
    report.wall_time = time.perf_counter() - start
    return report


def order_suite(u_values: Sequence[float], nu_grid: Sequence[float], h: float = 0.25, max_k: int = MAX_CM_ORDER,
                workers: Optional[int] = None) -> ScanReport:
    '''
    Everything order-scan runs, merged: the six sqrt-order Turan inequalities, order log-convexity of K on the
    reals and log-concavity of I on (-1, inf), the K ratio streams and facts a-d.
    '''
    settings = get_settings()
    positive = [nu for nu in nu_grid if 0 < nu <= settings.nu_max - 2.0]
    k_grid = [nu for nu in nu_grid if settings.nu_min < nu <= settings.nu_max - 2 * h]
    i_grid = open_left(k_grid, -1.0)
    reports = []
    for u in u_values:
        reports.append(sqrt_turan_inequalities(u, positive, workers))
        reports.append(logconvexity_check(OrderFunctionKind.K_PLAIN, k_grid, h, u, workers))
        reports.append(logconvexity_check(OrderFunctionKind.I_PLAIN, i_grid, h, u, workers))
        reports.append(kratio_monotone_check(u, 1.0, nu_grid))
        for fact in CMFact:
            reports.append(cm_check(fact, positive, max_k, h, u, workers=workers))
    merged = ScanReport.merge("order-scan", reports, {"u": list(u_values), "nu_grid": list(nu_grid), "h": h,
                                                     "max_k": max_k})
    merged.details = {"printed_direction_fails": sum(r.details.get("printed_direction_fails", 0) for r in reports)}
    merged.counterexamples = [v.to_dict() for v in merged.failures()]
    return merged
