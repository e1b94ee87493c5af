'''
Product.py

The product P_nu(u) = I_nu(u) K_nu(u): evaluation, its u-derivatives through the order recurrences

    2 nu P'_nu  = u (P_{nu+1} - P_{nu-1})                                          (h5)
    2 nu P''_nu = 4 nu P_nu - (2nu - 1) P_{nu-1} - (2nu + 1) P_{nu+1}              (h6)

the integer-order chain, shape checks in u, and the exploratory scans in the order: the midpoint inequality
2 P_nu <= P_{nu-1} + P_{nu+1} (h2), convexity of the integer chain and log-convexity.

The midpoint inequality and the chain convexity are reported, never asserted. For nu well below u the
product behaves like 1/(2 sqrt(u^2 + nu^2)), which is concave in the order; at nu = 1/2, u = 1 the (h2)
slack is 3.5 e^{-2} - 1/2 < 0.
'''
from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass, replace
from typing import List, Optional, Sequence, Tuple

from besselturan.core import EPS, OrderArg, log_derivative_i, log_derivative_k, scaled_i, scaled_k
from besselturan.utils.errors import BesselTuranError, DomainError
from besselturan.utils.grids import open_left
from besselturan.utils.report import ScanReport
from besselturan.utils.runner import map_rows
from besselturan.utils.verdicts import InequalityVerdict, Outcome

logger = logging.getLogger(__name__)

# recurrence-based derivative paths divide by 2 nu
NU_ZERO_EXCLUSION = 1.0 / 16.0
CONJECTURE_STEPS = (1.0, 0.5, 0.125, 0.03125)
HALF_ORDER_TOL = 1e-13


@dataclass(frozen=True)
class ProductValue:
    '''
    Attributes:
        nu (float): Order.
        u (float): Argument.
        p (float): P_nu(u).
        dp_du (float, optional): P'_nu(u) when computed.
        d2p_du2 (float, optional): P''_nu(u) when computed.
        abs_err (float): Absolute error estimate of `p`.
    '''
    nu: float
    u: float
    p: float
    dp_du: Optional[float] = None
    d2p_du2: Optional[float] = None
    abs_err: float = 0.0


def product(nu: float, u: float) -> Tuple[float, float]:
    '''P_nu(u) from scaled factors, so e^{u} and e^{-u} cancel exactly, with its error estimate.'''
    value = scaled_i(nu, u) * scaled_k(nu, u)
    p = value.value
    return p, abs(p) * value.rel_err


def eval_P(p: OrderArg) -> ProductValue:
    '''Evaluates P_nu(u); derivative fields are left unset.'''
    value, err = product(p.nu, p.u)
    return ProductValue(p.nu, p.u, value, abs_err=err)


def direct_derivative(p: OrderArg) -> Tuple[float, float]:
    '''P'_nu(u) = P (u I'/I + u K'/K) / u from the log-derivatives, with an error estimate.'''
    value, err = product(p.nu, p.u)
    xi, ei = log_derivative_i(p.nu, p.u)
    xk, ek = log_derivative_k(p.nu, p.u)
    d = value * (xi + xk) / p.u
    d_err = abs(value) * (ei + ek + 2 * EPS * (abs(xi) + abs(xk))) / p.u + abs(d) * err / abs(value)
    return d, d_err


def _require_away_from_zero(p: OrderArg) -> None:
    if abs(p.nu) < NU_ZERO_EXCLUSION:
        raise DomainError("nu", p.nu, f"recurrence derivatives need |nu| >= {NU_ZERO_EXCLUSION}; "
                                      "use direct_derivative near nu = 0")


def _h5(nu: float, u: float) -> Tuple[float, float]:
    up, e_up = product(nu + 1, u)
    down, e_down = product(nu - 1, u)
    value = u * (up - down) / (2.0 * nu)
    return value, u * (e_up + e_down + EPS * (abs(up) + abs(down))) / abs(2.0 * nu)


def dP_via_h5(p: OrderArg) -> ProductValue:
    '''
    P'_nu(u) = u (P_{nu+1} - P_{nu-1}) / (2 nu).

    Raises:
        DomainError: If |nu| < 1/16.
    '''
    _require_away_from_zero(p)
    base = eval_P(p)
    d, _ = _h5(p.nu, p.u)
    return replace(base, dp_du=d)


def h5_residual(p: OrderArg) -> float:
    '''|2 nu P' - u (P_{nu+1} - P_{nu-1})| / |2 nu P'| with P' from the log-derivatives.'''
    _require_away_from_zero(p)
    direct, _ = direct_derivative(p)
    via, _ = _h5(p.nu, p.u)
    return abs(direct - via) / abs(direct)


def _h6(nu: float, u: float) -> Tuple[float, float]:
    mid, e_mid = product(nu, u)
    up, e_up = product(nu + 1, u)
    down, e_down = product(nu - 1, u)
    terms = (4.0 * nu * mid, (2.0 * nu - 1.0) * down, (2.0 * nu + 1.0) * up)
    value = (terms[0] - terms[1] - terms[2]) / (2.0 * nu)
    err = (4.0 * abs(nu) * e_mid + abs(2.0 * nu - 1.0) * e_down + abs(2.0 * nu + 1.0) * e_up
           + 2 * EPS * sum(abs(t) for t in terms)) / abs(2.0 * nu)
    return value, err


def d2P_via_h6(p: OrderArg) -> ProductValue:
    '''
    P''_nu(u) from (h6), together with the (h5) first derivative.

    Raises:
        DomainError: If |nu| < 1/16.
    '''
    _require_away_from_zero(p)
    return replace(dP_via_h5(p), d2p_du2=_h6(p.nu, p.u)[0])


def h6_difference_check(p: OrderArg) -> float:
    '''Relative disagreement of (h6) with a centred difference of the (h5) derivative, step u eps^(1/4).'''
    _require_away_from_zero(p)
    step = p.u * EPS ** 0.25
    hi, _ = _h5(p.nu, p.u + step)
    lo, _ = _h5(p.nu, p.u - step)
    fd = (hi - lo) / (2.0 * step)
    formula, _ = _h6(p.nu, p.u)
    return abs(fd - formula) / max(abs(formula), abs(fd))


def check_h2(p: OrderArg, exploratory: bool = False) -> InequalityVerdict:
    '''
    (h2): P_{nu-1} + P_{nu+1} - 2 P_nu >= 0.

    Args:
        p (OrderArg): Evaluation point.
        exploratory (bool): Allow orders below 1/2, where the inequality is not even stated.

    Raises:
        DomainError: If nu < 1/2 and not exploratory.
    '''
    if p.nu < 0.5 and not exploratory:
        raise DomainError("nu", p.nu, "(h2) is stated for nu >= 1/2")
    mid, e_mid = product(p.nu, p.u)
    up, e_up = product(p.nu + 1, p.u)
    down, e_down = product(p.nu - 1, p.u)
    slack = down + up - 2.0 * mid
    err = e_down + e_up + 2 * e_mid + 2 * EPS * (abs(down) + abs(up) + 2 * abs(mid))
    return InequalityVerdict.judge("h2", p, slack, err, strict=False)


def _finish(report: ScanReport, start: float) -> ScanReport:
    report.counterexamples = [v.to_dict() for v in report.failures()]
    if report.counterexamples and not report.asserted:
        logger.info("%s: %d exploratory failures", report.command, len(report.counterexamples))
    report.wall_time = time.perf_counter() - start
    return report


def _chain(u: float, n_max: int) -> List[Tuple[float, float]]:
    if n_max < 2:
        raise DomainError("n_max", n_max, "must be at least 2")
    return [product(float(n), u) for n in range(n_max + 1)]


def sequence_scan(u: float, n_max: int) -> ScanReport:
    '''
    The integer-order chain P_0 > P_1 > ... > P_{n_max} ("h1").

    Raises:
        DomainError: If n_max < 2 or u <= 0.
    '''
    start = time.perf_counter()
    values = _chain(u, n_max)
    report = ScanReport(command="product:sequence", config={"u": u, "n_max": n_max})
    for n in range(n_max):
        (a, ea), (b, eb) = values[n], values[n + 1]
        report.extend([InequalityVerdict.judge("h1", OrderArg(float(n), u), a - b, ea + eb + EPS * a)])
    return _finish(report, start)


def chain_convexity_scan(u: float, n_max: int) -> ScanReport:
    '''
    Discrete convexity of the integer chain, P_{n-1} + P_{n+1} >= 2 P_n for n = 1..n_max-1 ("h1.convex").

    Exploratory: it holds for u of order one and fails once u is large against n (slack near
    -1/(2u^3) at n = 1).
    '''
    start = time.perf_counter()
    values = _chain(u, n_max)
    report = ScanReport(command="product:chain-convexity", config={"u": u, "n_max": n_max}, asserted=False)
    for n in range(1, n_max):
        (a, ea), (b, eb), (c, ec) = values[n - 1], values[n], values[n + 1]
        slack = a + c - 2.0 * b
        err = ea + 2 * eb + ec + 2 * EPS * (a + 2 * b + c)
        report.extend([InequalityVerdict.judge("h1.convex", OrderArg(float(n), u), slack, err, strict=False)])
    return _finish(report, start)


def order_monotonicity_scan(u: float, nu_grid: Sequence[float]) -> ScanReport:
    '''
    P_nu(u) > P_nu'(u) for consecutive distinct grid orders nu < nu' ("P.order").

    Raises:
        DomainError: If the grid reaches below 0.
    '''
    grid = sorted(set(nu_grid))
    if grid and grid[0] < 0:
        raise DomainError("nu_grid", grid[0], "order monotonicity is claimed on [0, inf)")
    start = time.perf_counter()
    report = ScanReport(command="product:order", config={"u": u, "nu_grid": list(nu_grid)})
    values = [product(nu, u) for nu in grid]
    for (nu, (a, ea)), (b, eb) in zip(zip(grid, values), values[1:]):
        report.extend([InequalityVerdict.judge("P.order", OrderArg(nu, u), a - b, ea + eb + EPS * a)])
    return _finish(report, start)


def u_shape_checks(nu: float, u_grid: Sequence[float]) -> ScanReport:
    '''
    Shape of P_nu in u on a sorted grid.

    "P.decr":      P strictly decreasing (nu > -1).
    "cdf.incr":    2uP strictly increasing (nu >= 1/2).
    "cdf.range":   0 < 2uP < 1 (nu >= 1/2).
    "uP.concave":  slopes of uP between consecutive grid points do not increase (nu >= 1/2).
    "h5.sign":     P_{nu-1} - P_{nu+1} > 0, the sign (h5) gives P' for nu > 1.
    '''
    if nu <= -1:
        raise DomainError("nu", nu, "u-shape checks need nu > -1")
    start = time.perf_counter()
    grid = sorted(set(u_grid))
    report = ScanReport(command="product:shape", config={"nu": nu, "u_grid": list(u_grid)})
    values = [product(nu, u) for u in grid]
    for (u, (a, ea)), (b, eb) in zip(zip(grid, values), values[1:]):
        report.extend([InequalityVerdict.judge("P.decr", OrderArg(nu, u), a - b, ea + eb + EPS * abs(a))])
    if nu >= 0.5:
        cdf = [(2.0 * u * p, 2.0 * u * e + 2 * EPS * u * abs(p)) for u, (p, e) in zip(grid, values)]
        for (u, (f, ef)), (g, eg) in zip(zip(grid, cdf), cdf[1:]):
            report.extend([InequalityVerdict.judge("cdf.incr", OrderArg(nu, u), g - f, ef + eg)])
        for u, (f, ef) in zip(grid, cdf):
            report.extend([InequalityVerdict.judge("cdf.range", OrderArg(nu, u), min(f, 1.0 - f), ef + EPS)])
        g_vals = [(u * p, u * e) for u, (p, e) in zip(grid, values)]
        for i in range(1, len(grid) - 1):
            (u0, u1, u2) = grid[i - 1], grid[i], grid[i + 1]
            (g0, e0), (g1, e1), (g2, e2) = g_vals[i - 1], g_vals[i], g_vals[i + 1]
            left = (g1 - g0) / (u1 - u0)
            right = (g2 - g1) / (u2 - u1)
            err = (e0 + e1) / (u1 - u0) + (e1 + e2) / (u2 - u1)
            report.extend([InequalityVerdict.judge("uP.concave", OrderArg(nu, u1), left - right, err, strict=False)])
    if nu > 1:
        for u in grid:
            up, e_up = product(nu + 1, u)
            down, e_down = product(nu - 1, u)
            report.extend([InequalityVerdict.judge("h5.sign", OrderArg(nu, u), down - up, e_up + e_down)])
    return _finish(report, start)


def half_order_identity_check(u_grid: Sequence[float], tol: float = HALF_ORDER_TOL) -> ScanReport:
    '''2u P_{1/2}(u) against 1 - e^{-2u}; slack is tol minus the relative difference.'''
    start = time.perf_counter()
    report = ScanReport(command="product:half-order", config={"u_grid": list(u_grid), "tol": tol})
    for u in u_grid:
        p, err = product(0.5, u)
        exact = -math.expm1(-2.0 * u)
        rel = abs(2.0 * u * p - exact) / exact
        report.extend([InequalityVerdict.judge("half_order", OrderArg(0.5, u), tol - rel, 2.0 * u * err / exact)])
    return _finish(report, start)


def product_integral_check(p: OrderArg, tol: float = 1e-9) -> InequalityVerdict:
    '''
    P_nu(u) against int_0^inf I_{2nu}(2u sinh t) e^{-2u cosh t} dt, relative to P.

    Raises:
        DomainError: Outside nu in [0, 5], u in [0.1, 10], or for tol below 1e-9.
    '''
    if tol < 1e-9:
        raise DomainError("tol", tol, "must be at least 1e-9")
    from besselturan.quadrature import product_integral

    if not 0.0 <= p.nu <= 5.0:
        raise DomainError("nu", p.nu, "the product integral is checked for nu in [0, 5]")
    if not 0.1 <= p.u <= 10.0:
        raise DomainError("u", p.u, "the product integral is checked for u in [0.1, 10]")
    value, err = product(p.nu, p.u)
    quad = product_integral(p.nu, p.u, tol * 0.1)
    if quad is None:
        return InequalityVerdict.judge("int.product", p, math.nan, math.inf)
    combined = (err + quad.abs_err_est) / value
    slack = max(tol, combined) - abs(value - quad.value) / value
    return InequalityVerdict.judge("int.product", p, slack, combined)


def _midpoint_slack(nu: float, h: float, u: float) -> Tuple[float, float]:
    a, ea = product(nu, u)
    b, eb = product(nu + h, u)
    c, ec = product(nu + 2 * h, u)
    slack = a * c - b * b
    err = ea * abs(c) + ec * abs(a) + 2 * eb * abs(b) + 2 * EPS * (abs(a * c) + b * b)
    return slack, err


def _oracle_slack(nu: float, h: float, u: float) -> Optional[float]:
    from besselturan.oracle import oracle_P

    try:
        a, b, c = (oracle_P(OrderArg(x, u)).value for x in (nu, nu + h, nu + 2 * h))
    except BesselTuranError as exc:
        logger.warning("oracle recomputation failed at nu=%s, h=%s, u=%s: %s", nu, h, u, exc)
        return None
    return float(a * c - b * b)


def _persists(nu: float, h: float, u: float, steps: Sequence[float]) -> bool:
    # same midpoint, every smaller step in the schedule
    centre = nu + h
    for finer in steps:
        if finer >= h:
            continue
        slack, err = _midpoint_slack(centre - finer, finer, u)
        if InequalityVerdict.judge("conj", OrderArg(centre, u), slack, err, strict=False).outcome is not Outcome.FAILS:
            return False
    return True


def conjecture_scan(u_grid: Sequence[float], nu_grid: Sequence[float],
                    h_values: Sequence[float] = CONJECTURE_STEPS, workers: Optional[int] = None) -> ScanReport:
    '''
    Report-only scan of discrete log-convexity of nu -> P_nu(u) on (-1, inf):
    P_nu P_{nu+2h} >= P_{nu+h}^2 at every grid point and step h.

    A failure becomes a counterexample candidate only if it persists at every smaller step around the
    same midpoint and the oracle recomputation agrees on the sign; candidates carry the oracle slack.
    The report is never asserted.
    '''
    start = time.perf_counter()
    steps = sorted(h_values, reverse=True)
    rows = open_left(nu_grid, -1.0)

    def row(nu: float):
        verdicts, candidates = [], []
        for h in steps:
            for u in u_grid:
                slack, err = _midpoint_slack(nu, h, u)
                v = InequalityVerdict.judge(f"conj.h={h:g}", OrderArg(nu, u), slack, err, strict=False)
                verdicts.append(v)
                if v.outcome is not Outcome.FAILS:
                    continue
                persisted = _persists(nu, h, u, steps)
                oracle_slack = _oracle_slack(nu, h, u) if persisted else None
                if persisted and oracle_slack is not None and oracle_slack < 0:
                    candidates.append({"nu": nu, "u": u, "h": h, "slack": slack, "oracle_slack": oracle_slack})
        return verdicts, candidates

    report = ScanReport(command="conjecture",
                        config={"u_grid": list(u_grid), "nu_grid": list(nu_grid), "h_values": list(steps)},
                        asserted=False)
    for verdicts, candidates in map_rows(row, rows, workers):
        report.extend(verdicts)
        report.counterexamples.extend(candidates)
    for c in report.counterexamples:
        logger.warning("conjecture candidate counterexample: nu=%s h=%s u=%s oracle slack %.3e",
                       c["nu"], c["h"], c["u"], c["oracle_slack"])
    report.details["candidates"] = len(report.counterexamples)
    report.wall_time = time.perf_counter() - start
    return report


def recurrence_scan(nu_grid: Sequence[float], u_grid: Sequence[float], h5_tol: float = 1e-10,
                    h6_tol: float = 1e-6, workers: Optional[int] = None) -> ScanReport:
    '''
    (h5) and (h6) against independent derivatives, orders with |nu| < 1/16 skipped:

        "h5.residual"  h5_tol minus the (h5) relative residual
        "h6.fd"        h6_tol minus the (h6) / centred-difference disagreement
        "h6.concave"   -(u P'' + 2 P') >= 0, the concavity of uP, for nu >= 1/2
    '''
    start = time.perf_counter()
    rows = [nu for nu in nu_grid if abs(nu) >= NU_ZERO_EXCLUSION]

    def row(nu: float) -> List[InequalityVerdict]:
        verdicts = []
        for u in u_grid:
            p = OrderArg(nu, u)
            verdicts.append(InequalityVerdict.judge("h5.residual", p, h5_tol - h5_residual(p), EPS))
            verdicts.append(InequalityVerdict.judge("h6.fd", p, h6_tol - h6_difference_check(p), EPS))
            if nu >= 0.5:
                d1, e1 = _h5(nu, u)
                d2, e2 = _h6(nu, u)
                g2 = -(u * d2 + 2.0 * d1)
                err = u * e2 + 2 * e1 + EPS * (u * abs(d2) + 2 * abs(d1))
                verdicts.append(InequalityVerdict.judge("h6.concave", p, g2, err, strict=False))
        return verdicts

    report = ScanReport(command="product:recurrences",
                        config={"nu_grid": list(nu_grid), "u_grid": list(u_grid), "h5_tol": h5_tol, "h6_tol": h6_tol})
    for verdicts in map_rows(row, rows, workers):
        report.extend(verdicts)
    report.details["skipped_nu"] = len(nu_grid) - len(rows)
    return _finish(report, start)


def h2_scan(nu_grid: Sequence[float], u_grid: Sequence[float], workers: Optional[int] = None) -> ScanReport:
    '''
    check_h2 over a grid, as an unasserted report. Orders in (-1/2, 1/2) are scanned too; failures on
    the stated range nu >= 1/2 are counted in `details["stated_range_fails"]`.
    '''
    start = time.perf_counter()
    rows = open_left(nu_grid, -0.5)
    report = ScanReport(command="product:h2", config={"nu_grid": list(nu_grid), "u_grid": list(u_grid)},
                        asserted=False)
    def row(nu: float) -> List[InequalityVerdict]:
        return [check_h2(OrderArg(nu, u), exploratory=True) for u in u_grid]

    for verdicts in map_rows(row, rows, workers):
        report.extend(verdicts)
    report.details["stated_range_fails"] = sum(1 for v in report.failures() if v.point.nu >= 0.5)
    return _finish(report, start)


def _summary(report: ScanReport) -> dict:
    return {
        "verdicts": len(report.verdicts),
        "fails": report.count(Outcome.FAILS),
        "min_slack": report.min_slack,
        "counterexamples": report.counterexamples,
    }


def product_suite(u_values: Sequence[float], nu_grid: Sequence[float], n_max: int = 50,
                  shape_u_grid: Optional[Sequence[float]] = None, workers: Optional[int] = None) -> ScanReport:
    '''
    Everything the product subcommand runs, merged: the integer chain and order monotonicity at every
    u, the (h5)/(h6) recurrences, u-shape checks per order and the half-order identity.

    The exploratory (h2) and chain-convexity scans run alongside; they are summarised in
    `details["exploratory"]` and their verdicts stay out of the merged list.
    '''
    shape_u_grid = list(shape_u_grid) if shape_u_grid is not None else list(u_values)
    reports = []
    exploratory = {"h1.convex": [], "h2": None}
    for u in u_values:
        reports.append(sequence_scan(u, n_max))
        reports.append(order_monotonicity_scan(u, [nu for nu in nu_grid if nu >= 0]))
        exploratory["h1.convex"].append(chain_convexity_scan(u, n_max))
    reports.append(recurrence_scan(nu_grid, u_values, workers=workers))
    for nu in nu_grid:
        if nu > -1:
            reports.append(u_shape_checks(nu, shape_u_grid))
    reports.append(half_order_identity_check([u for u in shape_u_grid if u <= 300]))
    merged = ScanReport.merge("product", reports, {"u": list(u_values), "nu_grid": list(nu_grid), "n_max": n_max,
                                                  "shape_u_grid": shape_u_grid})
    h2 = h2_scan(nu_grid, u_values, workers)
    chain = ScanReport.merge("product:chain-convexity", exploratory["h1.convex"])
    chain.counterexamples = [v.to_dict() for v in chain.failures()]
    h2_summary = _summary(h2)
    h2_summary["stated_range_fails"] = h2.details["stated_range_fails"]
    merged.details = {"exploratory": {"h2": h2_summary, "h1.convex": _summary(chain)}}
    merged.counterexamples = [v.to_dict() for v in merged.failures()]
    return merged
