'''
Turan.py

Turan determinants and gap functions for I_nu and K_nu, their verdicts, and the counterexample search.

Every determinant is normalised by the squared middle term and assembled from exponentially scaled
values, so f_{nu-1} f_{nu+1} / f_nu^2 never overflows. With rho = that ratio:

    t1: rho_I - 1                              < 0      nu > -1
    t2: rho_K - 1                              > 0      all nu
    t3: 1/(nu+1) - (1 - rho_I)                 > 0      nu > -1
    t4: (1 - rho_K) - 1/(1-nu)                 > 0      nu > 1
    t5: (nu-1) rho_K - (2nu-1)                 < 0
    t6: (1 - rho_K) - nu/(1-nu)                < 0
    t7: (nu+1) rho_K - (2nu+1)                 > 0
    phi: 1 - rho_K                             < 0
'''
from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from besselturan.core import EPS, OrderArg, scaled_i, scaled_k
from besselturan.utils.errors import DomainError
from besselturan.utils.grids import linear_grid, log_grid
from besselturan.utils.report import ScanReport
from besselturan.utils.runner import map_rows
from besselturan.utils.verdicts import InequalityVerdict, Outcome

logger = logging.getLogger(__name__)

NU_STEP = 1.0 / 16.0
U_PER_DECADE = 32
REFINE = 8


class TuranLabel(str, Enum):
    T1 = "t1"
    T2 = "t2"
    T3 = "t3"
    T4 = "t4"
    T5 = "t5"
    T6 = "t6"
    T7 = "t7"
    PHI = "phi"


@dataclass(frozen=True)
class TuranGap:
    '''
    A normalised Turan gap at one point.

    Attributes:
        label (TuranLabel): Which inequality the gap belongs to.
        value (float): The gap, with the sign convention listed in the module docstring.
        nu (float): Order.
        u (float): Argument.
        abs_err (float): Absolute error estimate of `value`.
    '''
    label: TuranLabel
    value: float
    nu: float
    u: float
    abs_err: float = 0.0


def rho_I(nu: float, u: float) -> Tuple[float, float]:
    '''I_{nu-1} I_{nu+1} / I_nu^2 and its absolute error estimate.'''
    mid = scaled_i(nu, u)
    down, up = scaled_i(nu - 1, u), scaled_i(nu + 1, u)
    rho = (down / mid) * (up / mid)
    rel = down.rel_err + up.rel_err + 2 * mid.rel_err + 4 * EPS
    return rho, abs(rho) * rel


def rho_K(nu: float, u: float) -> Tuple[float, float]:
    '''K_{nu-1} K_{nu+1} / K_nu^2 and its absolute error estimate.'''
    mid = scaled_k(nu, u)
    down, up = scaled_k(nu - 1, u), scaled_k(nu + 1, u)
    rho = (down / mid) * (up / mid)
    rel = down.rel_err + up.rel_err + 2 * mid.rel_err + 4 * EPS
    return rho, abs(rho) * rel


def _require(condition: bool, p: OrderArg, requirement: str) -> None:
    if not condition:
        raise DomainError("nu", p.nu, requirement)


def turan_I(p: OrderArg) -> TuranGap:
    '''
    Normalised (t1) determinant I_{nu-1} I_{nu+1} / I_nu^2 - 1, negative when (t1) holds.

    Raises:
        DomainError: If nu <= -1.
    '''
    _require(p.nu > -1, p, "(t1) needs nu > -1")
    rho, err = rho_I(p.nu, p.u)
    return TuranGap(TuranLabel.T1, rho - 1.0, p.nu, p.u, err + EPS)


def turan_K(p: OrderArg) -> TuranGap:
    '''Normalised (t2) determinant K_{nu-1} K_{nu+1} / K_nu^2 - 1, positive when (t2) holds.'''
    rho, err = rho_K(p.nu, p.u)
    return TuranGap(TuranLabel.T2, rho - 1.0, p.nu, p.u, err + EPS)


def phi_gap(p: OrderArg) -> TuranGap:
    '''phi_nu(u) = 1 - K_{nu-1} K_{nu+1} / K_nu^2; exactly the negated (t2) gap.'''
    rho, err = rho_K(p.nu, p.u)
    return TuranGap(TuranLabel.PHI, 1.0 - rho, p.nu, p.u, err + EPS)


def turan_I_sharp(p: OrderArg) -> TuranGap:
    '''(t3) gap 1/(nu+1) - (1 - rho_I), positive when (t3) holds.'''
    _require(p.nu > -1, p, "(t3) needs nu > -1")
    rho, err = rho_I(p.nu, p.u)
    c = 1.0 / (p.nu + 1.0)
    return TuranGap(TuranLabel.T3, c - (1.0 - rho), p.nu, p.u, err + 2 * EPS * (1.0 + abs(c)))


def turan_K_sharp(p: OrderArg) -> TuranGap:
    '''
    (t4) gap (1 - rho_K) - 1/(1-nu), positive when (t4) holds.

    Raises:
        DomainError: If nu <= 1.
    '''
    _require(p.nu > 1, p, "(t4) needs nu > 1")
    rho, err = rho_K(p.nu, p.u)
    c = 1.0 / (1.0 - p.nu)
    return TuranGap(TuranLabel.T4, (1.0 - rho) - c, p.nu, p.u, err + 2 * EPS * (abs(rho) + abs(c)))


def gap_t5_t6_t7(p: OrderArg) -> Tuple[TuranGap, TuranGap, TuranGap]:
    '''
    The three gaps of the corrected K inequalities.

    (t5) and (t6) hold when their gaps are negative, (t7) when its gap is positive. At nu = 1 the
    (t6) constant nu/(1-nu) is infinite and the gap is NaN.
    '''
    nu = p.nu
    rho, err = rho_K(nu, p.u)
    t5 = (nu - 1.0) * rho - (2.0 * nu - 1.0)
    t7 = (nu + 1.0) * rho - (2.0 * nu + 1.0)
    if nu == 1.0:
        t6, e6 = math.nan, math.nan
    else:
        c = nu / (1.0 - nu)
        t6 = (1.0 - rho) - c
        e6 = err + 2 * EPS * (abs(rho) + abs(c))
    e5 = abs(nu - 1.0) * err + 2 * EPS * (abs((nu - 1.0) * rho) + abs(2.0 * nu - 1.0))
    e7 = abs(nu + 1.0) * err + 2 * EPS * (abs((nu + 1.0) * rho) + abs(2.0 * nu + 1.0))
    return (TuranGap(TuranLabel.T5, t5, nu, p.u, e5),
            TuranGap(TuranLabel.T6, t6, nu, p.u, e6),
            TuranGap(TuranLabel.T7, t7, nu, p.u, e7))


# +1: gap > 0 when the inequality holds; -1: gap < 0 when it holds
_ORIENTATION = {
    TuranLabel.T1: -1, TuranLabel.T2: +1, TuranLabel.T3: +1, TuranLabel.T4: +1,
    TuranLabel.T5: -1, TuranLabel.T6: -1, TuranLabel.T7: +1, TuranLabel.PHI: -1,
}

_DOMAINS: Dict[TuranLabel, Callable[[float], bool]] = {
    TuranLabel.T1: lambda nu: nu > -1,
    TuranLabel.T3: lambda nu: nu > -1,
    TuranLabel.T4: lambda nu: nu > 1,
}


def in_domain(label: TuranLabel, nu: float) -> bool:
    check = _DOMAINS.get(TuranLabel(label))
    return check(nu) if check else True


def gap(label: TuranLabel, p: OrderArg) -> TuranGap:
    '''Dispatches to the gap function of `label`.'''
    label = TuranLabel(label)
    if label is TuranLabel.T1:
        return turan_I(p)
    if label is TuranLabel.T2:
        return turan_K(p)
    if label is TuranLabel.T3:
        return turan_I_sharp(p)
    if label is TuranLabel.T4:
        return turan_K_sharp(p)
    if label is TuranLabel.PHI:
        return phi_gap(p)
    t5, t6, t7 = gap_t5_t6_t7(p)
    return {TuranLabel.T5: t5, TuranLabel.T6: t6, TuranLabel.T7: t7}[label]


def verdict(g: TuranGap) -> InequalityVerdict:
    '''Turns a gap into a verdict; the slack is the gap oriented so that positive means "holds".'''
    slack = _ORIENTATION[g.label] * g.value
    return InequalityVerdict.judge(g.label.value, OrderArg(g.nu, g.u), slack, g.abs_err)


def check(label: TuranLabel, p: OrderArg) -> InequalityVerdict:
    return verdict(gap(label, p))


def turan_scan(label: TuranLabel, nu_grid: Sequence[float], u_grid: Sequence[float],
               workers: Optional[int] = None, asserted: bool = True) -> ScanReport:
    '''
    Verdicts of one Turan inequality on a (nu, u) grid.

    Orders outside the inequality's domain are skipped and counted in `details["skipped_nu"]`.

    Args:
        label (TuranLabel): Inequality to check.
        nu_grid (Sequence[float]): Orders.
        u_grid (Sequence[float]): Arguments.
        workers (int, optional): Worker count for the row pool.
        asserted (bool): Whether the inequality is claimed on this grid.

    Returns:
        ScanReport: Verdicts in (nu, u) order.
    '''
    label = TuranLabel(label)
    start = time.perf_counter()
    rows = [nu for nu in nu_grid if in_domain(label, nu)]

    def row(nu: float) -> List[InequalityVerdict]:
        return [check(label, OrderArg(nu, u)) for u in u_grid]

    report = ScanReport(
        command=f"turan:{label.value}",
        config={"label": label.value, "nu_grid": list(nu_grid), "u_grid": list(u_grid)},
        asserted=asserted,
    )
    for verdicts in map_rows(row, rows, workers):
        report.extend(verdicts)
    report.details["skipped_nu"] = len(nu_grid) - len(rows)
    report.counterexamples = [v.to_dict() for v in report.failures()]
    report.wall_time = time.perf_counter() - start
    return report


def sharpness_checks(nu_grid: Sequence[float], u_small: float = 1e-4, u_large: float = 500.0,
                     tol_small: float = 1e-3, tol_large: float = 1e-2) -> ScanReport:
    '''
    Best-possible constants seen as limits.

    For each order: at u_small, 1 - rho_I approaches 1/(nu+1) (t3) and, for nu >= 2, 1 - rho_K
    approaches 1/(1-nu) (t4); at u_large the (t1) and (t2) normalised determinants approach 0.
    The slack is tolerance minus distance to the limit.
    '''
    start = time.perf_counter()
    report = ScanReport(command="turan:sharpness",
                        config={"nu_grid": list(nu_grid), "u_small": u_small, "u_large": u_large,
                                "tol_small": tol_small, "tol_large": tol_large})
    for nu in nu_grid:
        small = OrderArg(nu, u_small)
        large = OrderArg(nu, u_large)
        if nu > -1:
            t3 = turan_I_sharp(small)
            report.extend([InequalityVerdict.judge("sharp.t3", small, tol_small - abs(t3.value), t3.abs_err)])
            t1 = turan_I(large)
            report.extend([InequalityVerdict.judge("sharp.t1", large, tol_large - abs(t1.value), t1.abs_err)])
        # below nu = 2 the K_{nu-1} correction decays only like u^(2nu-2)
        if nu >= 2:
            t4 = turan_K_sharp(small)
            report.extend([InequalityVerdict.judge("sharp.t4", small, tol_small - abs(t4.value), t4.abs_err)])
        t2 = turan_K(large)
        report.extend([InequalityVerdict.judge("sharp.t2", large, tol_large - abs(t2.value), t2.abs_err)])
    report.counterexamples = [v.to_dict() for v in report.failures()]
    report.wall_time = time.perf_counter() - start
    return report


# a (t7) failure at nu is a (t5) failure at -nu since K_nu = K_{-nu}
_DUAL = {TuranLabel.T7: TuranLabel.T5}


def _coarse_grid(nu_range: Tuple[float, float], u_range: Tuple[float, float],
                 budget: int) -> Tuple[List[float], List[float]]:
    nu_lo, nu_hi = nu_range
    u_lo, u_hi = u_range
    nu_step = NU_STEP
    per_decade = U_PER_DECADE
    nus = linear_grid(nu_lo, nu_hi, nu_step) if nu_hi > nu_lo else [nu_lo]
    us = log_grid(u_lo, u_hi, per_decade) if u_hi > u_lo else [u_lo]
    # keep the coarse pass within half the budget, leaving the rest for refinement
    while len(nus) * len(us) > max(1, budget // 2) and (len(nus) > 2 or len(us) > 2):
        if len(nus) >= len(us) and len(nus) > 2:
            nu_step *= 2
            nus = linear_grid(nu_lo, nu_hi, nu_step)
        elif per_decade > 1:
            per_decade = max(1, per_decade // 2)
            us = log_grid(u_lo, u_hi, per_decade)
        else:
            break
    return nus, us


def _refined_between(a: float, b: float) -> List[float]:
    # REFINE - 1 interior points, geometric spacing (u > 0)
    ratio = (b / a) ** (1.0 / REFINE)
    return [a * ratio ** j for j in range(1, REFINE)]


def counterexample_search(label: TuranLabel, nu_range: Tuple[float, float], u_range: Tuple[float, float],
                          budget: int = 200_000, workers: Optional[int] = None) -> List[OrderArg]:
    '''
    Coarse-to-fine search for points where an inequality's verdict is "fails".

    The coarse grid is linear in nu (step 1/16) and logarithmic in u (32 points per decade), thinned
    if it would exceed half of `budget`. Around every sign change of the slack along u the interval is
    refined eightfold. (t7) is searched as (t5) on the reflected order range.

    Args:
        label (TuranLabel): Inequality to refute.
        nu_range (tuple): Closed order interval.
        u_range (tuple): Closed argument interval, u > 0.
        budget (int): Maximum number of gap evaluations.
        workers (int, optional): Worker count for the row pool.

    Returns:
        list[OrderArg]: Failing points sorted by nu then u. Empty means none found within budget.
    '''
    label = TuranLabel(label)
    if budget < 1:
        raise DomainError("budget", budget, "must be at least 1")
    if u_range[0] <= 0:
        raise DomainError("u", u_range[0], "search range must be strictly positive")
    sign = 1.0
    search_label = label
    nu_lo, nu_hi = nu_range
    if label in _DUAL:
        search_label = _DUAL[label]
        sign = -1.0
        nu_lo, nu_hi = -nu_range[1], -nu_range[0]
    nus, us = _coarse_grid((nu_lo, nu_hi), u_range, budget)
    nus = [nu for nu in nus if in_domain(search_label, nu)]
    per_row_budget = max(1, budget // max(1, len(nus)))

    def row(nu: float) -> List[Tuple[float, float]]:
        found = []
        verdicts = [check(search_label, OrderArg(nu, u)) for u in us]
        spent = len(verdicts)
        for u, v in zip(us, verdicts):
            if v.outcome is Outcome.FAILS:
                found.append((nu, u))
        for (u_a, v_a), (u_b, v_b) in zip(zip(us, verdicts), zip(us[1:], verdicts[1:])):
            if spent + REFINE - 1 > per_row_budget:
                break
            if (v_a.slack > 0) == (v_b.slack > 0):
                continue
            for u in _refined_between(u_a, u_b):
                spent += 1
                if check(search_label, OrderArg(nu, u)).outcome is Outcome.FAILS:
                    found.append((nu, u))
        return found

    witnesses = set()
    for found in map_rows(row, nus, workers):
        witnesses.update(found)
    points = sorted((sign * nu, u) for nu, u in witnesses)
    logger.info("counterexample search %s on nu in [%g, %g], u in [%g, %g]: %d witnesses",
                label.value, nu_range[0], nu_range[1], u_range[0], u_range[1], len(points))
    return [OrderArg(nu, u) for nu, u in points]


def hunt_report(label: TuranLabel, nu_range: Tuple[float, float], u_range: Tuple[float, float],
                budget: int = 200_000, workers: Optional[int] = None) -> ScanReport:
    '''counterexample_search wrapped in an exploratory ScanReport with the witnesses' verdicts.'''
    start = time.perf_counter()
    label = TuranLabel(label)
    witnesses = counterexample_search(label, nu_range, u_range, budget, workers)
    report = ScanReport(
        command="hunt",
        config={"label": label.value, "nu_range": list(nu_range), "u_range": list(u_range), "budget": budget},
        asserted=False,
    )
    report.extend(check(label, p) for p in witnesses)
    report.counterexamples = [{"nu": p.nu, "u": p.u} for p in witnesses]
    report.wall_time = time.perf_counter() - start
    return report
