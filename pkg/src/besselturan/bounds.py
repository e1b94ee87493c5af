'''
Bounds.py

Closed-form bounds for Bessel ratios and logarithmic derivatives, returned as sandwich intervals,
and the audit that the Turan inequalities and their bound forms decide identically.

    l1  I_nu/I_{nu-1} > (-nu + sqrt(u^2+nu^2)) / u                      nu >= 0
    l3  I_nu/I_{nu-1} < (-nu + sqrt(c u^2+nu^2)) / (c u), c = nu/(nu+1)  nu > 0
    l2  K_nu/K_{nu-1} < (nu + sqrt(u^2+nu^2)) / u                       all nu
    l4  K_nu/K_{nu-1} > (nu + sqrt(c u^2+nu^2)) / (c u), c = nu/(nu-1)   nu > 1
    b1  u I'_nu/I_nu  < sqrt(u^2+nu^2)                                  nu > -1
    b3  u I'_nu/I_nu  > sqrt(u^2 nu/(nu+1) + nu^2)                      nu > 0
    b2  u K'_nu/K_nu  < -sqrt(u^2+nu^2)                                 all nu
    b4  u K'_nu/K_nu  > -sqrt(u^2 nu/(nu-1) + nu^2)                     nu > 1

The lower I-ratio forms are evaluated as u / (nu + sqrt(...)), which is the same number without the
cancellation between -nu and the square root at small u.
'''
from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

from besselturan.core import EPS, OrderArg, log_derivative_i, log_derivative_k, scaled_i, scaled_k
from besselturan import turan
from besselturan.utils.report import ScanReport
from besselturan.utils.runner import map_rows
from besselturan.utils.verdicts import InequalityVerdict, Outcome

logger = logging.getLogger(__name__)

# (l4)/(b4) are not decided within this distance above nu = 1
NEAR_ONE = 1e-6


class TargetKind(str, Enum):
    I_RATIO = "I_ratio"
    K_RATIO = "K_ratio"
    I_LOGDERIV = "I_logderiv"
    K_LOGDERIV = "K_logderiv"
    I_INV_RATIO = "I_inv_ratio"
    K_INV_RATIO = "K_inv_ratio"


@dataclass(frozen=True)
class SandwichInterval:
    '''
    Closed-form bounds around one Bessel quantity.

    Attributes:
        lower (float, optional): Lower bound, None when it is not valid at this order.
        upper (float, optional): Upper bound, None when it is not valid at this order.
        target_kind (TargetKind): The bounded quantity.
        domain_ok (bool): True when both sides are valid.
        lower_label (str): Inequality label of the lower side.
        upper_label (str): Inequality label of the upper side.
    '''
    lower: Optional[float]
    upper: Optional[float]
    target_kind: TargetKind
    domain_ok: bool
    lower_label: str = ""
    upper_label: str = ""

    def contains(self, value: float) -> bool:
        above = self.lower is None or value > self.lower
        below = self.upper is None or value < self.upper
        return above and below


def _root(a: float, b: float) -> float:
    return math.sqrt(a + b)


def i_ratio_bounds(p: OrderArg) -> SandwichInterval:
    '''(l1) lower and (l3) upper bound of I_nu(u)/I_{nu-1}(u).'''
    nu, u = p.nu, p.u
    # I_{nu-1} changes sign for nu in (-1, 0), so the ratio form is only used from nu = 0
    lower = u / (nu + math.hypot(u, nu)) if nu >= 0 else None
    upper = None
    if nu > 0:
        c = nu / (nu + 1.0)
        upper = u / (nu + _root(c * u * u, nu * nu))
    return SandwichInterval(lower, upper, TargetKind.I_RATIO, lower is not None and upper is not None, "l1", "l3")


def k_ratio_bounds(p: OrderArg) -> SandwichInterval:
    '''(l2) upper and, for nu > 1, (l4) lower bound of K_nu(u)/K_{nu-1}(u).'''
    nu, u = p.nu, p.u
    r = math.hypot(u, nu)
    upper = (nu + r) / u if nu >= 0 else u / (r - nu)
    lower = None
    if nu > 1.0 + NEAR_ONE:
        c = nu / (nu - 1.0)
        lower = (nu + _root(c * u * u, nu * nu)) / (c * u)
    return SandwichInterval(lower, upper, TargetKind.K_RATIO, lower is not None, "l4", "l2")


def i_logderiv_bounds(p: OrderArg) -> SandwichInterval:
    '''(b3) lower (nu > 0) and (b1) upper bound of u I'_nu(u)/I_nu(u).'''
    nu, u = p.nu, p.u
    upper = math.hypot(u, nu) if nu > -1 else None
    lower = _root(u * u * nu / (nu + 1.0), nu * nu) if nu > 0 else None
    return SandwichInterval(lower, upper, TargetKind.I_LOGDERIV, lower is not None and upper is not None, "b3", "b1")


def k_logderiv_bounds(p: OrderArg) -> SandwichInterval:
    '''(b4) lower (nu > 1) and (b2) upper bound of u K'_nu(u)/K_nu(u).'''
    nu, u = p.nu, p.u
    upper = -math.hypot(u, nu)
    lower = None
    if nu > 1.0 + NEAR_ONE:
        lower = -_root(u * u * nu / (nu - 1.0), nu * nu)
    return SandwichInterval(lower, upper, TargetKind.K_LOGDERIV, lower is not None, "b4", "b2")


def reciprocal_ratio_bounds(p: OrderArg) -> Tuple[SandwichInterval, SandwichInterval]:
    '''
    The reciprocal forms between (b1)/(b2) and (l1)/(l2):
    I_{nu-1}/I_nu < (nu + sqrt(u^2+nu^2))/u and K_{nu-1}/K_nu > (-nu + sqrt(u^2+nu^2))/u.
    '''
    nu, u = p.nu, p.u
    r = math.hypot(u, nu)
    i_upper = (nu + r) / u if nu > -1 else None
    k_lower = u / (nu + r) if nu >= 0 else (r - nu) / u
    return (SandwichInterval(None, i_upper, TargetKind.I_INV_RATIO, False, "", "r1"),
            SandwichInterval(k_lower, None, TargetKind.K_INV_RATIO, False, "r2", ""))


def target_value(kind: TargetKind, p: OrderArg) -> Tuple[float, float]:
    '''The bounded quantity at p and its absolute error estimate.'''
    nu, u = p.nu, p.u
    if kind in (TargetKind.I_RATIO, TargetKind.I_INV_RATIO):
        top, bottom = scaled_i(nu, u), scaled_i(nu - 1, u)
        if kind is TargetKind.I_INV_RATIO:
            top, bottom = bottom, top
    elif kind in (TargetKind.K_RATIO, TargetKind.K_INV_RATIO):
        top, bottom = scaled_k(nu, u), scaled_k(nu - 1, u)
        if kind is TargetKind.K_INV_RATIO:
            top, bottom = bottom, top
    elif kind is TargetKind.I_LOGDERIV:
        return log_derivative_i(nu, u)
    else:
        return log_derivative_k(nu, u)
    value = top / bottom
    return value, abs(value) * (top.rel_err + bottom.rel_err + 2 * EPS)


def sandwich_verdicts(interval: SandwichInterval, p: OrderArg) -> List[InequalityVerdict]:
    '''One verdict per valid side: slack is value - lower, or upper - value.'''
    value, err = target_value(interval.target_kind, p)
    verdicts = []
    if interval.lower is not None:
        budget = err + 4 * EPS * abs(interval.lower)
        verdicts.append(InequalityVerdict.judge(interval.lower_label, p, value - interval.lower, budget))
    if interval.upper is not None:
        budget = err + 4 * EPS * abs(interval.upper)
        verdicts.append(InequalityVerdict.judge(interval.upper_label, p, interval.upper - value, budget))
    return verdicts


def bound_verdicts(p: OrderArg) -> List[InequalityVerdict]:
    '''Verdicts of every bound valid at p, (l1)-(l4), (b1)-(b4) and the reciprocal forms.'''
    intervals = [i_ratio_bounds(p), k_ratio_bounds(p), i_logderiv_bounds(p), k_logderiv_bounds(p),
                 *reciprocal_ratio_bounds(p)]
    verdicts: List[InequalityVerdict] = []
    for interval in intervals:
        if interval.lower is None and interval.upper is None:
            continue
        verdicts.extend(sandwich_verdicts(interval, p))
    return verdicts


def bounds_scan(nu_grid: Sequence[float], u_grid: Sequence[float], workers: Optional[int] = None) -> ScanReport:
    '''bound_verdicts over a grid.'''
    start = time.perf_counter()
    report = ScanReport(command="bounds", config={"nu_grid": list(nu_grid), "u_grid": list(u_grid)})
    rows = map_rows(lambda nu: [v for u in u_grid for v in bound_verdicts(OrderArg(nu, u))], list(nu_grid), workers)
    for verdicts in rows:
        report.extend(verdicts)
    report.counterexamples = [v.to_dict() for v in report.failures()]
    report.wall_time = time.perf_counter() - start
    return report


# family -> (Turan label, bound labels); the family applies where its predicate on nu holds
FAMILIES: Dict[str, Tuple[str, Tuple[str, ...]]] = {
    "F1": ("t1", ("b1", "l1", "r1")),
    "F2": ("t2", ("b2", "l2", "r2")),
    "F3": ("t3", ("b3", "l3")),
    "F4": ("t4", ("b4", "l4")),
}


def _family_applies(family: str, nu: float) -> bool:
    if family == "F1":
        return nu > -1
    if family == "F3":
        return nu > 0
    if family == "F4":
        return nu > 1.0 + NEAR_ONE
    return True


def _audit_point(p: OrderArg) -> Tuple[List[InequalityVerdict], Dict[str, str], List[dict]]:
    by_label = {v.label: v for v in bound_verdicts(p)}
    verdicts = list(by_label.values())
    status: Dict[str, str] = {}
    disagreements = []
    for family, (turan_label, bound_labels) in FAMILIES.items():
        if not _family_applies(family, p.nu):
            continue
        t = turan.check(turan_label, p)
        verdicts.append(t)
        members = [t] + [by_label[b] for b in bound_labels if b in by_label]
        if any(v.outcome is Outcome.INDETERMINATE for v in members):
            status[family] = "excluded"
            continue
        outcomes = {v.outcome for v in members}
        if len(outcomes) == 1:
            status[family] = "agree"
        else:
            status[family] = "disagree"
            disagreements.append({"family": family, "nu": p.nu, "u": p.u,
                                  "outcomes": {v.label: v.outcome.value for v in members}})
    return verdicts, status, disagreements


def equivalence_audit(nu_grid: Sequence[float], u_grid: Sequence[float],
                      workers: Optional[int] = None) -> ScanReport:
    '''
    Checks pointwise that each Turan inequality and its bound forms decide the same way.

    Families: {t1, b1, l1, r1} for nu > -1, {t2, b2, l2, r2} for all nu, {t3, b3, l3} for nu > 0
    and {t4, b4, l4} for nu > 1. Points where any member is indeterminate are excluded. Orders in
    (-1, 0] are not audited for the third family; the (b3)/(l3) forms are only claimed for nu > 0.

    Returns:
        ScanReport: All member verdicts; `details` holds per-family agree/disagree/excluded counts and
        `counterexamples` every disagreement.
    '''
    start = time.perf_counter()

    def row(nu: float):
        return [_audit_point(OrderArg(nu, u)) for u in u_grid]

    report = ScanReport(command="equivalence-audit", config={"nu_grid": list(nu_grid), "u_grid": list(u_grid)})
    counts = {family: {"agree": 0, "disagree": 0, "excluded": 0} for family in FAMILIES}
    for results in map_rows(row, list(nu_grid), workers):
        for verdicts, status, disagreements in results:
            report.extend(verdicts)
            for family, state in status.items():
                counts[family][state] += 1
            report.counterexamples.extend(disagreements)
    report.details["families"] = counts
    report.details["flagged"] = "third family not audited for nu in (-1, 0]"
    if report.counterexamples:
        logger.warning("equivalence audit: %d disagreements", len(report.counterexamples))
    report.wall_time = time.perf_counter() - start
    return report
