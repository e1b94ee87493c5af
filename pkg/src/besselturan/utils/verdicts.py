'''
Verdicts for a single labelled inequality at a single point, and the deadband rule that decides them.
'''
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import TYPE_CHECKING, Optional

from besselturan.utils.config import get_settings

if TYPE_CHECKING:
    from besselturan.core import OrderArg  # Import only for type checking


class Outcome(str, Enum):
    HOLDS = "holds"
    FAILS = "fails"
    INDETERMINATE = "indeterminate"


def error_budget(abs_err: float, factor: Optional[float] = None) -> float:
    '''Scales a combined absolute error estimate into a deadband half-width.'''
    if factor is None:
        factor = get_settings().deadband_factor
    return factor * abs_err


def decide(slack: float, budget: float, strict: bool = True) -> Outcome:
    '''
    Applies the deadband rule.

    A strict inequality holds when slack > budget, fails when slack < -budget and is indeterminate
    in between. A non-strict inequality (slack >= 0) cannot be refuted inside the deadband, so the
    band counts as holding.

    Args:
        slack (float): Signed margin, positive when the inequality is satisfied.
        budget (float): Deadband half-width (already multiplied by the deadband factor).
        strict (bool): Whether the inequality is strict.

    Returns:
        Outcome: The verdict.
    '''
    if math.isnan(slack) or math.isnan(budget):
        return Outcome.INDETERMINATE
    if slack > budget:
        return Outcome.HOLDS
    if slack < -budget:
        return Outcome.FAILS
    return Outcome.INDETERMINATE if strict else Outcome.HOLDS


@dataclass(frozen=True)
class InequalityVerdict:
    '''
    Outcome of one labelled inequality at one point.

    Attributes:
        label (str): Inequality label (t1 ... t7, b1 ..., h2, kratio.sqrt, ...).
        point (OrderArg): Where the inequality was evaluated.
        slack (float): Signed margin, positive when the inequality is satisfied.
        outcome (Outcome): holds / fails / indeterminate.
        err_budget (float): Deadband half-width used to decide the outcome.
    '''
    label: str
    point: "OrderArg"
    slack: float
    outcome: Outcome
    err_budget: float

    @classmethod
    def judge(cls, label: str, point: "OrderArg", slack: float, abs_err: float,
              strict: bool = True) -> "InequalityVerdict":
        '''Builds a verdict from a slack and the combined absolute error of its ingredients.'''
        budget = error_budget(abs_err)
        return cls(label, point, slack, decide(slack, budget, strict), budget)

    @property
    def holds(self) -> bool:
        return self.outcome is Outcome.HOLDS

    @property
    def fails(self) -> bool:
        return self.outcome is Outcome.FAILS

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "nu": self.point.nu,
            "u": self.point.u,
            "slack": self.slack,
            "outcome": self.outcome.value,
            "err_budget": self.err_budget,
        }
