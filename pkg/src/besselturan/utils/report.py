'''
ScanReport: the result record of every scan, and its JSON / CSV serialisations.

The JSON field names are the stable machine interface documented in docs/source/report_format.rst.
'''
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Optional

from besselturan.utils.verdicts import InequalityVerdict, Outcome

CSV_COLUMNS = ["label", "nu", "u", "slack", "outcome", "err_budget"]


def _finite_or_none(x: Optional[float]):
    if x is None or not math.isfinite(x):
        return None
    return x


@dataclass
class ScanReport:
    '''
    A grid of verdicts with summary statistics and provenance.

    Attributes:
        command (str): The operation or CLI subcommand that produced the report.
        config (dict): Full parameter record (grids, tolerances, seed, version).
        verdicts (list[InequalityVerdict]): Verdicts in deterministic grid order.
        counterexamples (list[dict]): Points reported as failing (or candidate failures).
        asserted (bool): Whether the verdicts are claims that must hold (False for exploratory scans).
        details (dict): Operation-specific extras (agreement counts, oracle recomputations, ...).
        wall_time (float): Seconds spent producing the report.
    '''
    command: str
    config: Dict[str, Any] = field(default_factory=dict)
    verdicts: List[InequalityVerdict] = field(default_factory=list)
    counterexamples: List[Dict[str, Any]] = field(default_factory=list)
    asserted: bool = True
    details: Dict[str, Any] = field(default_factory=dict)
    wall_time: float = 0.0

    @property
    def min_slack(self) -> Optional[float]:
        '''Minimum slack over verdicts that are not indeterminate (None if there are none).'''
        decided = [v.slack for v in self.verdicts if v.outcome is not Outcome.INDETERMINATE]
        return min(decided) if decided else None

    def count(self, outcome: Outcome) -> int:
        return sum(1 for v in self.verdicts if v.outcome is outcome)

    @property
    def all_hold(self) -> bool:
        return all(v.outcome is Outcome.HOLDS for v in self.verdicts)

    def failures(self) -> List[InequalityVerdict]:
        return [v for v in self.verdicts if v.outcome is Outcome.FAILS]

    def by_label(self, label: str) -> List[InequalityVerdict]:
        return [v for v in self.verdicts if v.label == label]

    def extend(self, verdicts: Iterable[InequalityVerdict]) -> None:
        self.verdicts.extend(verdicts)

    def to_dict(self, include_wall_time: bool = True) -> Dict[str, Any]:
        doc = {
            "command": self.command,
            "config": self.config,
            "asserted": self.asserted,
            "summary": {
                "verdicts": len(self.verdicts),
                "holds": self.count(Outcome.HOLDS),
                "fails": self.count(Outcome.FAILS),
                "indeterminate": self.count(Outcome.INDETERMINATE),
                "min_slack": _finite_or_none(self.min_slack),
            },
            "verdicts": [v.to_dict() for v in self.verdicts],
            "counterexamples": self.counterexamples,
            "details": self.details,
        }
        if include_wall_time:
            doc["wall_time"] = round(self.wall_time, 6)
        return doc

    def to_json(self, include_wall_time: bool = True) -> str:
        return dump_json(self.to_dict(include_wall_time))

    def to_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=CSV_COLUMNS, quoting=csv.QUOTE_MINIMAL, lineterminator="\r\n")
        writer.writeheader()
        for verdict in self.verdicts:
            writer.writerow({k: _csv_cell(val) for k, val in verdict.to_dict().items()})
        return buffer.getvalue()

    @classmethod
    def merge(cls, command: str, reports: Iterable["ScanReport"],
              config: Optional[Dict[str, Any]] = None) -> "ScanReport":
        '''Concatenates sub-reports (in the given order) into one report.'''
        reports = list(reports)
        merged = cls(command=command, config=config or {})
        merged.asserted = any(r.asserted for r in reports)
        for r in reports:
            merged.verdicts.extend(r.verdicts)
            merged.counterexamples.extend(r.counterexamples)
            merged.details[r.command] = r.details
            merged.wall_time += r.wall_time
        return merged


def _csv_cell(value):
    if isinstance(value, float):
        return repr(value)
    return value


def _json_default(obj):
    # numpy scalars and enums end up in details/config
    if hasattr(obj, "item"):
        return obj.item()
    if hasattr(obj, "value"):
        return obj.value
    raise TypeError(f"{type(obj).__name__} is not JSON serialisable")


def _sanitize(obj):
    # JSON has no inf/nan; non-finite numbers are written as null
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if isinstance(obj, dict):
        return {k: _sanitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_sanitize(v) for v in obj]
    return obj


def dump_json(doc: Dict[str, Any]) -> str:
    '''Serialises a report-like document: sorted keys, non-finite numbers as null.'''
    return json.dumps(_sanitize(doc), indent=2, sort_keys=True, allow_nan=False, default=_json_default)
