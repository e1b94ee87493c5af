'''
Grid construction and the command-line grid syntax.

Syntax:
    lo:hi:step   linear grid from lo to hi (inclusive) in steps of `step`
    lo:hi:logN   logarithmic grid with N points per decade (lo, hi > 0)
    lo:hi        the two endpoints only
    a,b,c        explicit list
    x            a single value
'''
from __future__ import annotations

import math
from typing import List, Sequence

import numpy as np

from besselturan.utils.errors import GridSyntaxError


def linear_grid(lo: float, hi: float, step: float) -> List[float]:
    '''Linear grid lo, lo+step, ... up to hi inclusive (hi is added if the last step overshoots).'''
    if step <= 0:
        raise GridSyntaxError(f"{lo}:{hi}:{step}", "step must be positive")
    if hi < lo:
        raise GridSyntaxError(f"{lo}:{hi}:{step}", "hi must not be below lo")
    n = int(math.floor((hi - lo) / step + 1e-9))
    points = [lo + k * step for k in range(n + 1)]
    if hi - points[-1] > 1e-9 * max(1.0, abs(hi)):
        points.append(hi)
    return points


def log_grid(lo: float, hi: float, per_decade: int) -> List[float]:
    '''Logarithmic grid from lo to hi inclusive with `per_decade` points per decade.'''
    if lo <= 0 or hi <= 0:
        raise GridSyntaxError(f"{lo}:{hi}:log{per_decade}", "logarithmic grids need positive endpoints")
    if per_decade < 1:
        raise GridSyntaxError(f"{lo}:{hi}:log{per_decade}", "points per decade must be at least 1")
    if hi < lo:
        raise GridSyntaxError(f"{lo}:{hi}:log{per_decade}", "hi must not be below lo")
    decades = math.log10(hi / lo)
    n = max(1, int(math.ceil(decades * per_decade - 1e-9)))
    return [float(x) for x in np.logspace(math.log10(lo), math.log10(hi), n + 1)]


def open_left(points: Sequence[float], bound: float) -> List[float]:
    '''Drops points at or below `bound` (for half-open domains such as nu > -1).'''
    return [p for p in points if p > bound]


def parse_grid(spec: str) -> List[float]:
    '''
    Parses a grid specification into a sorted list of floats.

    Args:
        spec (str): Grid text in one of the forms documented in this module.

    Returns:
        list[float]: The grid points in increasing order.

    Raises:
        GridSyntaxError: If the text is malformed.
    '''
    text = spec.strip()
    if not text:
        raise GridSyntaxError(spec, "empty grid")
    try:
        if "," in text:
            return sorted(float(part) for part in text.split(","))
        parts = text.split(":")
        if len(parts) == 1:
            return [float(parts[0])]
        if len(parts) == 2:
            lo, hi = float(parts[0]), float(parts[1])
            if hi < lo:
                raise GridSyntaxError(spec, "hi must not be below lo")
            return [lo, hi] if hi > lo else [lo]
        if len(parts) == 3:
            lo, hi, step = float(parts[0]), float(parts[1]), parts[2].strip()
            if step.lower().startswith("log"):
                return log_grid(lo, hi, int(step[3:]))
            return linear_grid(lo, hi, float(step))
    except GridSyntaxError as exc:
        # report the text as typed, not the re-formatted numbers
        raise GridSyntaxError(spec, exc.reason) from None
    except ValueError as exc:
        raise GridSyntaxError(spec, str(exc)) from exc
    raise GridSyntaxError(spec, "expected lo:hi:step, lo:hi:logN, lo:hi, a,b,c or a single value")
