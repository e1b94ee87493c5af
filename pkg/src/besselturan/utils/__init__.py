"""
besselturan utility modules.

These utilities hold the configuration record, the error types and the grid syntax shared by every
besselturan module. Verdicts, reports and the worker pool are imported from their own modules.
"""

# Core utilities
from .errors import (BesselTuranError, DomainError, EvaluationOverflowError, EvaluationUnderflowError,
                     ConvergenceError, PrecisionLossError, GridSyntaxError)
from .config import Settings, get_settings, load_settings
from .grids import parse_grid, linear_grid, log_grid

__all__ = [
    'BesselTuranError', 'DomainError', 'EvaluationOverflowError', 'EvaluationUnderflowError',
    'ConvergenceError', 'PrecisionLossError', 'GridSyntaxError',
    'Settings', 'get_settings', 'load_settings',
    'parse_grid', 'linear_grid', 'log_grid',
]
