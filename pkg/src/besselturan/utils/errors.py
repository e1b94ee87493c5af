'''
Exception types raised across besselturan.

Every exception derives from BesselTuranError and from the builtin exception a caller would
naturally catch for the same situation (ValueError for bad input, OverflowError for values that do
not fit a double, ...), so existing `except ValueError` code keeps working.
'''


class BesselTuranError(Exception):
    '''Base class for all besselturan errors.'''


class DomainError(BesselTuranError, ValueError):
    '''
    An argument lies outside the domain of the requested operation.

    Attributes:
        parameter (str): Name of the offending parameter.
        value: The rejected value.
    '''
    def __init__(self, parameter: str, value, requirement: str) -> None:
        self.parameter = parameter
        self.value = value
        self.requirement = requirement
        super().__init__(f"{parameter}={value!r} is invalid: {requirement}")


class EvaluationOverflowError(BesselTuranError, OverflowError):
    '''The unscaled value exceeds the largest double; use the scaled form instead.'''


class EvaluationUnderflowError(BesselTuranError, ArithmeticError):
    '''The unscaled value underflows to zero; use the scaled form instead.'''


class ConvergenceError(BesselTuranError, RuntimeError):
    '''
    An iterative algorithm stopped before meeting its tolerance.

    Attributes:
        partial: The best available estimate when the iteration stopped (may be None).
    '''
    def __init__(self, message: str, partial=None) -> None:
        self.partial = partial
        super().__init__(message)


class PrecisionLossError(BesselTuranError, ArithmeticError):
    '''Cancellation left fewer certified digits than the oracle guarantees.'''


class GridSyntaxError(BesselTuranError, ValueError):
    '''A grid specification could not be parsed.'''
    def __init__(self, spec: str, reason: str) -> None:
        self.spec = spec
        self.reason = reason
        super().__init__(f"bad grid {spec!r}: {reason}")
