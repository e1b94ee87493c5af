"""
besselturan - modified Bessel functions of real order and numerical checks of their Turan-type inequalities.

Key components can be imported directly from besselturan:
    from besselturan import OrderArg, eval_I, turan_scan
    # or
    import besselturan
    value = besselturan.eval_K(besselturan.OrderArg(0.5, 1.0))
"""

__version__ = "0.2.0"

# Core components
from .core import Kind, OrderArg, FuncValue, ScaledValue, eval_I, eval_K, eval_dI, eval_dK, eval_JY
from .turan import TuranLabel, turan_scan, counterexample_search
from .bounds import SandwichInterval, equivalence_audit
from .product import ProductValue, eval_P, conjecture_scan
from .order_props import OrderFunctionKind, logconvexity_check, cm_check
from .quadrature import QuadResult, integrate_semi_infinite

# Utility components
from .utils.config import Settings, get_settings
from .utils.report import ScanReport
from .utils.verdicts import InequalityVerdict, Outcome

__all__ = [
    '__version__',
    'Kind', 'OrderArg', 'FuncValue', 'ScaledValue',
    'eval_I', 'eval_K', 'eval_dI', 'eval_dK', 'eval_JY', 'eval_P',
    'TuranLabel', 'turan_scan', 'counterexample_search',
    'SandwichInterval', 'equivalence_audit',
    'ProductValue', 'conjecture_scan',
    'OrderFunctionKind', 'logconvexity_check', 'cm_check',
    'QuadResult', 'integrate_semi_infinite',
    'Settings', 'get_settings',
    'ScanReport', 'InequalityVerdict', 'Outcome',
]
