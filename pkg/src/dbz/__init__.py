"""Completed zeta and chi4 L-functions, their critical-line zeros, and
de Branges positivity checks."""

from .completed import LFunctionKind, completed, completed_deriv, debranges_E, xi, xi4
from .positivity import gram_check, herglotz_ratio, kernel_positivity, scan_herglotz
from .scaled import ScaledComplex
from .special import EvalParams
from .zeros import ZeroRecord, first_zeros, locate_zero_near, nth_zero

__version__ = "0.1.0"

__all__ = [
    "EvalParams",
    "LFunctionKind",
    "ScaledComplex",
    "ZeroRecord",
    "completed",
    "completed_deriv",
    "debranges_E",
    "first_zeros",
    "gram_check",
    "herglotz_ratio",
    "kernel_positivity",
    "locate_zero_near",
    "nth_zero",
    "scan_herglotz",
    "xi",
    "xi4",
]
