"""Normed sets over the field with one element, at finite support.

Submodules: ``normcore`` (finite semi-normed sets), ``monoids`` (geometric
monoids and norm families), ``scalars`` (ground rings), ``basechange``,
``perfectoid`` (Puiseux polynomials), ``witt`` (Witt vectors and their norms),
``spectrum`` (points of the spectrum of Z) and ``cli``.
"""

from .errors import (
    CounterexampleFound,
    DivisionByZero,
    F1AnError,
    InternalError,
    InvalidElement,
    InvalidNorm,
    InvalidRadii,
    LatticeOverflow,
    NotBounded,
    PrecisionExhausted,
    TagMismatch,
    TooLarge,
    Unbounded,
    Unsupported,
)
from .numeric import NormValue

__version__ = "0.1.0"

__all__ = [
    "CounterexampleFound",
    "DivisionByZero",
    "F1AnError",
    "InternalError",
    "InvalidElement",
    "InvalidNorm",
    "InvalidRadii",
    "LatticeOverflow",
    "NormValue",
    "NotBounded",
    "PrecisionExhausted",
    "TagMismatch",
    "TooLarge",
    "Unbounded",
    "Unsupported",
]
