"""Exact arithmetic foundation: polynomials, Laurent tails, the arctanh ring."""

from fractions import Fraction

from .arc import (
    Antiderivative,
    ArcElement,
    NotClosedError,
    antiderivative,
    residue_at_infinity,
    residue_polynomial,
    shift_multivaluation,
    truncation_depth,
)
from .laurent import LaurentTail, TruncationError, arctanh_series
from .poly import ONE, S, T, ZERO, Poly

#: exact rationals are the standard library's
ExactRational = Fraction

__all__ = [
    "Antiderivative",
    "ArcElement",
    "ExactRational",
    "Fraction",
    "LaurentTail",
    "NotClosedError",
    "ONE",
    "Poly",
    "S",
    "T",
    "TruncationError",
    "ZERO",
    "antiderivative",
    "arctanh_series",
    "residue_at_infinity",
    "residue_polynomial",
    "shift_multivaluation",
    "truncation_depth",
]
