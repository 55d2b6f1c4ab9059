"""Exact complex numbers with rational real and imaginary parts."""

from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational
from typing import Union

Exact = Union[Fraction, "Gaussian"]
Scalar = Union[Fraction, "Gaussian", complex, float]


class Gaussian:
    """``re + im*i`` with Fraction parts.  Immutable."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("Gaussian is immutable")

    @staticmethod
    def lift(x) -> "Gaussian":
        if isinstance(x, Gaussian):
            return x
        if isinstance(x, (int, Rational)):
            return Gaussian(x)
        raise TypeError(f"cannot lift {type(x).__name__} exactly")

    def simplify(self) -> Exact:
        """Drop to a Fraction when the imaginary part vanishes."""
        return self.re if not self.im else self

    def conjugate(self) -> "Gaussian":
        return Gaussian(self.re, -self.im)

    def norm2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __bool__(self) -> bool:
        return bool(self.re or self.im)

    def __eq__(self, other) -> bool:
        try:
            o = Gaussian.lift(other)
        except TypeError:
            return complex(self) == other
        return self.re == o.re and self.im == o.im

    def __hash__(self) -> int:
        return hash(self.re) if not self.im else hash((self.re, self.im))

    def __repr__(self) -> str:
        return f"Gaussian({self.re}, {self.im})"

    def __str__(self) -> str:
        if not self.im:
            return str(self.re)
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}*i"

    def _coerce(self, other):
        if isinstance(other, (complex, float)):
            return None
        return Gaussian.lift(other)

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return complex(self) + other
        return Gaussian(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self) -> "Gaussian":
        return Gaussian(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return complex(self) * other
        return Gaussian(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return complex(self) / other
        n = o.norm2()
        if not n:
            raise ZeroDivisionError("Gaussian division by zero")
        return self * Gaussian(o.re / n, -o.im / n)

    def __rtruediv__(self, other):
        return Gaussian.lift(other) / self if not isinstance(other, (complex, float)) else other / complex(self)

    def __pow__(self, n: int):
        if not isinstance(n, int):
            raise TypeError("integer exponents only")
        if n < 0:
            return Gaussian(1) / (self ** (-n))
        out, base = Gaussian(1), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out


I = Gaussian(0, 1)

_NUM = r"[0-9]+(?:\.[0-9]*)?(?:[eE][+-]?[0-9]+)?(?:/[0-9]+)?"
_TERM = re.compile(rf"\s*([+-]?)\s*({_NUM})?\s*(\*\s*i|i)?\s*")


def _parse_real(text: str) -> Fraction:
    # Fraction accepts "a/b", integers and decimal strings exactly
    return Fraction(text)


def parse_number(text: str) -> tuple[Exact, bool]:
    """Parse ``"a"``, ``"a/b"``, ``"re+im*i"``, ``"2.5-0.5i"`` and the like.

    Returns the exact value and whether the input used decimal notation.
    Decimals are converted exactly; the flag lets callers switch to
    floating-point mode for them.
    """
    s = text.strip().replace(" ", "")
    if not s:
        raise ValueError("empty number")
    pos = 0
    re_part, im_part = Fraction(0), Fraction(0)
    decimal = False
    seen = 0
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos or not (m.group(2) or m.group(3)):
            raise ValueError(f"cannot parse number {text!r}")
        sign, mag, unit = m.groups()
        if seen and not sign:
            raise ValueError(f"missing operator in {text!r}")
        value = _parse_real(mag) if mag else Fraction(1)
        decimal = decimal or bool(mag and ("." in mag or "e" in mag.lower()))
        if sign == "-":
            value = -value
        if unit:
            im_part += value
        else:
            re_part += value
        pos = m.end()
        seen += 1
    return Gaussian(re_part, im_part).simplify(), decimal


def to_complex(x) -> complex:
    return complex(x)


def is_exact(x) -> bool:
    return isinstance(x, (Gaussian, Fraction, int))
