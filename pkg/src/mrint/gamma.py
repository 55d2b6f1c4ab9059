"""Exact Gamma values at half-integers and epsilon-regularized products.

Values are carried as ``rational * sqrt(pi)^k``.  A Gamma factor evaluated
at ``x + slope*eps`` is stored by its Laurent leading term in ``eps``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial


class InfiniteLimitError(ArithmeticError):
    pass


@dataclass(frozen=True)
class PiRational:
    """``value * sqrt(pi)^pi_half_power``."""

    value: Fraction
    pi_half_power: int = 0

    def __mul__(self, other: "PiRational") -> "PiRational":
        return PiRational(self.value * other.value, self.pi_half_power + other.pi_half_power)

    def __truediv__(self, other: "PiRational") -> "PiRational":
        return PiRational(self.value / other.value, self.pi_half_power - other.pi_half_power)

    def rational(self) -> Fraction:
        if self.value and self.pi_half_power:
            raise ArithmeticError(f"sqrt(pi)^{self.pi_half_power} does not cancel")
        return self.value

    def __float__(self) -> float:
        import math

        return float(self.value) * math.sqrt(math.pi) ** self.pi_half_power


def gamma_half_integer(x: Fraction) -> PiRational:
    """Exact Gamma(x) for x in (1/2)Z, x not a non-positive integer."""
    x = Fraction(x)
    if x.denominator == 1:
        n = x.numerator
        if n <= 0:
            raise ValueError(f"Gamma has a pole at {n}")
        return PiRational(Fraction(factorial(n - 1)))
    if x.denominator != 2:
        raise ValueError(f"{x} is not a half-integer")
    n = x - Fraction(1, 2)
    n = n.numerator
    if n >= 0:
        # Gamma(n + 1/2) = (2n)! / (4^n n!) sqrt(pi)
        return PiRational(Fraction(factorial(2 * n), 4**n * factorial(n)), 1)
    m = -n
    # Gamma(1/2 - m) = (-4)^m m! / (2m)! sqrt(pi)
    return PiRational(Fraction((-4) ** m * factorial(m), factorial(2 * m)), 1)


@dataclass(frozen=True)
class GammaFactor:
    """Leading behaviour ``leading * eps^pole_order`` as eps -> 0."""

    pole_order: int
    leading: PiRational

    def __mul__(self, other: "GammaFactor") -> "GammaFactor":
        return GammaFactor(self.pole_order + other.pole_order, self.leading * other.leading)

    def reciprocal(self) -> "GammaFactor":
        return GammaFactor(-self.pole_order, PiRational(Fraction(1)) / self.leading)

    def __truediv__(self, other: "GammaFactor") -> "GammaFactor":
        return self * other.reciprocal()

    def limit(self) -> PiRational:
        if self.pole_order > 0:
            return PiRational(Fraction(0))
        if self.pole_order < 0:
            raise InfiniteLimitError("product diverges as eps -> 0")
        return self.leading


def constant(value, pi_half_power: int = 0) -> GammaFactor:
    return GammaFactor(0, PiRational(Fraction(value), pi_half_power))


def gamma_regularized(argument, epsilon_slope=1) -> GammaFactor:
    """Gamma(argument + epsilon_slope * eps) to leading order in eps.

    At ``argument = -n`` (n >= 0 integer) this is ``(-1)^n / (n! slope eps)``.
    """
    x = Fraction(argument)
    if x.denominator == 1 and x <= 0:
        slope = Fraction(epsilon_slope)
        if not slope:
            raise ValueError("a pole needs a nonzero epsilon slope")
        n = -x.numerator
        return GammaFactor(-1, PiRational(Fraction((-1) ** n) / (factorial(n) * slope)))
    return GammaFactor(0, gamma_half_integer(x))


def closed_form_f_limit(i: int, j: int, k: int, with_inverse_gamma_eps: bool | None = None) -> Fraction:
    """The regularized Gamma-product value of the residue sequence.

    ``f(i,j,k) = 2^d i! j! k! G((d+1)/2) G(a/2) G(b/2) G(c/2)
    / (G((a+3)/2) G((b+3)/2) G((c+3)/2) G((d+4)/2))`` with
    ``a = -i+j+k``, ``b = i-j+k``, ``c = i+j-k``, ``d = i+j+k``, evaluated at
    ``(i+eps, j+eps, k+eps)``.  For odd ``d`` the value is
    ``lim 3/(8 pi) f``, the alpha^2 coefficient; for even ``d`` it is
    ``lim pi/16 f / Gamma(eps)``, the alpha coefficient.
    """
    if min(i, j, k) < 1:
        raise ValueError("closed form covers positive indices only")
    a, b, c, d = -i + j + k, i - j + k, i + j - k, i + j + k
    if with_inverse_gamma_eps is None:
        with_inverse_gamma_eps = d % 2 == 0
    h = Fraction(1, 2)
    num = constant(2**d)
    for n in (i, j, k):
        num = num * gamma_regularized(n + 1, 1)
    num = num * gamma_regularized(Fraction(d + 1, 2), 3 * h)
    for x in (a, b, c):
        num = num * gamma_regularized(Fraction(x, 2), h)
    den = gamma_regularized(Fraction(d + 4, 2), 3 * h)
    for x in (a, b, c):
        den = den * gamma_regularized(Fraction(x + 3, 2), h)
    f = num / den
    if with_inverse_gamma_eps:
        f = f * constant(Fraction(1, 16), 2) * gamma_regularized(0, 1).reciprocal()
    else:
        f = f * constant(Fraction(3, 8), -2)
    return f.limit().rational()


def _g(x) -> PiRational:
    return gamma_half_integer(Fraction(x))


def s11_even_closed_form(k: int) -> Fraction:
    """``S_{1,1,2+2k}``: ``-8 16^k G(k+3/2) G(k-1/2) G(k+2) G(k+1) / (G(k+4) G(k+5/2) sqrt(pi))``."""
    h = Fraction(1, 2)
    num = PiRational(Fraction(-8 * 16**k)) * _g(k + 3 * h) * _g(k - h) * _g(k + 2) * _g(k + 1)
    den = _g(k + 4) * _g(k + 5 * h) * PiRational(Fraction(1), 1)
    return (num / den).rational()


def zero_index_closed_form(i: int, moment: int) -> Fraction:
    """``S^1_{i,0}`` (moment 0) or ``S^2_{i,1}`` (moment 1) as printed."""
    g2 = factorial(i) ** 2
    if moment == 0:
        return Fraction(-2 * 4**i * g2, (i + 1) * (2 * i + 1) * i)
    if moment == 1:
        return Fraction(-4 * 4**i * g2, (2 * i + 1) * (2 * i + 3))
    raise ValueError("moment must be 0 or 1")


def jordan_closed_form(i: int) -> Fraction:
    """``-2 4^i i G(i)^2 / ((2i+1)(i+1))``; zero at i = 0."""
    if i == 0:
        return Fraction(0)
    return Fraction(-2 * 4**i * i * factorial(i - 1) ** 2, (2 * i + 1) * (i + 1))


def boundary_diagonal_closed_form(k: int) -> Fraction:
    """``3/4 4^k G(k-1/2) G(k+1)^2 / G(k+5/2)``: alpha^2 part of ``S_{1,k,k}``."""
    h = Fraction(1, 2)
    v = PiRational(Fraction(3 * 4**k, 4)) * _g(k - h) * _g(k + 1) * _g(k + 1) / _g(k + 5 * h)
    return v.rational()


def boundary_offdiagonal_closed_form(k: int) -> Fraction:
    """``-3/2 4^k G(k+1/2) G(k+3) G(k+1) / G(k+7/2)``: alpha^2 part of ``S_{1,k,k+2}``."""
    h = Fraction(1, 2)
    v = PiRational(Fraction(-3 * 4**k, 2)) * _g(k + h) * _g(k + 3) * _g(k + 1) / _g(k + 7 * h)
    return v.rational()
