"""Solution basis of the scalar variational equation.

After the variable changes that send the homothetic orbit to the t-line, each
diagonal component of the first variational equation with eigenvalue index
``i`` becomes

    1/2 (t^2-1) y'' + 2 t y' - 1/2 (i-1)(i+2) y = 0.

For ``i >= 1`` a polynomial solution ``P_i`` is given by the Rodrigues-type
formula ``P_i = D^(i-1) (t^2-1)^i / (t^2-1)`` and the second solution is

    Q_i = P_i * int dt / ((t^2-1)^2 P_i^2) = eps_i P_i L + W_i / (t^2-1)

with the antiderivative chosen to vanish at t = infinity.  Index 0 is
special: ``P_0 = t/(t^2-1)`` and ``Q_0 = 1/(t^2-1)`` are both rational.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial

from .exact import ArcElement, Poly, S, T

__all__ = [
    "BasisPair",
    "basis_pair",
    "epsilon_closed_form",
    "epsilon_from_pole",
    "ode_residual",
    "recurrence_residual_P",
    "rodrigues",
]


@dataclass(frozen=True)
class BasisPair:
    """``P_i``, ``W_i`` and ``eps_i`` for one index.

    ``p`` is stored as an :class:`ArcElement` because ``P_0`` is not a
    polynomial; for ``i >= 1`` it has no L and no denominator.
    """

    index: int
    p: ArcElement
    w: Poly
    epsilon: Fraction

    @property
    def p_poly(self) -> Poly:
        if self.index == 0:
            raise ValueError("P_0 = t/(t^2-1) is not a polynomial")
        return self.p.coefficient(0)[0]

    def q(self) -> ArcElement:
        """``Q_i = eps_i P_i L + W_i/(t^2-1)``."""
        return self.p * ArcElement.poly(self.epsilon, 1) + ArcElement.rational(self.w, 1)

    def q_normalized(self) -> ArcElement:
        """``Q_i / eps_i = P_i L + W_i / (eps_i (t^2-1))``; ``Q_0`` itself for i = 0."""
        if self.index == 0:
            return self.q()
        return self.p * ArcElement.arctanh() + ArcElement.rational(self.w / self.epsilon, 1)

    def shifted(self) -> ArcElement:
        """``(t^2-1) (Q_i/eps_i + alpha P_i)`` with alpha folded into L.

        Substituting L -> L + alpha afterwards reproduces the alpha terms, so
        products of these are polynomial in t and L.
        """
        if self.index == 0:
            raise ValueError("index 0 carries no multivaluation")
        P = self.p_poly
        return ArcElement.poly(P * S, 1) + ArcElement.poly(self.w / self.epsilon)


def rodrigues(i: int) -> Poly:
    """``P_i(t) = 1/(t^2-1) d^(i-1)/dt^(i-1) (t^2-1)^i`` for i >= 1."""
    if i < 1:
        raise ValueError("Rodrigues formula needs i >= 1")
    return (S**i).derivative(i - 1).exact_div(S)


def _solve_companion(P: Poly, i: int) -> Poly:
    """Polynomial U of degree <= i with P L + U/(t^2-1) solving the ODE.

    Substituting the ansatz reduces the ODE to
    ``1/2 (t^2-1) U'' - 1/2 i(i+1) U = (t^2-1) P' + t P``, which is
    triangular in the coefficients of U.
    """
    rhs = S * P.derivative() + T * P
    u = [Fraction(0)] * (i + 3)
    kk = i * (i + 1)
    for n in range(i, -1, -1):
        # t^n: 1/2 n(n-1) u_n - 1/2 kk u_n - 1/2 (n+2)(n+1) u_{n+2} = rhs_n
        lhs_other = -Fraction((n + 2) * (n + 1), 2) * u[n + 2]
        u[n] = (rhs[n] - lhs_other) / Fraction(n * (n - 1) - kk, 2)
    return Poly(u[: i + 1])


def _wronskian_inverse(P: Poly, U: Poly) -> Fraction:
    """``(t^2-1)^2 * Wronskian(P, P L + U/(t^2-1))``, a nonzero constant."""
    w = S * (-P * P + P * U.derivative() - P.derivative() * U) - Poly((0, 2)) * P * U
    if w.degree != 0:
        raise ArithmeticError(f"Wronskian is not constant: {w}")
    return w[0]


@lru_cache(maxsize=None)
def basis_pair(i: int) -> BasisPair:
    if i < 0:
        raise ValueError("index must be nonnegative")
    if i == 0:
        return BasisPair(0, ArcElement.rational(T, 1), Poly((1,)), Fraction(0))
    P = rodrigues(i)
    U = _solve_companion(P, i)
    eps = 1 / _wronskian_inverse(P, U)
    return BasisPair(i, ArcElement.poly(P), U * eps, eps)


def epsilon_closed_form(i: int) -> Fraction:
    """``4^-i i (i+1) / i!^2``."""
    if i < 1:
        raise ValueError("closed form holds for i >= 1")
    return Fraction(i * (i + 1), 4**i * factorial(i) ** 2)


def epsilon_from_pole(i: int) -> Fraction:
    """``eps_i`` from the double pole of ``1/((t^2-1)^2 P_i^2)`` at t = 1.

    The residue r there contributes ``r ln(t-1) - r ln(t+1) = -2 r L`` to
    the antiderivative (the integrand is even), hence ``eps_i = -2 r``.
    """
    P = rodrigues(i)
    # r = d/dt [ (t+1)^-2 P^-2 ] at t = 1
    p1, dp1 = P(Fraction(1)), P.derivative()(Fraction(1))
    r = -2 / (Fraction(2) ** 3 * p1**2) - 2 * dp1 / (Fraction(2) ** 2 * p1**3)
    return -2 * r


def ode_residual(y: ArcElement, i: int) -> ArcElement:
    """``1/2 (t^2-1) y'' + 2 t y' - 1/2 (i-1)(i+2) y``."""
    d1 = y.derivative()
    d2 = d1.derivative()
    return (
        d2 * ArcElement.poly(S / 2)
        + d1 * ArcElement.poly(Poly((0, 2)))
        - y * Fraction((i - 1) * (i + 2), 2)
    )


def recurrence_residual_P(n: int, family=None) -> Poly:
    """``(4n^3+12n^2+8n) P_n - (4n^2+14n+12) t P_(n+1) + (n+3) P_(n+2)``."""
    if n < 1:
        raise ValueError("recurrence links indices n >= 1")
    family = family or rodrigues
    return (
        family(n) * (4 * n**3 + 12 * n**2 + 8 * n)
        - T * family(n + 1) * (4 * n**2 + 14 * n + 12)
        + family(n + 2) * (n + 3)
    )
