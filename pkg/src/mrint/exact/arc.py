"""Elements of Q(t)[L] with L = arctanh(1/t) and denominators powers of t^2 - 1.

Every integrand met when studying the second variational equation lives in
this ring: products of the polynomial solutions ``P_i`` and of the
multivalued solutions ``Q_i = eps_i P_i L + W_i / (t^2 - 1)``.  The ring is
closed under differentiation since ``dL/dt = -1/(t^2 - 1)``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterator, Union

from .laurent import TruncationError, kernel
from .poly import ONE, S, ZERO, Poly

Coefficient = Union[int, Fraction, Poly]

_TWO_T = Poly((0, 2))


def _reduce(num: Poly, m: int) -> tuple[Poly, int]:
    """Cancel factors of t^2 - 1 between numerator and denominator."""
    while m > 0 and num and num(1) == 0 and num(-1) == 0:
        num = num.exact_div(S)
        m -= 1
    return num, m


class ArcElement:
    """``sum_k num_k(t) / (t^2-1)^(m_k) * L^k``.

    Immutable.  ``terms`` maps the power ``k`` of L to ``(num_k, m_k)``; zero
    coefficients are dropped and each pair is reduced.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: dict[int, tuple[Poly, int]] | None = None):
        clean = {}
        for k, (num, m) in (terms or {}).items():
            if k < 0 or m < 0:
                raise ValueError("negative L power or denominator exponent")
            if num:
                clean[k] = _reduce(num, m)
        self.terms = dict(sorted(clean.items()))

    # -- constructors ------------------------------------------------------

    @classmethod
    def poly(cls, p: Coefficient, k: int = 0) -> "ArcElement":
        if not isinstance(p, Poly):
            p = Poly.constant(p)
        return cls({k: (p, 0)})

    @classmethod
    def rational(cls, num: Coefficient, m: int, k: int = 0) -> "ArcElement":
        """``num / (t^2-1)^m * L^k``."""
        if not isinstance(num, Poly):
            num = Poly.constant(num)
        return cls({k: (num, m)})

    @classmethod
    def arctanh(cls) -> "ArcElement":
        return cls({1: (ONE, 0)})

    @classmethod
    def zero(cls) -> "ArcElement":
        return cls()

    # -- queries -------------------------------------------------------------

    @property
    def l_degree(self) -> int:
        return max(self.terms, default=-1)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def coefficient(self, k: int) -> tuple[Poly, int]:
        return self.terms.get(k, (ZERO, 0))

    def max_denominator(self) -> int:
        return max((m for _, m in self.terms.values()), default=0)

    def max_numerator_degree(self) -> int:
        return max((num.degree for num, _ in self.terms.values()), default=-1)

    def is_polynomial(self) -> bool:
        """True when the element lies in Q[t] (no L, no denominator)."""
        return all(k == 0 and m == 0 for k, (_, m) in self.terms.items())

    def __iter__(self) -> Iterator[tuple[int, Poly, int]]:
        for k, (num, m) in self.terms.items():
            yield k, num, m

    def __eq__(self, other) -> bool:
        if not isinstance(other, ArcElement):
            other = ArcElement.poly(other)
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(tuple(self.terms.items()))

    def __repr__(self) -> str:
        if not self.terms:
            return "ArcElement(0)"
        parts = []
        for k, num, m in self:
            s = f"({num})"
            if m:
                s += f"/(t^2-1)^{m}" if m > 1 else "/(t^2-1)"
            if k:
                s += "*L" if k == 1 else f"*L^{k}"
            parts.append(s)
        return "ArcElement(" + " + ".join(parts) + ")"

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other) -> "ArcElement":
        if not isinstance(other, ArcElement):
            other = ArcElement.poly(other)
        out = dict(self.terms)
        for k, (num, m) in other.terms.items():
            if k not in out:
                out[k] = (num, m)
                continue
            n0, m0 = out[k]
            top = max(m0, m)
            out[k] = (n0 * S ** (top - m0) + num * S ** (top - m), top)
        return ArcElement(out)

    __radd__ = __add__

    def __neg__(self) -> "ArcElement":
        return ArcElement({k: (-num, m) for k, num, m in self})

    def __sub__(self, other) -> "ArcElement":
        if not isinstance(other, ArcElement):
            other = ArcElement.poly(other)
        return self + (-other)

    def __rsub__(self, other) -> "ArcElement":
        return (-self) + other

    def __mul__(self, other) -> "ArcElement":
        if isinstance(other, (int, Fraction, Poly)):
            return ArcElement({k: (num * other, m) for k, num, m in self})
        if not isinstance(other, ArcElement):
            return NotImplemented
        out: dict[int, tuple[Poly, int]] = {}
        for k1, n1, m1 in self:
            for k2, n2, m2 in other:
                prod = (n1 * n2, m1 + m2)
                k = k1 + k2
                if k in out:
                    n0, m0 = out[k]
                    top = max(m0, prod[1])
                    out[k] = (n0 * S ** (top - m0) + prod[0] * S ** (top - prod[1]), top)
                else:
                    out[k] = prod
        return ArcElement(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "ArcElement":
        result = ArcElement.poly(1)
        for _ in range(n):
            result = result * self
        return result

    def derivative(self) -> "ArcElement":
        """d/dt, using dL/dt = -1/(t^2-1)."""
        out = ArcElement()
        for k, num, m in self:
            # d(num/s^m) = (num' s - m (2t) num) / s^(m+1)
            dnum = num.derivative() * S - _TWO_T * num * m
            out = out + ArcElement.rational(dnum, m + 1, k)
            if k:
                out = out + ArcElement.rational(-num * k, m + 1, k - 1)
        return out

    def substitute_l(self, k: int) -> "ArcElement":
        """The coefficient of L^k, as an element with no L."""
        num, m = self.coefficient(k)
        return ArcElement.rational(num, m)

    def __call__(self, t: complex) -> complex:
        """Numeric value with the principal branch of arctanh(1/t)."""
        L = cmath.atanh(1 / t) if isinstance(t, complex) or abs(t) <= 1 else math.atanh(1 / t)
        s = t * t - 1
        return sum(complex(num(t)) / s**m * L**k for k, num, m in self)


# -- operations -----------------------------------------------------------


def truncation_depth(F: ArcElement) -> int:
    """Series depth used for residues: generous bound from the degrees."""
    return max(F.max_numerator_degree(), 0) + 2 * F.max_denominator() + 4


def residue_at_infinity(F: ArcElement) -> Fraction:
    """Coefficient of t^-1 in the expansion of F at t = infinity.

    No sign flip: this is the plain series coefficient, so the residue of
    ``t/(t^2-1)`` is 1 and that of ``L`` is 1.
    """
    depth = truncation_depth(F)
    total = Fraction(0)
    for k, num, m in F:
        ker = kernel(k, m, depth)
        need = num.degree + 1
        if need > ker.depth:
            raise TruncationError(f"need t^-{need}, kernel depth {ker.depth}")
        for d, c in enumerate(num.coeffs):
            if c:
                total += c * ker.coeff(d + 1)
    return total


def shift_multivaluation(F: ArcElement) -> list[ArcElement]:
    """Coefficients of alpha^a in F(t, L + alpha), for a = 0..l_degree."""
    deg = F.l_degree
    if deg < 0:
        return [ArcElement()]
    out: list[dict[int, tuple[Poly, int]]] = [{} for _ in range(deg + 1)]
    for k, num, m in F:
        for a in range(k + 1):
            term = (num * comb(k, a), m)
            slot = out[a]
            j = k - a
            if j in slot:
                n0, m0 = slot[j]
                top = max(m0, m)
                slot[j] = (n0 * S ** (top - m0) + term[0] * S ** (top - m), top)
            else:
                slot[j] = term
    return [ArcElement(d) for d in out]


def residue_polynomial(F: ArcElement) -> list[Fraction]:
    """Res_{t=oo} F(t, L + alpha) as coefficients of alpha^0, alpha^1, ..."""
    return [residue_at_infinity(G) for G in shift_multivaluation(F)]


class NotClosedError(ArithmeticError):
    """The antiderivative needs ln(t^2-1) beyond a constant multiple."""


@dataclass(frozen=True)
class Antiderivative:
    """``body + log_coefficient * ln(t^2 - 1)``."""

    body: ArcElement
    log_coefficient: Fraction

    def derivative(self) -> ArcElement:
        return self.body.derivative() + ArcElement.rational(_TWO_T * self.log_coefficient, 1)


def _integrate_rational(num: Poly, m: int) -> tuple[ArcElement, Fraction, Fraction]:
    """Integrate ``num / (t^2-1)^m``.

    Returns ``(R, a, b)`` with the antiderivative ``R + a ln(t^2-1) + b L``,
    R rational.  Hermite reduction against the squarefree factor t^2 - 1.
    """
    rational = ArcElement()
    while m > 1:
        # num = U' s - (m-1) U s' + V s, with U = -num t / (2(m-1)) mod s
        U = (num * Poly((0, -1)) / (2 * (m - 1))) % S
        V = (num - U.derivative() * S + _TWO_T * U * (m - 1)).exact_div(S)
        rational = rational + ArcElement.rational(U, m - 1)
        num, m = V, m - 1
    if m == 0:
        return rational + ArcElement.poly(num.integral()), Fraction(0), Fraction(0)
    q, r = num.divmod(S)
    # r = a t + b: int a t/s = a/2 ln s, int b/s = -b L
    rational = rational + ArcElement.poly(q.integral())
    return rational, r[1] / 2, -r[0]


def antiderivative(F: ArcElement) -> Antiderivative:
    """Integrate F inside Q(t)[L] + Q ln(t^2-1).

    Works down from the highest power of L, integrating by parts; each
    step fixes the integration constant of the level above so that no stray
    L appears.  A logarithm at any level other than L^0 cannot be absorbed
    and raises :class:`NotClosedError`.
    """
    K = F.l_degree
    if K < 0:
        return Antiderivative(ArcElement(), Fraction(0))
    g: dict[int, ArcElement] = {}
    consts: dict[int, Fraction] = {}
    log_coefficient = Fraction(0)
    upper = ArcElement()  # g_{k+1} without its constant
    for k in range(K, -1, -1):
        num, m = F.coefficient(k)
        h = ArcElement.rational(num, m) + upper * ArcElement.rational(k + 1, 1)
        R = ArcElement()
        a = b = Fraction(0)
        for _, hn, hm in h:
            r_part, a_part, b_part = _integrate_rational(hn, hm)
            R, a, b = R + r_part, a + a_part, b + b_part
        consts[k + 1] = b / (k + 1)
        if a:
            if k > 0:
                raise NotClosedError(f"ln(t^2-1)*L^{k} term with coefficient {a}")
            log_coefficient = a
        g[k] = R
        upper = R
    body = ArcElement()
    for k in range(K + 1, -1, -1):
        gk = g.get(k, ArcElement()) + consts.get(k, Fraction(0))
        body = body + gk * ArcElement.poly(1, k)
    return Antiderivative(body, log_coefficient)
