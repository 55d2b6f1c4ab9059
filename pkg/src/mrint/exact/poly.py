"""Dense univariate polynomials in ``t`` over the rationals.

A polynomial is an immutable tuple of :class:`fractions.Fraction` indexed by
degree, with trailing zeros stripped, so ``Poly((1, 0, -1))`` is ``1 - t^2``
and ``Poly(())`` is zero.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence, Union

Scalar = Union[int, Fraction]


def _strip(coeffs: list) -> tuple:
    n = len(coeffs)
    while n and not coeffs[n - 1]:
        n -= 1
    return tuple(coeffs[:n])


class Poly:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Scalar] = ()):
        self.coeffs = _strip([Fraction(c) for c in coeffs])

    @classmethod
    def _raw(cls, coeffs: tuple) -> "Poly":
        p = object.__new__(cls)
        p.coeffs = coeffs
        return p

    @classmethod
    def monomial(cls, degree: int, coeff: Scalar = 1) -> "Poly":
        return cls([0] * degree + [coeff])

    @classmethod
    def constant(cls, c: Scalar) -> "Poly":
        return cls([c])

    # -- basic queries -------------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __getitem__(self, n: int) -> Fraction:
        if 0 <= n < len(self.coeffs):
            return self.coeffs[n]
        return Fraction(0)

    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == _strip([Fraction(other)])
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"Poly({[str(c) for c in self.coeffs]})"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for n in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[n]
            if not c:
                continue
            mono = "" if n == 0 else ("t" if n == 1 else f"t^{n}")
            if mono and c == 1:
                s = mono
            elif mono and c == -1:
                s = "-" + mono
            else:
                s = f"({c})*{mono}" if mono and c.denominator != 1 else (f"{c}*{mono}" if mono else str(c))
            terms.append(s)
        return " + ".join(terms).replace("+ -", "- ")

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            other = Poly.constant(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Poly._raw(_strip(out))

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._raw(tuple(-c for c in self.coeffs))

    def __sub__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            other = Poly.constant(other)
        return self + (-other)

    def __rsub__(self, other) -> "Poly":
        return (-self) + other

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            c = Fraction(other)
            if not c:
                return Poly._raw(())
            return Poly._raw(tuple(x * c for x in self.coeffs))
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly._raw(())
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if not x:
                continue
            for j, y in enumerate(b):
                out[i + j] += x * y
        return Poly._raw(_strip(out))

    __rmul__ = __mul__

    def __truediv__(self, c: Scalar) -> "Poly":
        c = Fraction(c)
        return Poly._raw(tuple(x / c for x in self.coeffs))

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = Poly.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def shift_degree(self, k: int) -> "Poly":
        """Multiply by ``t^k`` (k >= 0)."""
        if not self.coeffs:
            return self
        return Poly._raw((Fraction(0),) * k + self.coeffs)

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dv = other.coeffs
        lead = dv[-1]
        q = [Fraction(0)] * max(len(rem) - len(dv) + 1, 0)
        for k in range(len(rem) - len(dv), -1, -1):
            c = rem[k + len(dv) - 1] / lead
            q[k] = c
            if c:
                for i, d in enumerate(dv):
                    rem[k + i] -= c * d
        return Poly._raw(_strip(q)), Poly._raw(_strip(rem[: len(dv) - 1]))

    def __floordiv__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[1]

    def exact_div(self, other: "Poly") -> "Poly":
        q, r = self.divmod(other)
        if r:
            raise ArithmeticError(f"{other} does not divide {self}")
        return q

    # -- calculus and evaluation ---------------------------------------------

    def derivative(self, order: int = 1) -> "Poly":
        c = self.coeffs
        for _ in range(order):
            c = tuple(n * c[n] for n in range(1, len(c)))
        return Poly._raw(c)

    def integral(self) -> "Poly":
        """Antiderivative vanishing at t = 0."""
        if not self.coeffs:
            return self
        return Poly._raw((Fraction(0),) + tuple(c / (n + 1) for n, c in enumerate(self.coeffs)))

    def __call__(self, x):
        acc = 0 * x if not isinstance(x, int) else Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def definite_integral(self, lo: Scalar, hi: Scalar) -> Fraction:
        prim = self.integral()
        return prim(Fraction(hi)) - prim(Fraction(lo))

    def parity(self) -> int | None:
        """0 if even, 1 if odd, None if neither (zero counts as even)."""
        even = all(not c for c in self.coeffs[1::2])
        odd = all(not c for c in self.coeffs[0::2])
        if even:
            return 0
        if odd:
            return 1
        return None


T = Poly((0, 1))
ONE = Poly((1,))
ZERO = Poly(())
#: t^2 - 1, the only denominator factor that ever appears
S = Poly((-1, 0, 1))


def poly_from_roots(roots: Sequence[Scalar]) -> Poly:
    p = ONE
    for r in roots:
        p = p * Poly((-Fraction(r), 1))
    return p
