"""Multivariate rational functions as numerator/denominator coefficient maps.

This is a second representation of a potential, independent of the
expression tree: it differentiates with the quotient rule on expanded
polynomials.  It is used to certify the Euler identity and to cross-check
tree derivatives exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .expr import Add, Const, Expr, Mul, PoleError, Pow, Var

Monomial = tuple[int, ...]


class MPoly:
    """Polynomial in n variables: ``{exponent tuple: Fraction}``."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: dict[Monomial, Fraction] | None = None):
        self.n = n
        self.terms = {m: Fraction(c) for m, c in (terms or {}).items() if c}

    @classmethod
    def constant(cls, n: int, c) -> "MPoly":
        return cls(n, {(0,) * n: Fraction(c)})

    @classmethod
    def variable(cls, n: int, index: int) -> "MPoly":
        e = [0] * n
        e[index - 1] = 1
        return cls(n, {tuple(e): Fraction(1)})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        return isinstance(other, MPoly) and self.terms == other.terms

    def __add__(self, other: "MPoly") -> "MPoly":
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return MPoly(self.n, out)

    def __neg__(self) -> "MPoly":
        return MPoly(self.n, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "MPoly") -> "MPoly":
        return self + (-other)

    def __mul__(self, other) -> "MPoly":
        if not isinstance(other, MPoly):
            return MPoly(self.n, {m: c * other for m, c in self.terms.items()})
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = out.get(m, 0) + c1 * c2
        return MPoly(self.n, out)

    def __pow__(self, k: int) -> "MPoly":
        out = MPoly.constant(self.n, 1)
        for _ in range(k):
            out = out * self
        return out

    def derivative(self, index: int) -> "MPoly":
        out: dict[Monomial, Fraction] = {}
        v = index - 1
        if not 0 <= v < self.n:
            return MPoly(self.n)
        for m, c in self.terms.items():
            if m[v]:
                e = list(m)
                e[v] -= 1
                out[tuple(e)] = c * m[v]
        return MPoly(self.n, out)

    def homogeneous_degree(self) -> int | None:
        degs = {sum(m) for m in self.terms}
        return degs.pop() if len(degs) == 1 else None

    def __call__(self, point):
        total = 0
        for m, c in self.terms.items():
            v = c
            for x, e in zip(point, m):
                if e:
                    v = v * x**e
            total = total + v
        return total

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in sorted(self.terms.items(), reverse=True):
            mono = "*".join(f"q{i + 1}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(m) if e)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def _min_exponents(p: MPoly) -> list[int]:
    return [min(m[v] for m in p.terms) for v in range(p.n)]


@dataclass(frozen=True)
class RatFunc:
    """``num/den``; common monomial factors are cancelled on construction."""

    num: MPoly
    den: MPoly

    def __post_init__(self):
        if self.num.is_zero():
            object.__setattr__(self, "den", MPoly.constant(self.num.n, 1))
            return
        shift = [min(a, b) for a, b in zip(_min_exponents(self.num), _min_exponents(self.den))]
        if any(shift):
            for name in ("num", "den"):
                p = getattr(self, name)
                terms = {tuple(e - s for e, s in zip(m, shift)): c for m, c in p.terms.items()}
                object.__setattr__(self, name, MPoly(p.n, terms))

    @classmethod
    def from_poly(cls, p: MPoly) -> "RatFunc":
        return cls(p, MPoly.constant(p.n, 1))

    def __add__(self, other: "RatFunc") -> "RatFunc":
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    def __neg__(self) -> "RatFunc":
        return RatFunc(-self.num, self.den)

    def __sub__(self, other: "RatFunc") -> "RatFunc":
        return self + (-other)

    def __mul__(self, other: "RatFunc") -> "RatFunc":
        return RatFunc(self.num * other.num, self.den * other.den)

    def inverse(self) -> "RatFunc":
        if self.num.is_zero():
            raise PoleError("division by the zero function")
        return RatFunc(self.den, self.num)

    def __pow__(self, k: int) -> "RatFunc":
        if k < 0:
            return self.inverse() ** (-k)
        return RatFunc(self.num**k, self.den**k)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def derivative(self, index: int) -> "RatFunc":
        n, d = self.num, self.den
        dn, dd = n.derivative(index), d.derivative(index)
        if dd.is_zero():
            return RatFunc(dn, d)
        return RatFunc(dn * d - n * dd, d * d)

    def homogeneous_degree(self) -> int | None:
        if self.num.is_zero():
            return None
        a, b = self.num.homogeneous_degree(), self.den.homogeneous_degree()
        if a is None or b is None:
            return None
        return a - b

    def __call__(self, point):
        d = self.den(point)
        if d == 0:
            raise PoleError("denominator vanishes")
        return self.num(point) / d

    def __str__(self) -> str:
        if self.den.homogeneous_degree() == 0 and len(self.den.terms) == 1:
            c = next(iter(self.den.terms.values()))
            return str(self.num * (1 / c))
        return f"({self.num})/({self.den})"


def from_expr(e: Expr, n: int) -> RatFunc:
    if isinstance(e, Const):
        return RatFunc.from_poly(MPoly.constant(n, e.value))
    if isinstance(e, Var):
        return RatFunc.from_poly(MPoly.variable(n, e.index))
    if isinstance(e, Add):
        out = from_expr(e.terms[0], n)
        for t in e.terms[1:]:
            out = out + from_expr(t, n)
        return out
    if isinstance(e, Mul):
        out = from_expr(e.factors[0], n)
        for f in e.factors[1:]:
            out = out * from_expr(f, n)
        return out
    if isinstance(e, Pow):
        return from_expr(e.base, n) ** e.exponent
    raise TypeError(type(e))


def euler_defect(V: RatFunc) -> RatFunc:
    """``sum_i q_i dV/dq_i + V``; zero exactly when V is homogeneous of degree -1."""
    n = V.num.n
    out = V
    for i in range(1, n + 1):
        out = out + RatFunc.from_poly(MPoly.variable(n, i)) * V.derivative(i)
    return out
