"""Truncated Laurent expansions at t = infinity."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .poly import Poly, ZERO


class TruncationError(ArithmeticError):
    """A requested coefficient lies beyond the computed depth."""


class LaurentTail:
    """``poly(t) + sum_{e=1..depth} tail[e-1] * t^(-e)``.

    Coefficients of t^(-e) for e > depth are unknown, not zero.
    """

    __slots__ = ("poly", "tail")

    def __init__(self, poly: Poly = ZERO, tail=()):
        self.poly = poly
        self.tail = tuple(Fraction(c) for c in tail)

    @property
    def depth(self) -> int:
        return len(self.tail)

    def coeff(self, e: int) -> Fraction:
        """Coefficient of ``t^(-e)``; negative ``e`` reads the polynomial part."""
        if e <= 0:
            return self.poly[-e]
        if e > len(self.tail):
            raise TruncationError(f"coefficient of t^-{e} requested, depth is {len(self.tail)}")
        return self.tail[e - 1]

    def __repr__(self) -> str:
        return f"LaurentTail(poly={self.poly}, tail={[str(c) for c in self.tail]})"

    def __mul__(self, other: "LaurentTail") -> "LaurentTail":
        top_a = max(self.poly.degree, 0)
        top_b = max(other.poly.degree, 0)
        depth = min(self.depth - top_b, other.depth - top_a)
        if depth < 0:
            raise TruncationError("product of tails has no reliable coefficients")
        # index by exponent of t: ex in [-depth, deg]
        a = {n: c for n, c in enumerate(self.poly.coeffs) if c}
        a.update({-(e + 1): c for e, c in enumerate(self.tail) if c})
        b = {n: c for n, c in enumerate(other.poly.coeffs) if c}
        b.update({-(e + 1): c for e, c in enumerate(other.tail) if c})
        out: dict[int, Fraction] = {}
        for x, cx in a.items():
            for y, cy in b.items():
                ex = x + y
                if ex >= -depth:
                    out[ex] = out.get(ex, 0) + cx * cy
        deg = max([ex for ex in out if ex >= 0], default=-1)
        poly = Poly([out.get(n, 0) for n in range(deg + 1)])
        tail = [out.get(-e, 0) for e in range(1, depth + 1)]
        return LaurentTail(poly, tail)


def arctanh_series(depth: int) -> LaurentTail:
    """Expansion of arctanh(1/t) = sum_p t^-(2p+1)/(2p+1), kept to ``t^-depth``."""
    if depth < 1:
        raise ValueError("depth must be positive")
    return LaurentTail(ZERO, [Fraction(1, e) if e % 2 else 0 for e in range(1, depth + 1)])


def inverse_s_series(depth: int) -> LaurentTail:
    """Expansion of 1/(t^2 - 1) = sum_{r>=1} t^(-2r)."""
    return LaurentTail(ZERO, [0 if e % 2 else 1 for e in range(1, depth + 1)])


@lru_cache(maxsize=None)
def _kernel_cached(n: int, m: int, depth: int) -> LaurentTail:
    acc = LaurentTail(Poly((1,)), [0] * depth)
    for _ in range(n):
        acc = acc * arctanh_series(depth)
    for _ in range(m):
        acc = acc * inverse_s_series(depth)
    return acc


def kernel(n: int, m: int, depth: int) -> LaurentTail:
    """Expansion of ``arctanh(1/t)^n / (t^2-1)^m`` to at least ``t^-depth``."""
    rounded = -(-max(depth, 1) // 16) * 16
    return _kernel_cached(n, m, rounded)
