"""Residue sequences of the second variational equation, computed exactly.

The central object is

    S_{i,j,k}(alpha) = Res_{t=oo} (t^2-1)^2 prod_{n in (i,j,k)} (Q_n/eps_n + alpha P_n),

a polynomial of degree at most 3 in the multivaluation parameter alpha.
Integrability at order 2 requires it to be independent of alpha.  When an
index is zero the factor for that slot is one of the rational solutions
``P_0 = t/(t^2-1)`` or ``Q_0 = 1/(t^2-1)``, and both choices are reported
as separate weights.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from typing import Callable

from .basis import basis_pair
from .exact import ArcElement, S, T, residue_at_infinity, residue_polynomial

__all__ = [
    "ResiduePoly",
    "clear_caches",
    "recurrence_residual",
    "s_double_zero",
    "s_jordan",
    "s_poly",
    "s_zero_index",
    "odd_branch_integral",
]

def _pad(coeffs) -> tuple[Fraction, ...]:
    out = list(coeffs) + [Fraction(0)] * 4
    return tuple(out[:4])


@dataclass(frozen=True)
class ResiduePoly:
    """Coefficients ``c0..c3`` of alpha^0..alpha^3.

    ``weight`` names the polynomial weight multiplying the product of the
    nonzero-index factors.  Triples with a zero index carry the other
    weights in ``companions``.
    """

    triple: tuple[int, ...]
    coeffs: tuple[Fraction, ...]
    weight: str = "(t^2-1)^2"
    companions: tuple["ResiduePoly", ...] = field(default=())

    def __getitem__(self, a: int) -> Fraction:
        return self.coeffs[a]

    @property
    def depends_on_alpha(self) -> bool:
        if any(self.coeffs[1:]):
            return True
        return any(c.depends_on_alpha for c in self.companions)

    def variants(self) -> tuple["ResiduePoly", ...]:
        return (self,) + self.companions

    def __str__(self) -> str:
        body = ", ".join(f"c{a}={c}" for a, c in enumerate(self.coeffs))
        return f"S{self.triple} [{self.weight}]: {body}"


_WEIGHT_NAMES = {
    1: ("(t^2-1)", "t(t^2-1)"),
    2: ("1", "t", "t^2"),
    3: ("1/(t^2-1)", "t/(t^2-1)", "t^2/(t^2-1)", "t^3/(t^2-1)"),
}


@lru_cache(maxsize=None)
def _s_sorted(triple: tuple[int, int, int]) -> ResiduePoly:
    zeros = triple.count(0)
    positive = [n for n in triple if n]
    prod = ArcElement.poly(1)
    for n in positive:
        prod = prod * basis_pair(n).shifted()
    # each shifted factor carries one (t^2-1) and each index-0 factor is
    # t^0 or t^1 over (t^2-1); against the weight (t^2-1)^2 one (t^2-1) remains
    if zeros == 0:
        F = prod * ArcElement.rational(1, 1)
        return ResiduePoly(triple, _pad(residue_polynomial(F)))
    variants = []
    for moment, name in enumerate(_WEIGHT_NAMES[zeros]):
        F = prod * ArcElement.rational(T**moment, 1)
        variants.append(ResiduePoly(triple, _pad(residue_polynomial(F)), name))
    return ResiduePoly(triple, variants[0].coeffs, variants[0].weight, tuple(variants[1:]))


def clear_caches() -> None:
    """Drop memoized basis functions, series kernels and residues (for cold timings)."""
    from .exact.laurent import _kernel_cached

    _s_sorted.cache_clear()
    basis_pair.cache_clear()
    _kernel_cached.cache_clear()


def s_poly(i: int, j: int, k: int) -> ResiduePoly:
    """``S_{i,j,k}(alpha)`` computed from the basis functions."""
    if min(i, j, k) < 0:
        raise ValueError("indices must be nonnegative")
    r = _s_sorted(tuple(sorted((i, j, k))))
    if (i, j, k) == r.triple:
        return r
    return ResiduePoly((i, j, k), r.coeffs, r.weight, r.companions)


def s_poly_unsorted(i: int, j: int, k: int) -> ResiduePoly:
    """Same as :func:`s_poly` but multiplies the factors in the given order.

    No cache and no sorting, for checking permutation invariance honestly.
    """
    if min(i, j, k) < 1:
        raise ValueError("positive indices only")
    F = ArcElement.rational(1, 1)
    for n in (i, j, k):
        F = basis_pair(n).shifted() * F
    return ResiduePoly((i, j, k), _pad(residue_polynomial(F)))


def s_zero_index(i: int, j: int, moment: int) -> Fraction:
    """``Res L P_i P_{i+j} (t^2-1) t^moment``."""
    if i < 1 or i + j < 1 or moment not in (0, 1):
        raise ValueError("need i >= 1, i + j >= 1, moment in (0, 1)")
    P = basis_pair(i).p_poly * basis_pair(i + j).p_poly * S * T**moment
    return residue_at_infinity(ArcElement.poly(P, 1))


def s_double_zero(i: int, moment: int) -> Fraction:
    """``Res t^moment Q_i / eps_i`` (``Q_0`` itself when i = 0)."""
    if moment not in (0, 1, 2):
        raise ValueError("moment must be 0, 1 or 2")
    return residue_at_infinity(basis_pair(i).q_normalized() * ArcElement.poly(T**moment))


def s_jordan(i: int) -> ResiduePoly:
    """``Res (t^2-1) (Q_i/eps_i + alpha P_i)^2``; ``Res (t^2-1) Q_0^2`` for i = 0."""
    if i == 0:
        q0 = basis_pair(0).q()
        return ResiduePoly((0,), _pad([residue_at_infinity(q0 * q0 * ArcElement.poly(S))]), "(t^2-1)")
    G = basis_pair(i).shifted()
    return ResiduePoly((i,), _pad(residue_polynomial(G * G * ArcElement.rational(1, 1))), "(t^2-1)")


def odd_branch_integral(i: int, j: int, k: int) -> Fraction:
    """``3/2 int_{-1}^{1} P_i P_j P_k (t^2-1)^2 dt`` by polynomial quadrature."""
    P = basis_pair(i).p_poly * basis_pair(j).p_poly * basis_pair(k).p_poly * S * S
    return Fraction(3, 2) * P.definite_integral(-1, 1)


class IndexOutOfFamily(ValueError):
    pass


def recurrence_residual(
    i: int, j: int, k: int, values: Callable[[int, int, int], ResiduePoly] | None = None
) -> tuple[Fraction, ...]:
    """Left-hand side of the 3-index recurrence, one entry per alpha power.

    ``-(1+i)(i+j+k+2) S_{i,j,k} + 4i(i-1)(i-2)(i-3-j-k) S_{i-2,j,k}
    + 4i(2i-1)j(j-1) S_{i-1,j-1,k} + 4i(2i-1)k(k-1) S_{i-1,j,k-1}``.
    Only defined when all shifted triples have positive indices.
    """
    if i - 2 < 1 or j - 1 < 1 or k - 1 < 1:
        raise IndexOutOfFamily(f"({i},{j},{k}) is not interior")
    values = values or s_poly
    terms = [
        (-(1 + i) * (i + j + k + 2), values(i, j, k)),
        (4 * i * (i - 1) * (i - 2) * (i - 3 - j - k), values(i - 2, j, k)),
        (4 * i * (2 * i - 1) * j * (j - 1), values(i - 1, j - 1, k)),
        (4 * i * (2 * i - 1) * k * (k - 1), values(i - 1, j, k - 1)),
    ]
    return tuple(sum(c * r[a] for c, r in terms) for a in range(4))


def all_permutations_agree(i: int, j: int, k: int) -> bool:
    ref = s_poly_unsorted(i, j, k).coeffs
    return all(s_poly_unsorted(*p).coeffs == ref for p in set(permutations((i, j, k))))
