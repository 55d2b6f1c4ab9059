from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from mrint.exact import (
    ONE,
    ArcElement,
    NotClosedError,
    Poly,
    S,
    T,
    ZERO,
    antiderivative,
    arctanh_series,
    residue_at_infinity,
    residue_polynomial,
    shift_multivaluation,
)
from mrint.exact.poly import poly_from_roots

fractions = st.fractions(min_value=-5, max_value=5, max_denominator=7)
polys = st.lists(fractions, max_size=5).map(Poly)

x = sp.Symbol("x")


def sympy_residue(F: ArcElement) -> Fraction:
    """Coefficient of t^-1 at infinity via t = 1/x and a sympy series in x."""
    expr = 0
    for k, num, m in F:
        t = 1 / x
        p = sum(sp.Rational(c.numerator, c.denominator) * t**d for d, c in enumerate(num.coeffs))
        expr += p / (t**2 - 1) ** m * sp.atanh(x) ** k
    n = F.max_numerator_degree() + 2 * F.max_denominator() + 4
    c = sp.series(sp.together(expr), x, 0, n).removeO().coeff(x, 1)
    c = sp.Rational(c)
    return Fraction(int(c.p), int(c.q))


class TestPoly:
    def test_arithmetic(self):
        p = Poly([1, 2, 3])
        assert p + Poly([0, 0, 0, 4]) == Poly([1, 2, 3, 4])
        assert (p - p).is_zero()
        assert p * T == Poly([0, 1, 2, 3])
        assert S == T * T - 1
        assert (T + 1) ** 3 == Poly([1, 3, 3, 1])

    def test_degree_and_strip(self):
        assert Poly([1, 0, 0]).degree == 0
        assert ZERO.degree < 0
        assert Poly([0, 0, 5]).leading() == 5

    def test_divmod(self):
        q, r = Poly([1, 0, 0, 1]).divmod(Poly([1, 1]))
        assert q == Poly([1, -1, 1]) and r == ZERO
        with pytest.raises(ArithmeticError):
            Poly([1, 0, 1]).exact_div(Poly([1, 1]))

    def test_calculus(self):
        p = Poly([3, 0, Fraction(1, 2)])
        assert p.derivative() == Poly([0, 1])
        assert p.integral().derivative() == p
        assert (S * S).definite_integral(-1, 1) == Fraction(16, 15)

    def test_parity(self):
        assert S.parity() == 0
        assert T.parity() == 1
        assert (S + T).parity() is None

    def test_roots(self):
        p = poly_from_roots([1, -2])
        assert p(1) == 0 and p(-2) == 0 and p.leading() == 1

    @given(polys, polys, polys)
    def test_ring_axioms(self, a, b, c):
        assert a * (b + c) == a * b + a * c
        assert (a * b) * c == a * (b * c)
        assert a * ONE == a

    @given(polys, polys)
    def test_division_identity(self, a, b):
        if b.is_zero():
            return
        q, r = a.divmod(b)
        assert q * b + r == a
        assert r.degree < b.degree


class TestResidue:
    def test_simple_values(self):
        assert residue_at_infinity(ArcElement.rational(T, 1)) == 1
        assert residue_at_infinity(ArcElement.arctanh()) == 1
        assert residue_at_infinity(ArcElement.poly(T**5)) == 0

    def test_arctanh_series(self):
        s = arctanh_series(9)
        assert [s.coeff(e) for e in range(1, 8)] == [1, 0, Fraction(1, 3), 0, Fraction(1, 5), 0, Fraction(1, 7)]

    @pytest.mark.parametrize(
        "F",
        [
            ArcElement.poly(T**3, 2),
            ArcElement.rational(Poly([1, 0, 3, 0, 1]), 2, 1),
            ArcElement.rational(T**4, 1, 3) + ArcElement.poly(T, 1),
            ArcElement.poly(S * T, 2) * ArcElement.rational(Poly([2, 1]), 1),
        ],
    )
    def test_against_sympy(self, F):
        assert residue_at_infinity(F) == sympy_residue(F)

    def test_shift_is_binomial(self):
        F = ArcElement.poly(T, 2)
        parts = shift_multivaluation(F)
        assert parts[0] == F
        assert parts[1] == ArcElement.poly(T * 2, 1)
        assert parts[2] == ArcElement.poly(T)

    def test_residue_polynomial_degree(self):
        F = ArcElement.rational(T**2, 1, 2)
        assert len(residue_polynomial(F)) == 3


class TestArcElement:
    def test_reduces_denominator(self):
        F = ArcElement.rational(S * T, 2)
        assert F.coefficient(0) == (T, 1)

    def test_derivative_of_l(self):
        assert ArcElement.arctanh().derivative() == ArcElement.rational(-1, 1)

    def test_numeric_matches(self):
        F = ArcElement.rational(Poly([1, 2]), 1, 2) + ArcElement.poly(T, 1)
        t = 3.0
        L = 0.5 * __import__("math").log((t + 1) / (t - 1))
        want = (1 + 2 * t) / (t * t - 1) * L * L + t * L
        assert abs(F(t) - want) < 1e-12

    @given(polys, st.integers(0, 2), st.integers(0, 2))
    @settings(max_examples=40, deadline=None)
    def test_product_rule(self, p, m, k):
        F = ArcElement.rational(p, m, k)
        G = ArcElement.poly(T + 1, 1)
        assert (F * G).derivative() == F.derivative() * G + F * G.derivative()


class TestAntiderivative:
    def test_closed_case_round_trips(self):
        from mrint.basis import basis_pair

        q2 = basis_pair(2).q()
        F = q2 * q2 * q2 * ArcElement.poly(S * S)
        A = antiderivative(F)
        assert A.derivative() == F
        assert A.log_coefficient == 0
        assert residue_at_infinity(F) == 0

    def test_log_only_at_level_zero(self):
        A = antiderivative(ArcElement.rational(T, 1))
        assert A.log_coefficient == Fraction(1, 2)
        assert A.derivative() == ArcElement.rational(T, 1)

    def test_obstruction_raises(self):
        from mrint.basis import basis_pair

        q1, q2 = basis_pair(1).q(), basis_pair(2).q()
        with pytest.raises(NotClosedError):
            antiderivative(q1 * q1 * q2 * ArcElement.poly(S * S))

    @given(polys, st.integers(0, 3))
    @settings(max_examples=40, deadline=None)
    def test_polynomial_times_l(self, p, k):
        F = ArcElement.poly(p * S, k)
        try:
            A = antiderivative(F)
        except NotClosedError:
            return
        assert A.derivative() == F
