from fractions import Fraction
from itertools import combinations_with_replacement

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from mrint.potential.analysis import NotHomogeneous, derivatives_at, parse_potential
from mrint.potential.expr import ParseError, PoleError, evaluate, parse_expression, partial
from mrint.potential.gaussian import I, Gaussian, is_exact, parse_number
from mrint.potential.ratfunc import MPoly, euler_defect, from_expr

POTENTIALS = [
    "-1/q1",
    "-1/q1 + q2^3/q1^4",
    "-1/q1 + q2^2/(2*q1^3) + 3*q2^3/q1^4",
    "1/(q1^2 + q2^2)^(1)*q1 - q2*q3/q1^3",
    "(q1 - 2*q2)^2/(q1^3 + q2^3 - q3^3)",
    "-(q1^2+q2^2)^(-1)*(q1 + q2/2)",
]


def sympy_of(text):
    q = sp.symbols("q1:6")
    return sp.sympify(text.replace("^", "**"), locals={f"q{i + 1}": q[i] for i in range(5)}), q


class TestParser:
    def test_precedence(self):
        e = parse_expression("1 + 2*3^2 - 4/2")
        assert evaluate(e, []) == 17

    def test_unary_minus_and_power(self):
        assert evaluate(parse_expression("-2^2"), []) == -4
        assert evaluate(parse_expression("(-2)^2"), []) == 4
        assert evaluate(parse_expression("q1^(-2)"), [Fraction(2)]) == Fraction(1, 4)

    def test_decimals_are_exact(self):
        assert evaluate(parse_expression("0.1 + 0.2"), []) == Fraction(3, 10)

    @pytest.mark.parametrize(
        "text",
        ["2q1", "q1 q2", "q1^1.5", "q1^q2", "q0", "q1 +", "(q1", "q1)", "x1", "q1 ** 2", ""],
    )
    def test_rejects(self, text):
        with pytest.raises(ParseError):
            parse_expression(text)

    def test_error_position(self):
        with pytest.raises(ParseError) as info:
            parse_expression("q1 + 2q2")
        assert info.value.position == 6
        assert "column 7" in str(info.value)

    def test_literal_pole(self):
        with pytest.raises(ParseError):
            parse_expression("1/0")


class TestHomogeneity:
    @pytest.mark.parametrize("text", POTENTIALS)
    def test_accepts_degree_minus_one(self, text):
        V = parse_potential(text)
        assert V.rational.homogeneous_degree() == -1

    @pytest.mark.parametrize("text,degree", [("1/q1^2", -2), ("q1", 1), ("q1 + 1/q1", None), ("1", 0)])
    def test_rejects_other_degrees(self, text, degree):
        with pytest.raises((NotHomogeneous, ParseError)) as info:
            parse_potential(text)
        if isinstance(info.value, NotHomogeneous):
            assert info.value.degree == degree

    def test_cancelled_variable_keeps_dimension(self):
        assert parse_potential("-1/q1 + 0*q2^3/q1^4").dimension == 2

    def test_euler_defect(self):
        V = from_expr(parse_expression("-1/q1 + q2^3/q1^4"), 2)
        assert euler_defect(V).is_zero()


class TestDerivatives:
    @pytest.mark.parametrize("text", POTENTIALS)
    def test_tree_matches_rational_exactly(self, text):
        V = parse_potential(text)
        c = [Fraction(3, 2), Fraction(-1, 3), Fraction(2, 7)][: V.dimension]
        a = derivatives_at(V, c, "tree")
        b = derivatives_at(V, c, "rational")
        assert a.exact and b.exact
        assert (a.gradient == b.gradient).all()
        assert (a.hessian == b.hessian).all()
        assert (a.third == b.third).all()

    @pytest.mark.parametrize("text", POTENTIALS)
    def test_third_derivatives_against_sympy(self, text):
        V = parse_potential(text)
        f, q = sympy_of(text)
        c = [Fraction(3, 2), Fraction(-1, 3), Fraction(2, 7)][: V.dimension]
        subs = {q[i]: sp.Rational(x.numerator, x.denominator) for i, x in enumerate(c)}
        d = derivatives_at(V, c)
        for idx in combinations_with_replacement(range(V.dimension), 3):
            want = sp.diff(f, *(q[i] for i in idx)).subs(subs)
            assert d.third[idx] == Fraction(int(sp.numer(want)), int(sp.denom(want)))

    def test_complex_point(self):
        V = parse_potential("-1/q1 + q2^3/q1^4")
        exact = derivatives_at(V, [Gaussian(1, 1), Fraction(1, 2)])
        floating = derivatives_at(V, [1 + 1j, 0.5])
        assert exact.exact and not floating.exact
        assert np.allclose(np.vectorize(complex)(exact.third).astype(complex), floating.third)

    def test_pole_at_point(self):
        V = parse_potential("-1/q1")
        with pytest.raises(PoleError):
            derivatives_at(V, [Fraction(0)])

    def test_wrong_length(self):
        with pytest.raises(ValueError):
            derivatives_at(parse_potential("-1/q1"), [Fraction(1), Fraction(2)])

    def test_partial_is_cached(self):
        e = parse_expression("q1^3*q2/(q1+q2)^4")
        assert partial(e, (1, 2)) is partial(e, (1, 2))

    @given(st.lists(st.integers(-3, 3), min_size=3, max_size=3), st.integers(1, 4))
    @settings(max_examples=30, deadline=None)
    def test_mpoly_derivative_of_power(self, coeffs, k):
        x = MPoly.variable(2, 1)
        y = MPoly.variable(2, 2)
        p = x * coeffs[0] + y * coeffs[1] + MPoly.constant(2, coeffs[2])
        assert (p**k).derivative(1) == (p ** (k - 1)) * (k * coeffs[0])


class TestNumbers:
    @pytest.mark.parametrize(
        "text,value,decimal",
        [
            ("3", Fraction(3), False),
            ("-1/2", Fraction(-1, 2), False),
            ("1+2*i", Gaussian(1, 2), False),
            ("i", I, False),
            ("-i", -I, False),
            ("2.5-0.5i", Gaussian(Fraction(5, 2), Fraction(-1, 2)), True),
            ("1e-3", Fraction(1, 1000), True),
        ],
    )
    def test_parse(self, text, value, decimal):
        v, d = parse_number(text)
        assert v == value and d == decimal

    @pytest.mark.parametrize("text", ["", "1//2", "abc", "1+", "2*j"])
    def test_parse_rejects(self, text):
        with pytest.raises(ValueError):
            parse_number(text)

    def test_gaussian_field(self):
        z = Gaussian(1, 2)
        assert z * z.conjugate() == 5
        assert z / z == 1
        assert (z**-2) * z**2 == 1
        assert I * I == -1
        assert is_exact(z) and is_exact(Fraction(1)) and not is_exact(1.0)
        assert complex(z * 1.5) == (1.5 + 3j)
