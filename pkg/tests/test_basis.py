from fractions import Fraction
from math import factorial

import pytest
import sympy as sp

from mrint.basis import (
    basis_pair,
    epsilon_closed_form,
    epsilon_from_pole,
    ode_residual,
    recurrence_residual_P,
    rodrigues,
)
from mrint.exact import ArcElement, Poly, S, T, residue_at_infinity
from mrint.selfcheck import perturbed_family


@pytest.mark.parametrize("i", range(1, 9))
def test_rodrigues_matches_sympy(i):
    t = sp.Symbol("t")
    ref = sp.Poly(sp.cancel(sp.diff((t**2 - 1) ** i, t, i - 1) / (t**2 - 1)), t)
    coeffs = [Fraction(int(c.p), int(c.q)) for c in reversed(ref.all_coeffs())]
    assert rodrigues(i) == Poly(coeffs)


def test_low_order_values():
    assert rodrigues(1) == Poly([1])
    assert rodrigues(2) == T * 4
    assert rodrigues(3) == Poly([-6, 0, 30])


def test_rodrigues_rejects_zero():
    with pytest.raises(ValueError):
        rodrigues(0)


@pytest.mark.parametrize("i", range(1, 12))
def test_parity_and_degree(i):
    P = rodrigues(i)
    assert P.degree == i - 1
    assert P.parity() == (i - 1) % 2


@pytest.mark.parametrize("i", range(0, 10))
def test_both_solutions_solve_ode(i):
    b = basis_pair(i)
    assert not ode_residual(b.p, i)
    assert not ode_residual(b.q(), i)


def test_index_zero_pair():
    b = basis_pair(0)
    assert b.p == ArcElement.rational(T, 1)
    assert b.q() == ArcElement.rational(1, 1)
    assert b.epsilon == 0
    with pytest.raises(ValueError):
        b.p_poly


@pytest.mark.parametrize("i", range(1, 16))
def test_epsilon_three_ways(i):
    e = basis_pair(i).epsilon
    assert e == epsilon_closed_form(i) == epsilon_from_pole(i)
    assert e != 0


@pytest.mark.parametrize("i", range(1, 8))
def test_q_decays_at_infinity(i):
    # Res t^n Q_i is the coefficient of t^-(n+1); Q_i ~ P_i t^-(2i+1) ~ t^-(i+2)
    q = basis_pair(i).q()
    moments = [residue_at_infinity(q * ArcElement.poly(T**n)) for n in range(i + 2)]
    assert not any(moments[: i + 1])
    assert moments[i + 1] != 0


@pytest.mark.parametrize("i", range(1, 8))
def test_wronskian_is_constant(i):
    b = basis_pair(i)
    P, Q = b.p, b.q()
    W = P * Q.derivative() - P.derivative() * Q
    assert W * ArcElement.poly(S * S) == ArcElement.poly(1)


def test_normalization_is_an_index_shift():
    # 2^i (i+1)! and 1/4 2^i i(i+3) (i+1)! are the values of the next member
    for i in range(1, 10):
        P_next = rodrigues(i + 1)
        assert P_next(1) == 2**i * factorial(i + 1)
        assert P_next.derivative()(1) == Fraction(2**i * i * (i + 3) * factorial(i + 1), 4)
        assert rodrigues(i)(1) == 2 ** (i - 1) * factorial(i)


@pytest.mark.parametrize("n", range(1, 20))
def test_three_term_recurrence(n):
    assert recurrence_residual_P(n).is_zero()


def test_recurrence_detects_corruption():
    assert not recurrence_residual_P(1, perturbed_family).is_zero()
    assert not ode_residual(ArcElement.poly(perturbed_family(3)), 3).is_zero()
    assert recurrence_residual_P(5, perturbed_family).is_zero()


def test_weighted_orthogonality():
    for j in range(1, 10):
        for k in range(1, 10):
            v = (rodrigues(j) * rodrigues(k) * S * S).definite_integral(-1, 1)
            if abs(j - k) in (0, 2):
                assert v != 0
            else:
                assert v == 0
