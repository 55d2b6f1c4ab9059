import math
from fractions import Fraction

import numpy as np
import pytest

from mrint.basis import basis_pair
from mrint.gamma import (
    InfiniteLimitError,
    boundary_diagonal_closed_form,
    boundary_offdiagonal_closed_form,
    closed_form_f_limit,
    gamma_half_integer,
    gamma_regularized,
    jordan_closed_form,
    s11_even_closed_form,
    zero_index_closed_form,
)
from mrint.residues import (
    IndexOutOfFamily,
    all_permutations_agree,
    odd_branch_integral,
    recurrence_residual,
    s_double_zero,
    s_jordan,
    s_poly,
    s_zero_index,
)


def contour_residue_poly(triple, radius=2.0, nodes=512):
    """alpha-coefficients of S by trapezoid quadrature on |t| = radius.

    Independent of the series machinery: the integrand is evaluated
    numerically and the cubic in alpha is recovered by interpolation.
    """
    theta = 2 * np.pi * np.arange(nodes) / nodes
    ts = radius * np.exp(1j * theta)
    pairs = [basis_pair(n) for n in triple]
    alphas = [-1.0, 0.0, 1.0, 2.0]
    values = []
    for a in alphas:
        f = []
        for t in ts:
            prod = (t * t - 1) ** 2
            for b in pairs:
                prod *= b.q_normalized()(complex(t)) + a * b.p(complex(t))
            f.append(prod)
        # (1/2 pi i) \oint f dt with dt = i t dtheta
        values.append(np.mean(np.array(f) * ts).real)
    return np.polyfit(alphas, values, 3)[::-1]


class TestGamma:
    @pytest.mark.parametrize("x", [Fraction(1, 2), Fraction(7, 2), Fraction(-5, 2), Fraction(4)])
    def test_half_integers(self, x):
        assert float(gamma_half_integer(x)) == pytest.approx(math.gamma(float(x)), rel=1e-14)

    def test_pole_raises(self):
        with pytest.raises(ValueError):
            gamma_half_integer(Fraction(-2))

    def test_regularized_pole(self):
        g = gamma_regularized(-3, 2)
        assert g.pole_order == -1
        assert g.leading.value == Fraction(-1, 12)
        with pytest.raises(InfiniteLimitError):
            g.limit()

    def test_closed_form_needs_positive(self):
        with pytest.raises(ValueError):
            closed_form_f_limit(0, 1, 1)


class TestResidues:
    @pytest.mark.parametrize("triple", [(1, 1, 1), (1, 1, 4), (1, 2, 3), (2, 3, 3)])
    def test_against_contour_quadrature(self, triple):
        exact = [float(c) for c in s_poly(*triple).coeffs]
        numeric = contour_residue_poly(triple)
        scale = max(1.0, *map(abs, exact))
        assert np.allclose(numeric, exact, atol=1e-8 * scale)

    def test_anchor_values(self):
        assert s_poly(1, 1, 1)[2] == Fraction(8, 5)
        assert s_poly(1, 1, 4)[1] == Fraction(-64, 15)

    def test_permutation_invariance(self):
        for t in [(1, 2, 3), (1, 1, 4), (2, 3, 5)]:
            assert all_permutations_agree(*t)

    def test_unsorted_call_keeps_order(self):
        r = s_poly(3, 1, 2)
        assert r.triple == (3, 1, 2)
        assert r.coeffs == s_poly(1, 2, 3).coeffs

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            s_poly(-1, 2, 3)

    @pytest.mark.parametrize("triple", [(i, j, k) for i in range(1, 7) for j in range(i, 7) for k in range(j, 7)])
    def test_closed_form(self, triple):
        a = 2 if sum(triple) % 2 else 1
        assert s_poly(*triple)[a] == closed_form_f_limit(*triple)

    @pytest.mark.parametrize("triple", [(1, 2, 2), (1, 1, 3), (2, 2, 3), (1, 2, 4), (3, 3, 5)])
    def test_odd_branch_is_weighted_integral(self, triple):
        assert s_poly(*triple)[2] == odd_branch_integral(*triple)

    @pytest.mark.parametrize("k", range(9))
    def test_even_family(self, k):
        assert s_poly(1, 1, 2 + 2 * k)[1] == s11_even_closed_form(k)

    @pytest.mark.parametrize("k", range(1, 6))
    def test_boundary_rows(self, k):
        assert s_poly(1, k, k)[2] == boundary_diagonal_closed_form(k)
        assert s_poly(1, k, k + 2)[2] == boundary_offdiagonal_closed_form(k)

    def test_index_zero_has_companions(self):
        assert [v.weight for v in s_poly(0, 2, 4).variants()] == ["(t^2-1)", "t(t^2-1)"]
        assert [v.weight for v in s_poly(0, 0, 3).variants()] == ["1", "t", "t^2"]
        assert len(s_poly(0, 0, 0).variants()) == 4


class TestSequences:
    @pytest.mark.parametrize("i", range(1, 9))
    def test_zero_index(self, i):
        # printed closed forms carry an extra factor 2
        assert 2 * s_zero_index(i, 0, 0) == zero_index_closed_form(i, 0)
        assert 2 * s_zero_index(i, 1, 1) == zero_index_closed_form(i, 1)
        assert s_zero_index(i, 1, 0) == 0
        assert s_zero_index(i, 0, 1) == 0

    @pytest.mark.parametrize("i", range(0, 9))
    def test_jordan(self, i):
        assert s_jordan(i)[1] == jordan_closed_form(i)

    def test_double_zero(self):
        assert s_double_zero(1, 2) == Fraction(-2, 3)
        for i in range(2, 7):
            assert [s_double_zero(i, m) for m in range(3)] == [0, 0, 0]

    def test_bad_moments(self):
        with pytest.raises(ValueError):
            s_zero_index(1, 0, 2)
        with pytest.raises(ValueError):
            s_double_zero(1, 3)


class TestRecurrence:
    @pytest.mark.parametrize("i", range(3, 8))
    def test_interior_residual_vanishes(self, i):
        for j in range(2, 7):
            for k in range(2, 7):
                assert not any(recurrence_residual(i, j, k))

    def test_boundary_rejected(self):
        with pytest.raises(IndexOutOfFamily):
            recurrence_residual(2, 2, 2)

    def test_detects_wrong_values(self):
        def corrupted(i, j, k):
            r = s_poly(i, j, k)
            if (i, j, k) == (1, 2, 2):
                return type(r)(r.triple, (r[0], r[1], r[2] + 1, r[3]))
            return r

        assert any(recurrence_residual(3, 2, 2, corrupted))
