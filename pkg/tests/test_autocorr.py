"""Tests for autocorrelation, the (Z, Pi) recursion and D_2."""

import math
from fractions import Fraction

import numpy as np
import pytest

from tmspectra.core.autocorr import (
    correlation_exponent,
    eigen_plot_row,
    eigenvalues,
    empirical_eta,
    eta_table,
    iterate_state,
    lambda1,
    mc_matrix,
    theta_growth,
    vector_state,
)
from tmspectra.core.params import make_parameter
from tmspectra.core.sequence import tm_prefix

HALF = make_parameter(Fraction(1, 2))
THIRD = make_parameter(Fraction(1, 3))
ZERO = make_parameter(0)


class TestEtaTable:
    def test_first_entries(self):
        table = eta_table(HALF, 4)
        assert table[0] == 1
        assert table[1] == pytest.approx(-1 / 3)

    def test_third_lag_at_half(self):
        assert eta_table(HALF, 4)[3] == pytest.approx(1 / 3)

    def test_even_indices_repeat(self):
        table = eta_table(THIRD, 64)
        for n in range(1, 32):
            assert table[2 * n] == table[n]

    def test_negative_index_conjugates(self):
        table = eta_table(THIRD, 8)
        assert table[-3] == table[3].conjugate()

    def test_bounded_by_one(self):
        table = eta_table(make_parameter(Fraction(3, 10)), 1024)
        assert float(np.max(np.abs(table.eta))) <= 1.0 + 1e-12

    def test_rejects_small_index(self):
        with pytest.raises(ValueError):
            eta_table(THIRD, 0)

    def test_c0_is_constant(self):
        table = eta_table(ZERO, 16)
        assert np.allclose(table.eta, 1.0)


class TestEmpirical:
    def test_window_check(self):
        prefix = tm_prefix(THIRD, 16)
        with pytest.raises(ValueError):
            empirical_eta(prefix, 4, 16)

    def test_lag_zero_is_one(self):
        prefix = tm_prefix(THIRD, 16)
        assert empirical_eta(prefix, 0, 16) == pytest.approx(1.0)


class TestRecursion:
    @pytest.mark.parametrize("c", [Fraction(1, 3), Fraction(1, 2), Fraction(3, 10)])
    def test_matrix_step_matches_direct_sums(self, c):
        param = make_parameter(c)
        table = eta_table(param, 1 << 9)
        for k in range(1, 9):
            direct = vector_state(table, 1 << k)
            iterated = iterate_state(param, k)
            assert iterated.Z == pytest.approx(direct.Z, rel=1e-10)
            assert abs(iterated.Pi - direct.Pi) <= 1e-10 * max(1.0, direct.Z)

    def test_vector_state_needs_table(self):
        with pytest.raises(ValueError):
            vector_state(eta_table(THIRD, 4), 3)


class TestEigen:
    def test_c0_root_is_two(self):
        assert lambda1(ZERO).contains(2.0, slack=1e-12)
        assert correlation_exponent(ZERO).contains(1.0, slack=1e-12)

    def test_half_root_closed_form(self):
        lam = lambda1(HALF)
        assert lam.contains((1.0 + math.sqrt(17.0)) / 4.0, slack=1e-12)
        assert lam.width < 1e-11

    @pytest.mark.parametrize("c", [Fraction(1, 3), Fraction(1, 5), Fraction(3, 10)])
    def test_matches_matrix_spectrum(self, c):
        param = make_parameter(c)
        numeric = float(np.max(np.abs(np.linalg.eigvals(mc_matrix(param).matrix))))
        assert lambda1(param).mid == pytest.approx(numeric, rel=1e-8)

    def test_eigenvalues_ordered(self):
        first, second, third = eigenvalues(THIRD)
        assert abs(first) >= abs(second) >= abs(third)

    def test_d2_between_zero_and_one(self):
        d2 = correlation_exponent(THIRD)
        assert 0.0 < d2.lo <= d2.hi < 1.0

    def test_plot_row(self):
        row = eigen_plot_row(ZERO)
        assert len(row) == 7
        assert row[0] == 0.0
        assert row[1] == pytest.approx(2.0)
        assert row[6] == pytest.approx(1.0)


class TestThetaGrowth:
    def test_c0_slope_is_one(self):
        growth = theta_growth(ZERO, 10)
        assert growth.slope == pytest.approx(1.0, abs=1e-9)
        assert growth.window == (5, 10)
        assert growth.points[0] == (0, 1.0)

    def test_slope_tracks_d2(self):
        growth = theta_growth(HALF, 18)
        d2 = correlation_exponent(HALF)
        assert abs(growth.slope - d2.mid) < 0.05

    def test_rejects_small_kmax(self):
        with pytest.raises(ValueError):
            theta_growth(THIRD, 1)
