"""Tests for L^q curves, Legendre transforms and derived dimensions."""

import math
from fractions import Fraction

import numpy as np
import pytest

from tmspectra.core.params import make_parameter
from tmspectra.core.pressure import pressure_c0
from tmspectra.core.spectra import (
    birkhoff_spectrum,
    conjugate_back,
    dimension_spectrum,
    fourier_dimension,
    information_dimension,
    legendre,
    lq_from_masses,
    lq_spectrum,
    q_r,
    quantization_dimension,
    renyi_dimension,
    spectral_dimension,
    to_birkhoff_alpha,
    to_dimension_alpha,
    uniform_curve,
)
from tmspectra.errors import CurveError
from tmspectra.models.bracket import Bracket
from tmspectra.models.enums import Pipeline, Provenance
from tmspectra.models.results import SpectrumCurve

LOG2 = math.log(2.0)
ZERO = make_parameter(0)
HALF = make_parameter(Fraction(1, 2))
THIRD = make_parameter(Fraction(1, 3))
Q_GRID = [i / 4 for i in range(9)]


def c0_pressure_curve():
    grid = tuple(i / 4 for i in range(9))
    return SpectrumCurve(
        arguments=grid,
        values=tuple(Bracket.point(pressure_c0(t)) for t in grid),
        provenance=Provenance.CLOSED_FORM,
    )


class TestUniformHarness:
    @pytest.mark.parametrize("r", [0.5, 1.0, 2.0])
    def test_q_r(self, r):
        q = q_r(uniform_curve(Q_GRID), r)
        assert q.contains(1.0 / (1.0 + r), slack=1e-10)

    @pytest.mark.parametrize("r", [0.5, 1.0, 2.0])
    def test_quantization_dimension_is_one(self, r):
        assert quantization_dimension(uniform_curve(Q_GRID), r).contains(1.0, slack=1e-9)

    def test_spectral_dimension(self):
        assert spectral_dimension(uniform_curve(Q_GRID)).contains(0.5, slack=1e-10)

    def test_renyi(self):
        curve = uniform_curve(Q_GRID)
        assert renyi_dimension(curve, 2.0).contains(1.0)
        with pytest.raises(CurveError):
            renyi_dimension(curve, 1.0)

    def test_flat_masses(self):
        depth = 6
        flat = np.full(1 << depth, 2.0**-depth)
        curve = lq_from_masses(flat, flat, Q_GRID, depth)
        for q, v in zip(curve.arguments, curve.values):
            assert v.contains(1.0 - q, slack=1e-9)

    def test_crossing_outside_grid(self):
        with pytest.raises(CurveError, match="extend the grid"):
            q_r(uniform_curve([0.0, 0.25]), 1.0)

    def test_negative_r(self):
        with pytest.raises(ValueError):
            q_r(uniform_curve(Q_GRID), -1.0)


class TestLqSpectrum:
    def test_point_mass_at_c0(self):
        curve = lq_spectrum(ZERO, [-1.0, 0.0, 2.0], 10)
        assert curve.provenance is Provenance.CLOSED_FORM
        assert curve.values[0].lo == math.inf
        assert curve.values[1] == Bracket(1.0, 1.0)
        assert curve.values[2] == Bracket(0.0, 0.0)

    def test_c0_dimensions(self):
        curve = lq_spectrum(ZERO, Q_GRID, 10)
        assert quantization_dimension(curve, 1.0) == Bracket(0.0, 0.0)
        with pytest.raises(ValueError):
            spectral_dimension(curve)

    def test_pressure_pipeline(self):
        curve = lq_spectrum(THIRD, [0.0, 1.0, 2.0], 8)
        assert curve.provenance is Provenance.PRESSURE
        assert curve.values[0].contains(1.0, slack=1e-9)

    def test_measure_pipeline(self):
        curve = lq_spectrum(THIRD, [0.0, 1.0, 2.0], 5, Pipeline.MEASURE, buffer=6)
        assert curve.provenance is Provenance.MEASURE
        assert curve.values[0].contains(1.0, slack=1e-9)
        assert curve.values[1].contains(0.0, slack=1e-6)

    def test_depth_limits(self):
        with pytest.raises(ValueError):
            lq_spectrum(THIRD, Q_GRID, 21)
        with pytest.raises(ValueError):
            lq_spectrum(THIRD, Q_GRID, 13, Pipeline.MEASURE)

    def test_negative_q_needs_positive_masses(self):
        lo = np.array([0.0, 0.5])
        with pytest.raises(ValueError):
            lq_from_masses(lo, lo + 0.5, [-1.0, 0.0], 1)


class TestLegendre:
    def test_c0_closed_form_conjugate(self):
        conj = legendre(c0_pressure_curve(), alphas=[-2 * LOG2, -LOG2, 0.0])
        expected = [-LOG2, -LOG2 / 2, 0.0]
        for value, want in zip(conj.values, expected):
            assert value.contains(want, slack=1e-12)

    def test_domain_from_end_slopes(self):
        conj = legendre(c0_pressure_curve())
        assert conj.alpha_min == pytest.approx(-2 * LOG2)
        assert conj.alpha_max == pytest.approx(0.0, abs=1e-15)
        assert len(conj.alphas) == 33

    def test_round_trip_on_convex_curve(self):
        curve = c0_pressure_curve()
        back = conjugate_back(legendre(curve, points=65), curve.arguments)
        for orig, value in zip(curve.values, back.values):
            assert value.contains(orig.mid, slack=1e-9)

    def test_strict_rejects_non_convex(self):
        curve = SpectrumCurve(
            (0.0, 1.0, 2.0),
            (Bracket.point(0.0), Bracket.point(1.0), Bracket.point(0.0)),
            Provenance.PRESSURE,
        )
        with pytest.raises(CurveError):
            legendre(curve)
        assert legendre(curve, strict=False).diagnostics

    def test_alpha_maps(self):
        assert to_birkhoff_alpha(1.0) == pytest.approx(-LOG2)
        assert to_dimension_alpha(-LOG2) == pytest.approx(1.0)


class TestBirkhoffSpectra:
    def test_rejects_c0(self):
        with pytest.raises(ValueError):
            birkhoff_spectrum(ZERO, 8, Q_GRID)
        with pytest.raises(ValueError):
            dimension_spectrum(ZERO, 8, Q_GRID)

    def test_values_in_unit_interval(self):
        spec = birkhoff_spectrum(HALF, 10, Q_GRID, points=17)
        assert spec.kind == "birkhoff"
        assert all(0.0 <= v.lo <= v.hi <= 1.0 for v in spec.values)

    def test_beyond_end_slope_is_zero(self):
        spec = birkhoff_spectrum(HALF, 8, Q_GRID, alphas=[1.0])
        assert spec.values == (Bracket(0.0, 0.0),)

    def test_below_domain_is_truncated(self):
        spec = birkhoff_spectrum(HALF, 8, Q_GRID, alphas=[-100.0, -0.5])
        assert spec.truncated
        assert spec.alphas == (-0.5,)

    def test_negative_t_dropped_and_truncated(self):
        spec = birkhoff_spectrum(THIRD, 8, [-1.0] + Q_GRID, points=9)
        assert spec.truncated

    def test_dimension_spectrum_flags_endpoint(self):
        spec = dimension_spectrum(HALF, 8, Q_GRID, points=17)
        assert spec.kind == "dimension"
        assert list(spec.alphas) == sorted(spec.alphas)
        assert len(spec.flagged) == len(spec.alphas)
        assert any(spec.flagged)


class TestDimensions:
    def test_fourier_routes_at_c0(self):
        fd = fourier_dimension(ZERO, depth=10, kmax=10)
        assert fd.pressure_route == Bracket(0.0, 0.0)
        assert fd.eigen_route.contains(0.0, slack=1e-12)
        assert fd.theta_route.contains(0.0, slack=1e-6)
        assert fd.meta["kmax"] == 10

    def test_information_dimension_c0(self):
        assert information_dimension(ZERO, 6) == Bracket(0.0, 0.0)

    def test_information_dimension_nonnegative(self):
        dim = information_dimension(THIRD, 5, buffer=6)
        assert -1e-12 <= dim.lo <= dim.hi

    def test_pressure_route_is_minus_beta_two(self):
        fd = fourier_dimension(HALF, depth=10, kmax=10)
        assert fd.pressure_route.lo > 0.0
        assert fd.pressure_route.hi == math.inf
        assert fd.eigen_route.lo > 0.0

    @pytest.mark.slow
    def test_fourier_routes_agree(self):
        fd = fourier_dimension(HALF, depth=16, kmax=18)
        assert fd.agree(0.05)

    @pytest.mark.slow
    def test_fourier_routes_agree_at_quarter(self):
        fd = fourier_dimension(make_parameter(Fraction(1, 4)), depth=18, kmax=20)
        assert fd.agree(0.05)
