"""Tests for Riesz products and cylinder masses."""

from fractions import Fraction

import numpy as np
import pytest

from tmspectra.core.autocorr import eta_table
from tmspectra.core.measure import (
    cylinder_mass,
    cylinder_masses,
    cylinder_measure,
    density_at,
    fourier_density,
    measure_decay_check,
    measure_partition,
    partial_product,
    partial_products,
    product_density,
    product_masses,
    transfer_identity,
)
from tmspectra.core.params import make_parameter
from tmspectra.errors import ResourceLimitError
from tmspectra.models.domain import DyadicWord

THIRD = make_parameter(Fraction(1, 3))
HALF = make_parameter(Fraction(1, 2))


class TestPartialProduct:
    def test_order_zero(self):
        pp = partial_product(THIRD, 0)
        assert pp.coefficients.tolist() == [1]

    def test_order_one(self):
        pp = partial_product(THIRD, 1)
        assert pp.coefficient(0) == 1
        assert pp.coefficient(1) == pytest.approx(THIRD.phase.conjugate() / 2)
        assert pp.coefficient(-1) == pytest.approx(THIRD.phase / 2)
        assert pp.coefficient(5) == 0

    def test_second_order_at_half(self):
        assert partial_product(HALF, 2).coefficient(1) == pytest.approx(-0.25, abs=1e-12)

    def test_approaches_conjugate_eta(self):
        target = eta_table(HALF, 2)[1].conjugate()
        errors = [abs(partial_product(HALF, n).coefficient(1) - target) for n in (2, 6, 10)]
        assert errors[1] < 5e-2
        assert errors[0] > errors[1] > errors[2]

    @pytest.mark.slow
    @pytest.mark.parametrize("c", [Fraction(1, 2), Fraction(1, 3), 0.3])
    def test_matches_conjugate_eta_at_order_22(self, c):
        param = make_parameter(c)
        pp = partial_product(param, 22)
        table = eta_table(param, 32)
        for n in range(33):
            assert abs(pp.coefficient(n) - table[n].conjugate()) < 1e-2

    def test_snapshots_agree(self):
        snaps = partial_products(THIRD, [3, 6])
        assert np.allclose(snaps[6].coefficients, partial_product(THIRD, 6).coefficients)
        assert snaps[3].coefficients.shape == (8,)

    def test_cap(self):
        with pytest.raises(ResourceLimitError):
            partial_product(THIRD, 12, max_order=10)

    def test_negative_order(self):
        with pytest.raises(ValueError):
            partial_products(THIRD, [-1])


class TestDensity:
    @pytest.mark.parametrize("c", [Fraction(1, 3), Fraction(1, 2), Fraction(3, 10)])
    def test_product_matches_fourier(self, c):
        param = make_parameter(c)
        xs = np.random.default_rng(1).random(40)
        pp = partial_product(param, 7)
        assert np.allclose(product_density(param, 7, xs), fourier_density(pp, xs), atol=1e-9)

    def test_density_at_checks_both_forms(self):
        pp = partial_product(THIRD, 6)
        values = density_at(pp, [0.1, 0.7])
        assert values.shape == (2,)
        assert np.all(values >= 0.0)

    def test_vanishes_at_singularity(self):
        assert product_density(HALF, 4, np.array([0.0]))[0] < 1e-30


class TestCylinderMasses:
    def test_total_mass_is_one(self):
        masses = cylinder_masses(partial_product(THIRD, 10), 5)
        assert float(masses.sum()) == pytest.approx(1.0, abs=1e-10)

    def test_single_matches_batch(self):
        pp = partial_product(THIRD, 9)
        masses = cylinder_masses(pp, 4)
        for value in (0, 5, 13):
            single = cylinder_mass(pp, DyadicWord(value, 4))
            assert single == pytest.approx(masses[value], abs=1e-12)

    def test_half_splits_evenly(self):
        for bits in ("0", "1"):
            cm = cylinder_measure(HALF, DyadicWord.from_bits(bits))
            assert cm.estimate.contains(0.5, slack=1e-9)

    def test_children_add_up(self):
        parent = measure_partition(THIRD, 8, buffer=6)
        child = measure_partition(THIRD, 9, buffer=5)
        lo = child.raw_lo[0::2] + child.raw_lo[1::2]
        hi = child.raw_hi[0::2] + child.raw_hi[1::2]
        assert np.all(lo <= parent.raw_hi + 1e-12)
        assert np.all(parent.raw_lo <= hi + 1e-12)

    def test_order_zero_is_uniform(self):
        masses = cylinder_masses(partial_product(THIRD, 0), 3)
        assert np.allclose(masses, 1 / 8)

    def test_quadrature_agrees(self):
        pp = partial_product(THIRD, 8)
        fourier = cylinder_masses(pp, 3)
        quad = product_masses(THIRD, 3, 8)
        assert np.allclose(fourier, quad, atol=1e-6)

    def test_quadrature_needs_order(self):
        with pytest.raises(ValueError):
            product_masses(THIRD, 5, 4)

    def test_transfer_identity(self):
        lhs, rhs = transfer_identity(THIRD, DyadicWord.from_bits("101"), 8)
        assert lhs == pytest.approx(rhs, rel=1e-6)


class TestCylinderMeasure:
    def test_inside_gibbs_window(self):
        cm = cylinder_measure(THIRD, DyadicWord.from_bits("0110"), buffer=6)
        assert cm.window.lo <= cm.estimate.lo <= cm.estimate.hi <= cm.window.hi

    def test_buffer_cap(self):
        with pytest.raises(ValueError):
            cylinder_measure(THIRD, DyadicWord.from_bits("0110"), buffer=8, max_order=10)


class TestMeasurePartition:
    def test_brackets_ordered_and_clipped(self):
        part = measure_partition(THIRD, 5, buffer=6)
        assert part.lo.shape == (32,)
        assert np.all(part.lo <= part.hi)
        assert np.all(part.window_lo <= part.lo)
        assert np.all(part.hi <= part.window_hi)

    def test_raw_masses_straddle_one(self):
        part = measure_partition(THIRD, 5, buffer=6)
        assert float(part.raw_lo.sum()) <= 1.0 + 1e-9
        assert float(part.raw_hi.sum()) >= 1.0 - 1e-9

    def test_matches_single_cylinder(self):
        part = measure_partition(THIRD, 4, buffer=6)
        cm = cylinder_measure(THIRD, DyadicWord(9, 4), buffer=6)
        assert part.lo[9] == pytest.approx(cm.estimate.lo, abs=1e-12)
        assert part.hi[9] == pytest.approx(cm.estimate.hi, abs=1e-12)

    def test_rejects_zero_depth(self):
        with pytest.raises(ValueError):
            measure_partition(THIRD, 0)


class TestDecayCheck:
    def test_classical_decay_rate(self):
        rate = measure_decay_check(HALF, 8)
        assert -1.0 < rate < -0.3

    def test_c0_rejected(self):
        with pytest.raises(ValueError):
            measure_decay_check(make_parameter(0), 6)

    def test_depth_limits(self):
        with pytest.raises(ValueError):
            measure_decay_check(THIRD, 15)
