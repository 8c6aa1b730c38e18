import math

import numpy as np
import pytest

from nanospin import lineshape

from oracles import (binomial_comb_fid, fourth_derivative_at_zero,
                     neg_second_derivative_at_zero)


class TestFid:
    def test_initial_value(self):
        for n in (2, 5, 9):
            assert lineshape.fid(0.0, n, g=1.3) == 1.0
            assert lineshape.fid(0.0, n, g=1.3, t2=2.0) == 1.0

    def test_two_spin_cosine(self):
        g = 0.8
        t = np.linspace(0.0, 10.0, 200)
        assert np.allclose(lineshape.fid(t, 2, g), np.cos(1.5 * g * t), atol=1e-15)
        assert lineshape.fid(math.pi / (3.0 * g), 2, g) == pytest.approx(0.0, abs=1e-15)

    @pytest.mark.parametrize("n", [3, 6, 9])
    def test_matches_binomial_comb(self, n):
        # dual evaluation: cosine power vs explicit frequency comb
        g = 1.1
        t = np.linspace(0.0, 8.0, 300)
        assert np.max(np.abs(lineshape.fid(t, n, g) - binomial_comb_fid(t, n, g))) < 1e-12

    def test_even_in_time(self):
        # cos^m is even; with the comb this pins the periodicity structure
        g, n = 1.0, 7
        t = np.linspace(0.0, 4.0, 50)
        assert np.allclose(lineshape.fid(-t, n, g), lineshape.fid(t, n, g))

    def test_decay_factor(self):
        val = lineshape.fid(1.0, 2, g=0.0, t2=0.5)
        assert val == pytest.approx(math.exp(-2.0), rel=1e-12)

    def test_size_guard(self):
        with pytest.raises(lineshape.LineShapeError):
            lineshape.fid(0.0, 1, 1.0)


class TestMoments:
    def test_two_spin_values(self):
        m2, m4 = lineshape.moments(2, 1.0)
        assert m2 == pytest.approx(9.0 / 4.0)
        assert m4 == pytest.approx(81.0 / 16.0)
        assert m4 / m2 ** 2 == pytest.approx(1.0)  # single-frequency line

    @pytest.mark.parametrize("n", [2, 5, 9, 16])
    def test_m2_matches_fid_curvature(self, n):
        g = 1.0
        m2, _ = lineshape.moments(n, g)
        fd = neg_second_derivative_at_zero(
            lambda t: lineshape.fid(t, n, g), h=0.02 / math.sqrt(m2))
        assert fd == pytest.approx(m2, rel=1e-6)

    def test_m4_matches_fid_derivative_n2(self):
        m2, m4 = lineshape.moments(2, 1.0)
        fd = fourth_derivative_at_zero(
            lambda t: lineshape.fid(t, 2, 1.0), h=0.05 / math.sqrt(m2))
        assert fd == pytest.approx(m4, rel=1e-5)


class TestDeltaComb:
    def test_three_spin_triplet(self):
        positions, weights = lineshape.delta_comb(3, 1.0)
        assert positions == pytest.approx([3.0, 0.0, -3.0])
        assert weights == pytest.approx([0.25, 0.5, 0.25])

    def test_weights_sum_to_one(self):
        for n in (2, 7, 12):
            _, weights = lineshape.delta_comb(n, 2.0)
            assert weights.sum() == pytest.approx(1.0, abs=1e-15)


class TestSpectrum:
    def test_two_spin_doublet(self):
        g = 1.0
        shape = lineshape.spectrum(2, g, t2=20.0, n_points=4001, span_factor=2.0)
        peak_idx = np.argmax(shape.spectrum)
        assert abs(abs(shape.omega_grid[peak_idx]) - 1.5 * g) < 0.01
        # symmetric twin peak
        mirrored = np.interp(-shape.omega_grid[peak_idx], shape.omega_grid,
                             shape.spectrum)
        assert mirrored == pytest.approx(shape.spectrum[peak_idx], rel=1e-6)

    def test_normalization(self):
        shape = lineshape.spectrum(5, 1.0, t2=20.0)
        assert np.trapezoid(shape.spectrum, shape.omega_grid) == pytest.approx(
            1.0, abs=1e-6)

    def test_symmetry(self):
        shape = lineshape.spectrum(4, 1.0, t2=10.0, n_points=2001)
        assert np.max(np.abs(shape.spectrum - shape.spectrum[::-1])) < 1e-12

    def test_fid_initial_value(self):
        shape = lineshape.spectrum(6, 1.0, t2=5.0)
        assert shape.fid[0] == 1.0

    @pytest.mark.parametrize("n", [2, 5, 9])
    @pytest.mark.parametrize("t2g", [5.0, 20.0])
    def test_dft_matches_analytic_comb(self, n, t2g):
        g = 1.0
        analytic = lineshape.spectrum(n, g, t2=t2g / g, n_points=1201,
                                      span_factor=1.3, method="analytic")
        numeric = lineshape.spectrum(n, g, t2=t2g / g, n_points=1201,
                                     span_factor=1.3, method="dft")
        assert np.max(np.abs(analytic.spectrum - numeric.spectrum)) < 1e-4

    def test_trapezoid_m2_tracks_analytic(self):
        # wing bias is controlled by the grid span; at 1.2x coverage the
        # truncated-Lorentzian second moment sits within 2% of the comb value
        g = 1.0
        shape = lineshape.spectrum(9, g, t2=20.0 / g, n_points=6001, span_factor=1.2)
        m2_num = np.trapezoid(shape.omega_grid ** 2 * shape.spectrum, shape.omega_grid)
        assert abs(m2_num - shape.m2) / shape.m2 < 0.02

    def test_infinite_t2_rejected(self):
        with pytest.raises(lineshape.LineShapeError):
            lineshape.spectrum(3, 1.0, t2=math.inf)

    def test_insufficient_span_rejected(self):
        with pytest.raises(lineshape.LineShapeError):
            lineshape.spectrum(5, 1.0, t2=10.0, omega_grid=np.linspace(-2.0, 2.0, 101))

    def test_metadata(self):
        shape = lineshape.spectrum(3, 1.0, t2=10.0)
        assert shape.meta["anisotropy_zeta"] == 2.0
        assert shape.m2 == pytest.approx(2.0 * 2.25)
