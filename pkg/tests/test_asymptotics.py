import math

import numpy as np
import pytest

from nanospin import asymptotics
from nanospin.dynamics import DynamicsError, p1_exact, p1_time_average

from oracles import damped_cosine_sum_direct


class TestPoissonTheta:
    def test_self_identity(self):
        left = asymptotics.poisson_theta(0.0, 1.0, "left")
        right = asymptotics.poisson_theta(0.0, 1.0, "right")
        assert left == pytest.approx(right, abs=1e-14)

    def test_narrow_gaussian_limit(self):
        # a -> infinity: only l = 0, +-1 survive
        val = asymptotics.poisson_theta(0.0, 100.0, "left")
        assert val == pytest.approx(1.0 + 2.0 * math.exp(-100.0), rel=1e-12)
        assert val == pytest.approx(1.0, abs=1e-12)

    def test_wide_gaussian_limit(self):
        # a -> 0 at eps = 0: sum -> integral sqrt(pi/a)
        a = 1e-4
        assert asymptotics.poisson_theta(0.0, a, "right") == pytest.approx(
            math.sqrt(math.pi / a), rel=1e-6)

    def test_identity_over_grid(self):
        worst = 0.0
        for eps in np.linspace(0.0, 1.0, 9):
            for a in np.logspace(-3, 3, 13):
                left = asymptotics.poisson_theta(eps, a, "left")
                right = asymptotics.poisson_theta(eps, a, "right")
                worst = max(worst, abs(left - right) / max(1.0, abs(left)))
        assert worst < 1e-12

    def test_validation(self):
        with pytest.raises(DynamicsError):
            asymptotics.poisson_theta(0.0, -1.0, "left")
        with pytest.raises(DynamicsError):
            asymptotics.poisson_theta(0.0, 1.0, "middle")


class TestPartialSums:
    @pytest.mark.parametrize("tau", [0.0, 0.1, math.pi / 2.0])
    def test_s1_matches_direct_sum(self, tau):
        n = 100
        direct = damped_cosine_sum_direct(tau, 2.0 / n, n // 2, weight_power=0)
        assert asymptotics.s1(tau, n) == pytest.approx(direct, abs=1e-12)

    @pytest.mark.parametrize("tau", [0.0, 0.1, math.pi / 2.0])
    def test_s2_matches_direct_sum(self, tau):
        n = 100
        direct = damped_cosine_sum_direct(tau, 2.0 / n, n // 2, weight_power=2)
        assert asymptotics.s2(tau, n) == pytest.approx(direct, rel=1e-12, abs=1e-12)

    def test_s1_at_zero_structure(self):
        n = 100
        expected = -0.5 + 0.5 * math.sqrt(math.pi * n / 2.0) * (
            1.0 + 2.0 * math.exp(-math.pi ** 2 * n / 2.0))
        assert asymptotics.s1(0.0, n) == pytest.approx(expected, rel=1e-13)

    @pytest.mark.parametrize("x", [0.0, 0.8, 2.0])
    def test_s2_is_width_derivative_of_s1(self, x):
        # S2 = -dS1/da at a = 2/N, by central differences in a; probe the
        # pulse region tau ~ x/sqrt(N) where both sums carry significant digits
        n = 64
        tau = x / math.sqrt(n)
        a = 2.0 / n
        da = a * 1e-6
        fd = -(asymptotics.s1(tau, n, a=a + da)
               - asymptotics.s1(tau, n, a=a - da)) / (2.0 * da)
        assert asymptotics.s2(tau, n) == pytest.approx(fd, rel=1e-6)

    def test_widened_variant(self):
        # noise-widened a parameter must be honored
        direct = damped_cosine_sum_direct(0.4, 0.05, 400, weight_power=0)
        assert asymptotics.s1(0.4, 100, a=0.05) == pytest.approx(direct, abs=1e-12)

    def test_large_a_direct_branch(self):
        direct = damped_cosine_sum_direct(0.7, 2.5, 50, weight_power=2)
        assert asymptotics.s2(0.7, 100, a=2.5) == pytest.approx(direct, rel=1e-12)


class TestAsymptoticProfile:
    def test_peak_apex(self):
        assert asymptotics.p1_profile_asymptotic(0.0, 100) == pytest.approx(1.0, abs=1e-12)

    def test_prefactor_root(self):
        n = 100
        assert asymptotics.p1_profile_asymptotic(1.0 / math.sqrt(n), n) == pytest.approx(
            1.0 / 3.0, abs=1e-15)

    @pytest.mark.parametrize("n,bound", [(100, 8e-3), (400, 5e-3), (1600, 1e-3)])
    def test_sup_error_against_exact(self, n, bound):
        taus = np.linspace(0.2, math.pi - 0.2, 301)
        sup = np.max(np.abs(asymptotics.p1_profile_asymptotic(taus, n) - p1_exact(n, taus)))
        assert sup < bound

    def test_sup_error_decreases_with_n(self):
        taus = np.linspace(0.2, math.pi - 0.2, 201)
        sups = [np.max(np.abs(asymptotics.p1_profile_asymptotic(taus, n) - p1_exact(n, taus)))
                for n in (100, 400, 1600)]
        assert sups[0] > sups[1] > sups[2]

    def test_small_n_guard(self):
        with pytest.raises(DynamicsError):
            asymptotics.p1_profile_asymptotic(0.0, 20)


class TestPulseMetrics:
    def test_width_definition(self):
        m = asymptotics.pulse_metrics(101, g=2.0)
        assert m.width_t * math.sqrt(101) * 2.0 / (4.0 * math.pi) == pytest.approx(1.0)
        m_even = asymptotics.pulse_metrics(100, g=2.0)
        assert m_even.width_t * math.sqrt(100) * 2.0 / (2.0 * math.pi) == pytest.approx(1.0)

    def test_fwhm_scaling(self):
        vals = [asymptotics.pulse_metrics(n, g=1.0).fwhm_t * math.sqrt(n)
                for n in (100, 400, 1600)]
        assert max(vals) / min(vals) - 1.0 < 0.02

    def test_fwhm_to_width_constant(self):
        ratios = [asymptotics.pulse_metrics(n, g=1.0).fwhm_to_width
                  for n in (101, 401, 1601)]
        assert max(ratios) / min(ratios) - 1.0 < 0.02

    def test_plateau_large_n(self):
        m = asymptotics.pulse_metrics(10 ** 4, g=1.0)
        assert m.plateau_value == pytest.approx(1.0 / 3.0, abs=1e-4)

    def test_peak_orientation_at_half_period(self):
        # odd N: oscillating part flips sign at tau = pi (trace minimum);
        # even N: full-height maximum
        n_odd, n_even = 135, 134
        plateau_odd = p1_time_average(n_odd)
        assert p1_exact(n_odd, math.pi) < plateau_odd - 0.5
        assert p1_exact(n_even, math.pi) == pytest.approx(1.0, abs=1e-9)

    def test_parameter_guards(self):
        with pytest.raises(DynamicsError):
            asymptotics.pulse_metrics(10, g=1.0)
        with pytest.raises(DynamicsError):
            asymptotics.pulse_metrics(100, g=0.0)
