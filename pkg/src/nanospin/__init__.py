"""Exact nuclear-spin polarization dynamics in ellipsoidal nano-cavities.

Spin-1/2 clusters with distance-independent effective dipolar couplings:
closed-form polarization of the initially polarized spin, cavity-geometry
form factors and inversion, noise-averaged dynamics in fluctuating bubbles,
NMR line shapes, and brute-force/coupled-basis validation paths.
"""

from .asymptotics import (PulseMetrics, p1_profile_asymptotic, poisson_theta,
                          pulse_metrics, s1, s2)
from .cg import (CouplingTable, MultiplicityTable, cg_coefficient,
                 multiplicity_w, p1_via_cg)
from .dynamics import (ClusterSpec, PolarizationTrace, harmonic_weight,
                       p1_exact, p1_time_average, p_other, trace)
from .geometry import (CavityGeometry, GasSpec, coupling_g, form_factor,
                       invert_measurement, legendre_p2, shape_integral)
from .lineshape import LineShape, delta_comb, fid, moments, spectrum
from .noise import (MonteCarloResult, NoiseModel, monte_carlo,
                    p1_noise_analytic, p1_noise_gaussian_approx,
                    peak_envelope, t_squared)
from .oracle import (SpinOperatorSet, build_operators, invariance_check,
                     polarization_trace_exact)

__version__ = "0.1.0"

__all__ = [
    "CavityGeometry", "ClusterSpec", "CouplingTable", "GasSpec", "LineShape",
    "MonteCarloResult", "MultiplicityTable", "NoiseModel",
    "PolarizationTrace", "PulseMetrics", "SpinOperatorSet",
    "build_operators", "cg_coefficient", "coupling_g", "delta_comb", "fid",
    "form_factor", "harmonic_weight", "invariance_check",
    "invert_measurement", "legendre_p2", "moments", "monte_carlo",
    "multiplicity_w", "p1_exact", "p1_noise_analytic",
    "p1_noise_gaussian_approx", "p1_profile_asymptotic", "p1_time_average",
    "p1_via_cg", "p_other", "peak_envelope", "poisson_theta",
    "polarization_trace_exact", "pulse_metrics", "s1", "s2",
    "shape_integral", "spectrum", "t_squared", "trace",
]
