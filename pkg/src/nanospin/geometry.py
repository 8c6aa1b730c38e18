"""Ellipsoidal cavity geometry: shape integral, form-factor and spin coupling.

A spin-carrying gas confined to an ellipsoidal cavity of semi-axes (a, b, b)
acquires a distance-independent effective dipolar coupling

    g = gamma**2 * hbar * F / V,      F = pi * I(a/b) * P2(cos(alpha)),

where I is a dimensionless shape integral ranging over (-4/3, 2/3], alpha is
the angle between the ellipsoid axis and the external field, and V is the
cavity volume.  The module also inverts a measured pulse period/width pair
back into (V, a/b).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .constants import GAMMA_PROTON, HBAR_ERG_S, NM3_PER_CM3, NM3_TO_CM3

# Below this |1 - (b/a)^2| both closed-form branches lose all significant
# digits to cancellation; the Taylor series takes over.
_SERIES_THRESHOLD = 1e-4

# Attainable range of the shape integral (sphere -> 0, needle -> 2/3,
# pancake -> -4/3).
SHAPE_INTEGRAL_MAX = 2.0 / 3.0
SHAPE_INTEGRAL_MIN = -4.0 / 3.0

_ASPECT_LO = 1e-6
_ASPECT_HI = 1e6


class GeometryError(ValueError):
    """Invalid geometric input."""


class MagicAngleError(GeometryError):
    """P2(cos alpha) vanishes: cavity shape is unidentifiable."""


class NoSolutionError(GeometryError):
    """Target shape integral lies outside the attainable range."""


@dataclass(frozen=True)
class CavityGeometry:
    """Axially symmetric ellipsoidal cavity.

    a, b   : semi-axis along the symmetry axis / transverse semi-axis (nm)
    alpha  : angle between the ellipsoid axis and the external field (rad)
    """

    a: float
    b: float
    alpha: float = 0.0
    volume: float = field(init=False)

    def __post_init__(self):
        if not (self.a > 0.0 and self.b > 0.0):
            raise GeometryError(f"semi-axes must be positive, got a={self.a}, b={self.b}")
        if not (0.0 <= self.alpha <= math.pi):
            raise GeometryError(f"alpha must lie in [0, pi], got {self.alpha}")
        object.__setattr__(self, "volume", (4.0 * math.pi / 3.0) * self.a * self.b ** 2)

    @property
    def aspect(self) -> float:
        return self.a / self.b


@dataclass(frozen=True)
class GasSpec:
    """Spin-carrying gas inside the cavity.

    gamma         : gyromagnetic ratio (rad s^-1 G^-1, CGS-Gaussian)
    concentration : spin concentration c = N/V (nm^-3)
    n_spins       : number of spins N
    """

    gamma: float = GAMMA_PROTON
    concentration: float = 1e-3
    n_spins: int = 2

    def __post_init__(self):
        if self.gamma <= 0.0:
            raise GeometryError("gamma must be positive")
        if self.concentration <= 0.0:
            raise GeometryError("concentration must be positive")
        if self.n_spins < 2:
            raise GeometryError("n_spins must be at least 2")


def legendre_p2(x: float) -> float:
    """Second Legendre polynomial P2(x) = (3 x^2 - 1)/2 for |x| <= 1."""
    if abs(x) > 1.0 + 1e-12:
        raise GeometryError(f"P2 argument out of range: {x}")
    x = max(-1.0, min(1.0, x))
    return 1.5 * x * x - 0.5


def shape_integral(aspect: float) -> float:
    """Dimensionless shape integral I of an ellipsoid with axis ratio a/b.

    Prolate branch (a >= b) uses the inverse hyperbolic tangent form,
    oblate branch the arctangent form; near the sphere both cancel
    catastrophically and a Taylor series in s = 1 - (b/a)^2 is used:

        I = (4/15) s + (4/35) s^2 + (4/63) s^3 + O(s^4).

    Strictly increasing in the aspect ratio, with I(0+) = -4/3, I(1) = 0,
    I(inf) = 2/3.
    """
    if not aspect > 0.0:
        raise GeometryError(f"aspect ratio must be positive, got {aspect}")
    s = 1.0 - 1.0 / (aspect * aspect)  # signed eccentricity squared
    if abs(s) < _SERIES_THRESHOLD:
        return s * (4.0 / 15.0 + s * (4.0 / 35.0 + s * (4.0 / 63.0)))
    if aspect >= 1.0:
        e2 = s
        if e2 >= 1.0:  # 1/aspect^2 below float resolution: needle limit
            return 2.0 / 3.0
        e = math.sqrt(e2)
        return 2.0 / 3.0 + 2.0 * (1.0 / e2 - 1.0) * (1.0 - math.atanh(e) / e)
    e2 = 1.0 / (aspect * aspect) - 1.0  # |eps|^2 = (b/a)^2 - 1
    e = math.sqrt(e2)
    return 2.0 / 3.0 - 2.0 * (1.0 / e2 + 1.0) * (1.0 - math.atan(e) / e)


def form_factor(geom: CavityGeometry) -> float:
    """Form-factor F = pi * I(a/b) * P2(cos alpha) of the cavity."""
    return math.pi * shape_integral(geom.aspect) * legendre_p2(math.cos(geom.alpha))


def coupling_g(geom: CavityGeometry, gas: GasSpec) -> float:
    """Effective spin-spin coupling g = gamma^2 hbar F / V in rad/s.

    The cavity volume is converted nm^3 -> cm^3 internally; everything else
    is already CGS-Gaussian.
    """
    v_cm3 = geom.volume * NM3_TO_CM3
    return gas.gamma ** 2 * HBAR_ERG_S * form_factor(geom) / v_cm3


def invert_measurement(period: float, width: float, concentration: float,
                       alpha: float, gamma: float = GAMMA_PROTON) -> tuple[float, float]:
    """Recover cavity volume and aspect ratio from pulse observables.

    period, width : pulse period T and width Delta_T (s), with the width
                    convention Delta_T = 4 pi / (g sqrt(N)) that makes the
                    inversion exact
    concentration : spin concentration c (nm^-3)
    alpha         : field angle (rad)

    Returns (volume in nm^3, aspect ratio a/b).  The volume follows from
    V = (4/c)(T/Delta_T)^2; the aspect ratio solves

        I(a/b) * P2(cos alpha) = 8 T / (c gamma^2 hbar Delta_T^2)

    by bisection on the monotone map aspect -> I.  Raises MagicAngleError
    when P2(cos alpha) ~ 0 and NoSolutionError when the target lies outside
    (-4/3, 2/3].
    """
    if period <= 0.0 or width <= 0.0:
        raise GeometryError("period and width must be positive")
    if period / width <= 1.0:
        raise GeometryError("period must exceed the pulse width")
    if concentration <= 0.0:
        raise GeometryError("concentration must be positive")
    p2 = legendre_p2(math.cos(alpha))
    if abs(p2) < 1e-9:
        raise MagicAngleError(
            "field is at the magic angle; the shape integral drops out of g")

    volume = (4.0 / concentration) * (period / width) ** 2
    c_cgs = concentration * NM3_PER_CM3
    target = 8.0 * period / (c_cgs * gamma ** 2 * HBAR_ERG_S * width ** 2) / p2
    if not (SHAPE_INTEGRAL_MIN < target <= SHAPE_INTEGRAL_MAX):
        raise NoSolutionError(
            f"target shape integral {target:.6g} outside ({SHAPE_INTEGRAL_MIN:.4g}, "
            f"{SHAPE_INTEGRAL_MAX:.4g}]")
    return volume, _solve_aspect(target)


def _solve_aspect(target: float) -> float:
    """Bisection for shape_integral(aspect) = target on [1e-6, 1e6]."""
    if target == 0.0:
        return 1.0
    lo, hi = _ASPECT_LO, _ASPECT_HI
    if shape_integral(lo) > target or shape_integral(hi) < target:
        raise NoSolutionError(f"target {target:.6g} not bracketed by aspect range")
    for _ in range(200):
        mid = math.sqrt(lo * hi)  # geometric mean suits the log-wide bracket
        if shape_integral(mid) < target:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-12 * max(1.0, lo):
            break
    return 0.5 * (lo + hi)
