"""Polarization dynamics with a fluctuating cavity volume.

Volume fluctuations enter the dynamics only through the coupling g(t); the
accumulated phase tau = (1/2) int_0^t g dt' replaces g*t/2.  For Gaussian
fluctuations delta g(t) with variance <dg^2> and correlation function
gamma(t), every oscillating harmonic of frequency f = I_B + 1/2 picks up a
damping factor

    exp(-f^2 <dg^2> T2(t)),   T2(t) = int_0^t (t - t') gamma(t') dt',

while the stationary part survives, so the peak train decays irreversibly
onto the non-ergodic plateau.  T2 crosses over from t^2/2 (correlation time
longer than the dephasing time) to t_c * t (shorter), giving Gaussian or
exponential peak-envelope decay respectively.

A vectorized Ornstein-Uhlenbeck Monte Carlo realizes the same noise
exactly (AR(1) updates are exact for the OU process) and verifies the
analytic average.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from .asymptotics import s1, s2
from .dynamics import _series

# Realizations are reduced in fixed-size chunks so that means are bitwise
# independent of how many workers computed them.
_CHUNK = 64


class NoiseError(ValueError):
    """Invalid noise-model input."""


@dataclass(frozen=True)
class NoiseModel:
    """Gaussian coupling noise g(t) = mean_g + dg(t).

    mean_g   : mean coupling <g> (rad/s)
    variance : <dg^2> (rad^2/s^2)
    t_c      : correlation time (s)
    kernel   : normalized correlation function gamma(t) with gamma(0) = 1;
               None selects the exponential kernel exp(-t/t_c), which is the
               only kernel the Monte Carlo can realize (as an OU process)
    """

    mean_g: float
    variance: float
    t_c: float
    kernel: object = None

    def __post_init__(self):
        if self.variance < 0.0:
            raise NoiseError("variance must be non-negative")
        if not self.t_c > 0.0:
            raise NoiseError("correlation time must be positive")
        if self.kernel is not None:
            g0 = float(self.kernel(0.0))
            if abs(g0 - 1.0) > 1e-9:
                raise NoiseError(f"kernel must satisfy gamma(0) = 1, got {g0}")

    @property
    def relative_variance(self) -> float:
        return self.variance / self.mean_g ** 2

    def gaussian_regime(self) -> bool:
        """True when t_c^2 <dg^2> >= 1 (envelope decays as a Gaussian in m)."""
        return self.t_c ** 2 * self.variance >= 1.0


def t_squared(t, model: NoiseModel):
    """Dephasing kernel T2(t) = int_0^t (t - t') gamma(t') dt' (units s^2).

    Exponential kernel: closed form t_c*t - t_c^2 (1 - exp(-t/t_c)),
    evaluated through expm1/series so the small-t limit t^2/2 keeps full
    precision.  Other kernels go through adaptive quadrature (1e-10
    relative).
    """
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0.0):
        raise NoiseError("t must be non-negative")
    if model.kernel is None:
        x = t_arr / model.t_c
        # x + expm1(-x) loses all digits below x ~ 1e-5; series instead
        out = np.where(x < 1e-5,
                       0.5 * x * x * (1.0 - x / 3.0 + x * x / 12.0),
                       x + np.expm1(-x))
        out = model.t_c ** 2 * out
        return float(out) if t_arr.ndim == 0 else out

    def one(ti: float) -> float:
        if ti == 0.0:
            return 0.0
        val, err = integrate.quad(lambda s: (ti - s) * model.kernel(s), 0.0, ti,
                                  epsabs=0.0, epsrel=1e-10, limit=200)
        if abs(err) > 1e-8 * max(abs(val), 1e-300):
            raise NoiseError(f"kernel quadrature failed at t={ti} (err={err})")
        return val

    if t_arr.ndim == 0:
        return one(float(t_arr))
    return np.array([one(ti) for ti in t_arr.ravel()]).reshape(t_arr.shape)


def p1_noise_analytic(n: int, t, model: NoiseModel):
    """Noise-averaged polarization of spin 1 at lab time t (scalar or array).

    Exact multiplicity-weighted sum: each harmonic of frequency
    f = (N - 2k)/2 is damped by exp(-f^2 <dg^2> T2(t)) and oscillates at
    cos(<g> t f); the stationary part is noise-invariant.  With variance 0
    this reduces identically to the noiseless series.
    """
    pbar, weights, freqs = _series(n)
    f = freqs / 2.0  # I_B + 1/2
    t_arr = np.asarray(t, dtype=float)
    t2 = t_squared(t_arr, model)
    phase = np.multiply.outer(model.mean_g * t_arr, f)
    damp_exp = np.multiply.outer(np.asarray(t2) * model.variance, f * f)
    vals = pbar + (np.exp(-damp_exp) * np.cos(phase)) @ weights
    return float(vals) if t_arr.ndim == 0 else vals


def gaussian_width_parameter(n: int, t, model: NoiseModel):
    """Combined pulse-width parameter a = 2/N + <dg^2> T2(t)."""
    return 2.0 / n + model.variance * t_squared(t, model)


def p1_noise_gaussian_approx(n: int, t, model: NoiseModel,
                             method: str = "auto", with_parts: bool = False):
    """Large-N Gaussian-weight approximation of the noise-averaged P1.

    Replaces the binomial harmonic weights by their Gaussian limit:

        P1 = 1/3 + 16/(3 N^{3/2} sqrt(pi/2))
                   * sum_{n'=1}^{N/2} cos(<g> t n') (n'^2 - 1/4) e^{-a n'^2}

    with a = 2/N + <dg^2> T2(t).  method "direct" sums the series, "poisson"
    uses the resummed comb (S2 - S1/4), "auto" picks by the size of a.
    Intended for N >> 1; below N = 50 a warning is issued and accuracy
    degrades to O(1/sqrt(N)).  with_parts=True returns (plateau,
    oscillating) so callers can compare tiny excesses without cancellation
    against the 1/3.
    """
    if n < 50:
        warnings.warn(f"Gaussian approximation is O(1/sqrt(N)); N = {n} < 50",
                      stacklevel=2)
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    a_arr = np.atleast_1d(gaussian_width_parameter(n, t_arr, model))
    pref = 16.0 / (3.0 * n ** 1.5 * math.sqrt(math.pi / 2.0))

    osc = np.empty_like(t_arr)
    for i, (ti, ai) in enumerate(zip(t_arr, a_arr)):
        use_poisson = method == "poisson" or (method == "auto" and ai < 1.0)
        if method not in ("auto", "direct", "poisson"):
            raise NoiseError(f"unknown method {method!r}")
        if use_poisson:
            tau_eff = 0.5 * model.mean_g * ti
            osc[i] = pref * (s2(tau_eff, n, a=ai) - 0.25 * s1(tau_eff, n, a=ai))
        else:
            ns = np.arange(1, n // 2 + 1, dtype=float)
            osc[i] = pref * np.sum(
                np.cos(model.mean_g * ti * ns) * (ns * ns - 0.25) * np.exp(-ai * ns * ns))
    plateau = np.full_like(t_arr, 1.0 / 3.0)
    if with_parts:
        if np.ndim(t) == 0:
            return 1.0 / 3.0, float(osc[0])
        return plateau, osc
    vals = plateau + osc
    return float(vals[0]) if np.ndim(t) == 0 else vals


def peak_width_parameter(n: int, m: int, model: NoiseModel,
                         drop_finite_size: bool = False) -> float:
    """Width parameter a at the m-th peak, t = 2 pi m / <g>.

    Gaussian regime (t_c^2 <dg^2> >= 1):  a = 2/N + 2 pi^2 m^2 <dg^2>/<g>^2
    exponential regime:                   a = 2/N + 2 pi m t_c <dg^2>/<g>
    drop_finite_size removes the 2/N term (the pure large-N, large-m form).
    """
    if m < 1:
        raise NoiseError(f"peak index must be >= 1, got {m}")
    if model.gaussian_regime():
        a = 2.0 * math.pi ** 2 * m * m * model.variance / model.mean_g ** 2
    else:
        a = 2.0 * math.pi * m * model.t_c * model.variance / model.mean_g
    if not drop_finite_size:
        a += 2.0 / n
    return a


def peak_excess(n: int, m: int, model: NoiseModel,
                drop_finite_size: bool = False) -> float:
    """Magnitude of the m-th peak's deviation from the 1/3 plateau."""
    if n < 50:
        warnings.warn(f"peak envelope is a large-N form; N = {n} < 50",
                      stacklevel=2)
    a = peak_width_parameter(n, m, model, drop_finite_size)
    return 4.0 * math.sqrt(2.0) / (n ** 1.5 * math.sqrt(math.pi)) * math.exp(-a)


def peak_envelope(n: int, m: int, model: NoiseModel,
                  drop_finite_size: bool = False) -> float:
    """Envelope of the polarization peaks at t = 2 pi m / <g>.

    1/3 + peak excess for even N; for odd N the oscillating part alternates,
    so odd peaks dip below the plateau (minus sign) and even peaks rise
    above it.
    """
    excess = peak_excess(n, m, model, drop_finite_size)
    sign = -1.0 if (n % 2 == 1 and m % 2 == 1) else 1.0
    return 1.0 / 3.0 + sign * excess


@dataclass(frozen=True)
class MonteCarloResult:
    """Noise-averaged trace from OU realizations.

    mean / stderr are per grid point; stderr is the standard error of the
    mean over realizations.
    """

    times: np.ndarray
    mean: np.ndarray
    stderr: np.ndarray
    n_spins: int
    model: NoiseModel
    n_realizations: int
    seed: int
    p_other_mean: np.ndarray = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "p_other_mean",
                           (1.0 - self.mean) / (self.n_spins - 1.0))


def ou_path(model: NoiseModel, t_grid, seed: int, index: int = 0) -> np.ndarray:
    """One OU realization of dg(t) on the grid (diagnostic helper).

    Uses the same exact AR(1) recursion and the same per-realization
    substream (SeedSequence entropy=seed, spawn_key=(index,)) as the
    Monte Carlo, so realization `index` of a monte_carlo run can be
    reproduced exactly.
    """
    if model.kernel is not None:
        raise NoiseError("OU realization requires the exponential kernel")
    t = np.asarray(t_grid, dtype=float)
    h = np.diff(t)
    rho = np.exp(-h / model.t_c)
    innovation = np.sqrt(model.variance * (1.0 - rho * rho))
    rng = np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(index,)))
    draws = rng.standard_normal(t.size)
    dg = np.empty(t.size)
    dg[0] = math.sqrt(model.variance) * draws[0]
    for k in range(t.size - 1):
        dg[k + 1] = rho[k] * dg[k] + innovation[k] * draws[k + 1]
    return dg


def _simulate_chunk(n: int, t: np.ndarray, model: NoiseModel, seed: int,
                    lo: int, hi: int) -> tuple[int, np.ndarray, np.ndarray]:
    """(count, per-point mean, per-point sum of squared deviations) for
    realizations lo..hi-1.

    Each realization draws from its own SeedSequence substream
    (entropy=seed, spawn_key=(index,)), so results do not depend on which
    worker ran it.  The OU update is the exact AR(1) recursion; the phase
    integral uses the trapezoid rule on the grid.
    """
    n_pts = t.size
    h = np.diff(t)
    rho = np.exp(-h / model.t_c)
    innovation = np.sqrt(model.variance * (1.0 - rho * rho))
    count = hi - lo

    draws = np.empty((count, n_pts))
    for idx in range(count):
        rng = np.random.default_rng(
            np.random.SeedSequence(entropy=seed, spawn_key=(lo + idx,)))
        draws[idx] = rng.standard_normal(n_pts)

    dg = np.empty((count, n_pts))
    dg[:, 0] = math.sqrt(model.variance) * draws[:, 0]  # stationary start
    for k in range(n_pts - 1):
        dg[:, k + 1] = rho[k] * dg[:, k] + innovation[k] * draws[:, k + 1]

    g_path = model.mean_g + dg
    tau = np.empty((count, n_pts))
    tau[:, 0] = 0.0
    np.cumsum(0.25 * h * (g_path[:, :-1] + g_path[:, 1:]), axis=1, out=tau[:, 1:])

    pbar, weights, freqs = _series(n)
    p1 = np.full((count, n_pts), pbar)
    for w, f in zip(weights, freqs):
        p1 += w * np.cos(f * tau)
    mean = p1.mean(axis=0)
    return count, mean, ((p1 - mean) ** 2).sum(axis=0)


def monte_carlo(n: int, t_grid, model: NoiseModel, n_realizations: int,
                seed: int, n_jobs: int = 1) -> MonteCarloResult:
    """Average P1 over OU realizations of the fluctuating coupling.

    The grid step must satisfy h <= t_c/10 (phase-integration resolution).
    Fully deterministic given (seed, n_realizations, grid): realizations are
    reduced in fixed chunks in index order, so any n_jobs gives bitwise
    identical results.  Only the exponential kernel is supported.
    """
    if model.kernel is not None:
        raise NoiseError("Monte Carlo supports only the exponential kernel")
    if n_realizations < 2:
        raise NoiseError("need at least 2 realizations")
    t = np.asarray(t_grid, dtype=float)
    if t.size < 2 or not np.all(np.diff(t) > 0):
        raise NoiseError("t grid must be strictly increasing with >= 2 points")
    h_max = float(np.max(np.diff(t)))
    if h_max > model.t_c / 10.0 * (1.0 + 1e-12):
        raise NoiseError(
            f"grid step {h_max:.3g} exceeds t_c/10 = {model.t_c / 10.0:.3g}")

    bounds = [(lo, min(lo + _CHUNK, n_realizations))
              for lo in range(0, n_realizations, _CHUNK)]
    if n_jobs > 1:
        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            partials = list(pool.map(
                lambda b: _simulate_chunk(n, t, model, seed, *b), bounds))
    else:
        partials = [_simulate_chunk(n, t, model, seed, lo, hi) for lo, hi in bounds]

    # Welford-style merge in fixed chunk order: cancellation-free variance,
    # bitwise reproducible for any worker count
    count = 0
    mean = np.zeros(t.size)
    m2 = np.zeros(t.size)
    for c_count, c_mean, c_m2 in partials:
        delta = c_mean - mean
        new_count = count + c_count
        mean = mean + delta * (c_count / new_count)
        m2 = m2 + c_m2 + delta * delta * (count * c_count / new_count)
        count = new_count

    stderr = np.sqrt(m2 / (n_realizations - 1) / n_realizations)
    return MonteCarloResult(times=t, mean=mean, stderr=stderr, n_spins=n,
                            model=model, n_realizations=n_realizations, seed=seed)
