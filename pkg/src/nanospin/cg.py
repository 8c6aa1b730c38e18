"""Total-spin evaluation of the polarization via angular-momentum coupling.

Independent validation path for the closed-form series in `dynamics`: spin 1
(a single spin-1/2) is coupled to the remaining fragment of total spin I_B,
and the trace defining P1 is carried out over total-spin states
|I_B; I = I_B +- 1/2, m> with Clebsch-Gordan coefficients and fragment
multiplicities w(I_B).  The route is quadratic-cost bookkeeping over
half-integers and exists for validation, not production; `dynamics.p1_exact`
is the fast path.

Half-integer quantum numbers are carried as exact doubled integers (2*I)
to keep all comparisons exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

CG_N_MAX = 24


class QuantumNumberError(ValueError):
    """Violated angular-momentum coupling rule."""


def _as_doubled(x, name: str) -> int:
    two_x = 2.0 * x
    if abs(two_x - round(two_x)) > 1e-9:
        raise QuantumNumberError(f"{name}={x} is not a half-integer")
    return int(round(two_x))


def cg_coefficient(m_a: float, i_b: float, i_total: float, m: float) -> float:
    """Clebsch-Gordan coefficient <1/2 m_a; I_B (m - m_a) | I m>.

    Only the spin-1/2 x I_B ladder is supported, I = I_B +- 1/2.  Signs
    follow the Condon-Shortley convention: the magnitudes are

        [(I_B + 1/2 +- m) / (2 I_B + 1)]^(1/2)

    and the I = I_B - 1/2 branch with m_a = +1/2 carries the minus sign
    (required for orthogonality of the two total-spin states; with both
    branches taken positive the cross terms of the polarization trace would
    vanish identically).
    """
    two_ma = _as_doubled(m_a, "m_a")
    two_ib = _as_doubled(i_b, "i_b")
    two_i = _as_doubled(i_total, "i_total")
    two_m = _as_doubled(m, "m")
    return _cg2(two_ma, two_ib, two_i, two_m)


def _cg2(two_ma: int, two_ib: int, two_i: int, two_m: int) -> float:
    if two_ma not in (-1, 1):
        raise QuantumNumberError(f"m_a must be +-1/2, got {two_ma / 2}")
    if two_ib < 0:
        raise QuantumNumberError("I_B must be non-negative")
    if two_i not in (two_ib - 1, two_ib + 1) or two_i < 0:
        raise QuantumNumberError(
            f"I={two_i / 2} not in {{I_B - 1/2, I_B + 1/2}} for I_B={two_ib / 2}")
    if abs(two_m) > two_i:
        raise QuantumNumberError(f"|m|={abs(two_m) / 2} exceeds I={two_i / 2}")
    two_mb = two_m - two_ma
    if abs(two_mb) > two_ib:
        return 0.0
    plus = (two_ib + 1 + two_m) / (2.0 * (two_ib + 1))   # (I_B + 1/2 + m)/(2 I_B + 1)
    minus = (two_ib + 1 - two_m) / (2.0 * (two_ib + 1))
    if two_i == two_ib + 1:
        return math.sqrt(plus) if two_ma == 1 else math.sqrt(minus)
    return -math.sqrt(minus) if two_ma == 1 else math.sqrt(plus)


def multiplicity_w(i_b: float, n_b: int) -> int:
    """Number of ways to couple n_b spins-1/2 to total fragment spin I_B.

    w(I_B) = (2 I_B + 1)/(N_B + 1) * C(N_B + 1, N_B/2 + I_B + 1); exact
    integer count.
    """
    two_ib = _as_doubled(i_b, "i_b")
    if n_b < 1:
        raise QuantumNumberError(f"fragment size must be >= 1, got {n_b}")
    if two_ib % 2 != n_b % 2 or not 0 <= two_ib <= n_b:
        raise QuantumNumberError(f"I_B={i_b} invalid for a fragment of {n_b} spins")
    num = (two_ib + 1) * math.comb(n_b + 1, (n_b + two_ib) // 2 + 1)
    if num % (n_b + 1) != 0:
        raise AssertionError("multiplicity is not an integer")  # pragma: no cover
    return num // (n_b + 1)


def fragment_spins(n_b: int) -> list[float]:
    """Allowed fragment spins I_B for n_b spins-1/2, ascending."""
    start = 0 if n_b % 2 == 0 else 1
    return [two_ib / 2.0 for two_ib in range(start, n_b + 1, 2)]


@dataclass(frozen=True)
class CouplingTable:
    """All coupling coefficients of 1/2 x I_B, keyed by (2m_a, 2I, 2m)."""

    i_b: float

    def entries(self) -> dict[tuple[int, int, int], float]:
        two_ib = _as_doubled(self.i_b, "i_b")
        table = {}
        for two_i in ({1} if two_ib == 0 else {two_ib - 1, two_ib + 1}):
            for two_m in range(-two_i, two_i + 1, 2):
                for two_ma in (-1, 1):
                    table[(two_ma, two_i, two_m)] = _cg2(two_ma, two_ib, two_i, two_m)
        return table

    def normalization_defect(self) -> float:
        """Worst deviation of sum_{m_a} C^2 from 1 over all (I, m)."""
        two_ib = _as_doubled(self.i_b, "i_b")
        worst = 0.0
        for two_i in ({1} if two_ib == 0 else {two_ib - 1, two_ib + 1}):
            for two_m in range(-two_i, two_i + 1, 2):
                total = sum(_cg2(two_ma, two_ib, two_i, two_m) ** 2
                            for two_ma in (-1, 1))
                worst = max(worst, abs(total - 1.0))
        return worst


@dataclass(frozen=True)
class MultiplicityTable:
    """Fragment-spin multiplicities w(I_B) for a fragment of n_b spins."""

    n_b: int

    def w(self) -> dict[float, int]:
        return {ib: multiplicity_w(ib, self.n_b) for ib in fragment_spins(self.n_b)}

    def dimension(self) -> int:
        """sum (2 I_B + 1) w(I_B); must equal 2^n_b."""
        return sum((int(2 * ib) + 1) * cnt for ib, cnt in self.w().items())

    def level_count(self, m_b: float) -> int:
        """sum of w(I_B) over I_B >= |m_B|; must equal C(n_b, n_b/2 + m_b)."""
        two_mb = _as_doubled(m_b, "m_b")
        return sum(cnt for ib, cnt in self.w().items() if int(2 * ib) >= abs(two_mb))


def _pair_terms(n: int):
    """Yield (w, two_i, two_ip, elem^2 summed over m) for all (I, I') pairs."""
    n_b = n - 1
    for ib in fragment_spins(n_b):
        two_ib = int(2 * ib)
        w = multiplicity_w(ib, n_b)
        spins = [1] if two_ib == 0 else [two_ib - 1, two_ib + 1]
        for two_i in spins:
            for two_ip in spins:
                two_mmax = min(two_i, two_ip)
                acc = 0.0
                for two_m in range(-two_mmax, two_mmax + 1, 2):
                    elem = 0.0
                    for two_ma in (-1, 1):
                        if abs(two_m - two_ma) > two_ib:
                            continue
                        elem += (0.5 * two_ma
                                 * _cg2(two_ma, two_ib, two_ip, two_m)
                                 * _cg2(two_ma, two_ib, two_i, two_m))
                    acc += elem * elem
                yield w, two_i, two_ip, acc


def p1_via_cg(n: int, tau: float) -> float:
    """Polarization of spin 1 evaluated through the coupled-basis trace.

    Sums all four (I, I') pair combinations with evolution phases
    exp(i tau [I(I+1) - I'(I'+1)]); the result is real and must match
    dynamics.p1_exact to ~1e-12.  Supported for 2 <= n <= 24.
    """
    _check_n(n)
    total = 0.0
    for w, two_i, two_ip, acc in _pair_terms(n):
        # I(I+1) - I'(I'+1) with doubled integers
        delta = (two_i * (two_i + 2) - two_ip * (two_ip + 2)) / 4.0
        total += w * acc * math.cos(tau * delta)
    return total / 2.0 ** (n - 2)


def p1_stationary_via_cg(n: int) -> float:
    """Stationary (I = I') part of the coupled-basis polarization."""
    _check_n(n)
    total = sum(w * acc for w, two_i, two_ip, acc in _pair_terms(n) if two_i == two_ip)
    return total / 2.0 ** (n - 2)


def p1_oscillating_via_cg(n: int, tau: float) -> float:
    """Oscillating (I != I') part of the coupled-basis polarization.

    Explicit m, m' double sum over the two mixed (I, I') pairs; validates
    the summation step that collapses it to the closed-form cosine series.
    """
    _check_n(n)
    total = 0.0
    for w, two_i, two_ip, acc in _pair_terms(n):
        if two_i == two_ip:
            continue
        delta = (two_i * (two_i + 2) - two_ip * (two_ip + 2)) / 4.0
        total += w * acc * math.cos(tau * delta)
    return total / 2.0 ** (n - 2)


def _check_n(n: int):
    if not 2 <= n <= CG_N_MAX:
        raise QuantumNumberError(
            f"coupled-basis route supports 2 <= N <= {CG_N_MAX}, got {n}")
