"""Cross-validation suite: closed form vs coupled-basis trace vs brute force.

Runs the three independent evaluation paths of the polarization against one
another together with the structural identities (weight sum, total-spin
multiplicities, theta resummation) and reports the worst deviation per
check.  This is the engine behind the `validate` CLI subcommand.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import asymptotics, cg, dynamics, oracle


@dataclass
class CheckResult:
    name: str
    max_deviation: float
    tolerance: float
    passed: bool = field(init=False)

    def __post_init__(self):
        self.passed = self.max_deviation < self.tolerance

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (f"[{status}] {self.name}: max deviation {self.max_deviation:.3e} "
                f"(tolerance {self.tolerance:.1e})")


def _grid(n: int, points: int = 200) -> np.ndarray:
    period = math.pi if n % 2 == 0 else 2.0 * math.pi
    return np.linspace(0.0, period, points)


def run_validation(max_n: int = 10, tolerance: float = 1e-10,
                   weight_perturbation: float = 0.0) -> list[CheckResult]:
    """Run every cross-check up to cluster size max_n.

    weight_perturbation shifts one closed-form harmonic weight; any nonzero
    value must make the equivalence checks fail (negative control for the
    suite itself).
    """
    if not 2 <= max_n <= oracle.ORACLE_N_MAX:
        raise ValueError(f"max_n must lie in [2, {oracle.ORACLE_N_MAX}]")
    results = []

    worst_oracle = 0.0
    worst_cg = 0.0
    worst_weight_sum = 0.0
    for n in range(2, max_n + 1):
        taus = _grid(n)
        closed = dynamics.p1_exact(n, taus) + weight_perturbation * np.cos(taus * n)
        ops = oracle.reduced_operators(n, g=2.0)  # tau = t at g = 2
        brute = oracle.polarization_trace_exact(ops, 1, taus)
        worst_oracle = max(worst_oracle, float(np.max(np.abs(closed - brute))))
        if n <= cg.CG_N_MAX:
            coupled = np.array([cg.p1_via_cg(n, t) for t in taus[::4]])
            worst_cg = max(worst_cg, float(np.max(np.abs(closed[::4] - coupled))))
        at_zero = dynamics.p1_exact(n, 0.0) + weight_perturbation
        worst_weight_sum = max(worst_weight_sum, abs(at_zero - 1.0))
    results.append(CheckResult("closed form vs brute force", worst_oracle, tolerance))
    results.append(CheckResult("closed form vs coupled-basis trace", worst_cg, tolerance))
    results.append(CheckResult("weight-sum identity P1(0) = 1", worst_weight_sum, 1e-12))

    worst_stat = max(
        abs(cg.p1_stationary_via_cg(n) - dynamics.p1_time_average(n))
        for n in range(2, max_n + 1))
    results.append(CheckResult("stationary part vs time average", worst_stat, 1e-12))

    worst_mult = 0.0
    for n in range(2, min(max_n, 8) + 1):
        defects = oracle.symmetry_defects(oracle.reduced_operators(n))
        worst_mult = max(worst_mult, float(defects["multiplicity_mismatch"]),
                         defects["max_asymmetry"], defects["max_commutator"])
    results.append(CheckResult("total-spin multiplicities and symmetry", worst_mult, 1e-10))

    inv = oracle.invariance_check(
        min(max_n, 6), np.linspace(0.0, 4.0, 9),
        [(0.0, 2.0), (10.0, 2.0), (3.7, -0.4)], tolerance=tolerance)
    worst_inv = max(inv["max_invariance_deviation"],
                    inv["max_conservation_deviation"],
                    inv["max_spin_equivalence_deviation"])
    results.append(CheckResult("Hamiltonian-parameter invariance", worst_inv, tolerance))

    worst_theta = 0.0
    for eps in np.linspace(0.0, 1.0, 5):
        for a in np.logspace(-3, 3, 7):
            left = asymptotics.poisson_theta(eps, a, "left")
            right = asymptotics.poisson_theta(eps, a, "right")
            worst_theta = max(worst_theta, abs(left - right) / max(1.0, abs(left)))
    results.append(CheckResult("theta resummation identity", worst_theta, 1e-12))

    return results


def report(results: list[CheckResult]) -> tuple[str, bool]:
    """Render one line per check; second element is the overall verdict."""
    lines = [r.line() for r in results]
    ok = all(r.passed for r in results)
    lines.append("all checks passed" if ok else "VALIDATION FAILED")
    return "\n".join(lines), ok
