"""Brute-force ground truth: dense 2^N diagonalization of the spin cluster.

Builds the full Hamiltonian

    H = omega * I_z + (g/2) * sum_{m != n} (zeta I_mz I_nz - I_mx I_nx - I_my I_ny)

in the computational product basis, together with I_z and the total-spin
operator I^2, and evaluates polarization traces

    P_n(t) = tr{exp(iHt) I_1z exp(-iHt) I_nz} / tr{I_1z^2}

through a symmetric eigendecomposition.  The transverse pair terms are
expanded as half the flip-flop operator, which is real in the product basis,
so every matrix here is real symmetric; complex arithmetic enters only in
the evolution phases.  Desk-scale ground truth: N is capped at 12
(dimension 4096 dense).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import cg as _cg

ORACLE_N_MAX = 12


class OracleError(ValueError):
    """Invalid oracle input."""


@dataclass(frozen=True)
class SpinOperatorSet:
    """Dense operators and spectral data for an N-spin cluster.

    z_diags      : (N, 2^N) diagonal of every I_nz (the product basis is
                   diagonal in each I_nz)
    hamiltonian  : dense real-symmetric H
    i_squared    : dense real-symmetric total-spin operator
    eigenvalues / eigenvectors : spectral decomposition of H
    """

    n_spins: int
    omega: float
    g: float
    zeta: float
    z_diags: np.ndarray
    hamiltonian: np.ndarray
    i_squared: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dimension(self) -> int:
        return 2 ** self.n_spins


def _pair_structure(n: int):
    """Bit tables shared by H and I^2 assembly."""
    dim = 2 ** n
    states = np.arange(dim)
    bits = (states[:, None] >> np.arange(n)[None, :]) & 1
    z = bits - 0.5  # I_nz eigenvalues per state
    return dim, states, bits, z


def build_operators(n: int, omega: float = 0.0, g: float = 1.0,
                    zeta: float = 0.0) -> SpinOperatorSet:
    """Assemble H, I^2 and the I_nz diagonals, then diagonalize H."""
    if not 2 <= n <= ORACLE_N_MAX:
        raise OracleError(f"oracle supports 2 <= N <= {ORACLE_N_MAX}, got {n}")
    dim, states, bits, z = _pair_structure(n)

    h = np.zeros((dim, dim))
    i2 = np.zeros((dim, dim))
    diag_h = omega * z.sum(axis=1)
    diag_i2 = np.full(dim, 0.75 * n)
    for i in range(n):
        for j in range(i + 1, n):
            zz = z[:, i] * z[:, j]
            diag_h += g * zeta * zz
            diag_i2 += 2.0 * zz
            differ = bits[:, i] != bits[:, j]
            flipped = states[differ] ^ ((1 << i) | (1 << j))
            # I_ix I_jx + I_iy I_jy = (flip-flop)/2, real in this basis
            h[flipped, states[differ]] += -0.5 * g
            i2[flipped, states[differ]] += 1.0
    h[states, states] += diag_h
    i2[states, states] += diag_i2

    eigenvalues, eigenvectors = np.linalg.eigh(h)
    return SpinOperatorSet(n_spins=n, omega=omega, g=g, zeta=zeta,
                           z_diags=np.ascontiguousarray(z.T),
                           hamiltonian=h, i_squared=i2,
                           eigenvalues=eigenvalues, eigenvectors=eigenvectors)


def polarization_trace_exact(ops: SpinOperatorSet, n_index: int, t):
    """P_n(t) = tr{e^{iHt} I_1z e^{-iHt} I_nz} / tr{I_1z^2}; t scalar or array.

    In the eigenbasis the trace is sum_ab M_ab cos((lam_a - lam_b) t) with
    M = (Q^T I_1z Q) * (Q^T I_nz Q); the sine part cancels by symmetry.
    """
    if not 1 <= n_index <= ops.n_spins:
        raise OracleError(f"spin index {n_index} out of range 1..{ops.n_spins}")
    q = ops.eigenvectors
    a = (q.T * ops.z_diags[0]) @ q
    b = a if n_index == 1 else (q.T * ops.z_diags[n_index - 1]) @ q
    m = a * b  # element-wise; both symmetric
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    u = np.exp(1j * np.multiply.outer(t_arr, ops.eigenvalues))
    vals = np.einsum("ja,ja->j", u @ m, u.conj()).real / (ops.dimension / 4.0)
    return vals[0] if np.ndim(t) == 0 else vals


def total_spin_multiplicities(ops: SpinOperatorSet) -> dict[float, int]:
    """Multiplicity of each total-spin value I in the spectrum of I^2.

    Eigenvalues are rounded to the nearest I(I+1); counts must equal
    (2I + 1) * w(I) from the coupling multiplicities.
    """
    lam = np.linalg.eigvalsh(ops.i_squared)
    counts: dict[float, int] = {}
    for v in lam:
        i_val = 0.5 * (-1.0 + np.sqrt(1.0 + 4.0 * max(v, 0.0)))
        i_half = round(2.0 * i_val) / 2.0
        counts[i_half] = counts.get(i_half, 0) + 1
    return counts


def invariance_check(n: int, t_samples, parameter_sets,
                     tolerance: float = 1e-10) -> dict:
    """Verify that (omega, zeta) drop out of every P_n(t).

    For each (omega, zeta) the trace under the full Hamiltonian is compared
    against the reduced one H' = -(g/2) I^2 (realized as omega = 0,
    zeta = -1, whose Hamiltonian equals -(g/2) I^2 up to a constant that
    cancels from the trace).  Also asserts total-polarization conservation
    and the equivalence of spins 2..N.  Returns a report dict with the
    worst deviations and a boolean verdict.
    """
    if n > 10:
        raise OracleError("invariance check capped at N = 10")
    t_arr = np.asarray(t_samples, dtype=float)
    g = 1.0
    reference = build_operators(n, omega=0.0, g=g, zeta=-1.0)
    ref_traces = np.array([polarization_trace_exact(reference, k, t_arr)
                           for k in range(1, n + 1)])

    worst_invariance = 0.0
    for omega, zeta in parameter_sets:
        ops = build_operators(n, omega=omega, g=g, zeta=zeta)
        for k in range(1, n + 1):
            dev = np.max(np.abs(polarization_trace_exact(ops, k, t_arr) - ref_traces[k - 1]))
            worst_invariance = max(worst_invariance, dev)

    worst_conservation = float(np.max(np.abs(ref_traces.sum(axis=0) - 1.0)))
    worst_equivalence = 0.0
    for k in range(2, n + 1):
        worst_equivalence = max(worst_equivalence, float(
            np.max(np.abs(ref_traces[k - 1] - ref_traces[1]))))

    return {
        "n_spins": n,
        "max_invariance_deviation": float(worst_invariance),
        "max_conservation_deviation": worst_conservation,
        "max_spin_equivalence_deviation": worst_equivalence,
        "tolerance": tolerance,
        "passed": bool(max(worst_invariance, worst_conservation,
                           worst_equivalence) < tolerance),
    }


def reduced_operators(n: int, g: float = 1.0) -> SpinOperatorSet:
    """Operators for the reduced Hamiltonian H' = -(g/2) I^2 (as omega=0, zeta=-1)."""
    return build_operators(n, omega=0.0, g=g, zeta=-1.0)


def symmetry_defects(ops: SpinOperatorSet) -> dict:
    """Max |H - H^T|, |[H, I^2]| and I^2-multiplicity mismatches."""
    h, i2 = ops.hamiltonian, ops.i_squared
    comm = h @ i2 - i2 @ h
    mult = total_spin_multiplicities(ops)
    expected = {}
    n_b = ops.n_spins - 1
    for ib in _cg.fragment_spins(n_b):
        for i_tot in ({0.5} if ib == 0 else {ib - 0.5, ib + 0.5}):
            expected[i_tot] = expected.get(i_tot, 0) + _cg.multiplicity_w(ib, n_b)
    mismatch = 0
    for i_val, cnt in mult.items():
        want = (int(2 * i_val) + 1) * expected.get(i_val, 0)
        mismatch += abs(cnt - want)
    return {
        "max_asymmetry": float(np.max(np.abs(h - h.T))),
        "max_commutator": float(np.max(np.abs(comm))),
        "multiplicity_mismatch": int(mismatch),
    }
