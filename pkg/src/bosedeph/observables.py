"""Reported quantities: coincidence probability, sLOCC projection,
concurrence, mode negativity, first-order correlation, fidelity, trace
distance and raw coherence elements."""

from __future__ import annotations

import numpy as np

from .fock import FockBasis, Mode, Operator, hop
from .model import build_Pi_LR, one_per_site_states, pad_occupation


class PostSelectionError(Exception):
    """Post-selection probability vanishes."""


def coincidence_probability(rho: np.ndarray, pi_lr: Operator) -> float:
    """P11 = Tr(rho Pi_LR)."""
    val = np.trace(rho @ pi_lr.matrix)
    return float(val.real)


def slocc_project(rho: np.ndarray, basis: FockBasis, eps: float = 1e-10):
    """Project onto one particle per site and map to a 4x4 two-qubit state.

    Returns (rho_4x4, success_probability).  The two-qubit basis is
    |up up>, |up down>, |down up>, |down down> with the first slot the
    spin found in L.
    """
    idx = [basis.index_of(pad_occupation(occ, basis)) for occ in one_per_site_states()]
    sub = rho[np.ix_(idx, idx)]
    success = float(np.real(np.trace(sub)))
    if success <= eps:
        raise PostSelectionError(
            f"post-selection impossible (success probability {success:.3e})"
        )
    return sub / success, success


_SIGMA_Y = np.array([[0, -1j], [1j, 0]])
_YY = np.kron(_SIGMA_Y, _SIGMA_Y)


def concurrence(rho4: np.ndarray) -> float:
    """Wootters concurrence of a 4x4 two-qubit density matrix."""
    rho_tilde = rho4 @ _YY @ rho4.conj() @ _YY
    evals = np.linalg.eigvals(rho_tilde)
    # tiny negative / imaginary parts from roundoff
    roots = np.sqrt(np.abs(np.real(evals)))
    roots.sort()
    return float(max(0.0, roots[-1] - roots[-2] - roots[-3] - roots[-4]))


def _site_factor_maps(basis: FockBasis):
    """Embedding of the fixed-N sector into (L occupations) x (R occupations).

    Local factors enumerate (n_up, n_down) with per-mode cap 2, so each
    factor has dimension 9; the sector states map injectively into the
    81-dimensional product.
    """
    cap = 2
    local = [(a, b) for a in range(cap + 1) for b in range(cap + 1)]
    local_index = {occ: i for i, occ in enumerate(local)}
    l_idx = []
    r_idx = []
    for occ in basis.states:
        l_idx.append(local_index[(occ[0], occ[1])])
        r_idx.append(local_index[(occ[2], occ[3])])
    return len(local), np.array(l_idx), np.array(r_idx)


def negativity(rho: np.ndarray, basis: FockBasis) -> float:
    """Mode negativity (||rho^T_L||_1 - 1)/2 across the L|R bipartition."""
    d_loc, l_idx, r_idx = _site_factor_maps(basis)
    big = np.zeros((d_loc, d_loc, d_loc, d_loc), dtype=complex)  # (l, r, l', r')
    for a in range(basis.dim):
        for b in range(basis.dim):
            big[l_idx[a], r_idx[a], l_idx[b], r_idx[b]] = rho[a, b]
    # partial transpose on the L factor
    big_pt = big.transpose(2, 1, 0, 3).reshape(d_loc * d_loc, d_loc * d_loc)
    trace_norm = float(np.sum(np.abs(np.linalg.eigvalsh(big_pt))))
    return max(0.0, (trace_norm - 1.0) / 2.0)


def first_order_correlation(rho: np.ndarray, basis: FockBasis,
                            spin: str = "up") -> float:
    """C1 = <L_sigma R+_sigma + h.c.>."""
    if spin == "up":
        op = hop(basis, Mode.R_UP, Mode.L_UP) + hop(basis, Mode.L_UP, Mode.R_UP)
    elif spin == "down":
        op = hop(basis, Mode.R_DOWN, Mode.L_DOWN) + hop(basis, Mode.L_DOWN, Mode.R_DOWN)
    else:
        raise ValueError(f"unknown spin {spin!r}")
    return float(np.real(np.trace(rho @ op.matrix)))


def _psd_sqrt(rho: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(rho)
    w = np.clip(w, 0.0, None)
    return (v * np.sqrt(w)) @ v.conj().T


def fidelity(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2."""
    s = _psd_sqrt(rho)
    inner = _psd_sqrt(s @ sigma @ s)
    return float(np.real(np.trace(inner)) ** 2)


def trace_distance(rho: np.ndarray, sigma: np.ndarray) -> float:
    """T = 1/2 Tr |rho - sigma|."""
    diff = rho - sigma
    return float(0.5 * np.sum(np.abs(np.linalg.eigvalsh(diff))))


def coherences(rho: np.ndarray, pairs) -> list:
    """Raw off-diagonal elements for export."""
    return [complex(rho[i, j]) for i, j in pairs]


def bell_states(basis: FockBasis):
    """|Psi+->-type targets as 4x4 two-qubit density matrices."""
    psi_p = np.array([0, 1, 1, 0], dtype=complex) / np.sqrt(2)
    psi_m = np.array([0, 1, -1, 0], dtype=complex) / np.sqrt(2)
    return np.outer(psi_p, psi_p.conj()), np.outer(psi_m, psi_m.conj())


def bell_fidelities(rho: np.ndarray, basis: FockBasis):
    """Fidelity of the sLOCC-projected state with |Psi+> and |Psi->."""
    rho4, success = slocc_project(rho, basis)
    psi_p, psi_m = bell_states(basis)
    return fidelity(rho4, psi_p), fidelity(rho4, psi_m), success
