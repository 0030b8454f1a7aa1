"""Liouvillian right-hand sides for every dynamics variant.

Each builder returns a callable L(t, rho) -> drho/dt acting on dense
complex matrices.  Time-independent Lindblad generators (phenomenological,
pseudomode, global bath) ignore t.
"""

from __future__ import annotations

import numpy as np

from .coeffs import alpha, beta, kappa, gamma_short_time, damping_matrix, _h_can_scalars
from .model import ModelParams, OperatorSet


def lindblad_rhs(H: np.ndarray, jumps):
    """Standard Lindblad generator with constant rates.

    ``jumps`` is a sequence of (rate, operator-matrix) pairs with the
    convention D[A]rho = A rho A+ - 1/2 {A+ A, rho}.
    """
    m = -1j * H.astype(complex)
    scaled = []
    for rate, op in jumps:
        if rate < 0:
            raise ValueError("negative jump rate")
        m = m - 0.5 * rate * (op.conj().T @ op)
        scaled.append((rate, op, op.conj().T))

    def rhs(t, rho):
        out = m @ rho
        out = out + out.conj().T
        for rate, op, opd in scaled:
            out = out + rate * (op @ rho @ opd)
        return out

    return rhs


def precanonical_rhs(ops: OperatorSet, params: ModelParams, n_baths: int = 2,
                     include_A: bool = False):
    """Born-Markov interaction-picture generator before canonical rewrite.

    Term-by-term form with jump operators B, C and coefficients
    beta(t), kappa(t) paired with cos(Jt), sin(Jt); the spin-imbalance
    operator A contributes only through states carrying coherence
    between spin-imbalance sectors and is excluded by default, matching
    the reduced pre-canonical form.
    """
    B, C, A = ops.B.matrix, ops.C.matrix, ops.A.matrix
    prod = {
        ("B", "B"): B @ B, ("B", "C"): B @ C,
        ("C", "B"): C @ B, ("C", "C"): C @ C,
    }
    AA = A @ A
    scale = params.g0 * n_baths
    J = params.J

    def rhs(t, rho):
        f = {"B": np.cos(J * t), "C": np.sin(J * t)}
        I = {"B": beta(t, params), "C": kappa(t, params)}
        O = {"B": B, "C": C}
        out = np.zeros_like(rho)
        for i in ("B", "C"):
            for j in ("B", "C"):
                fi, Ij = f[i], I[j]
                out = out + fi * (
                    np.conj(Ij) * (O[i] @ rho @ O[j])
                    + Ij * (O[j] @ rho @ O[i])
                    - Ij * (prod[(i, j)] @ rho)
                    - np.conj(Ij) * (rho @ prod[(j, i)])
                )
        if include_A:
            a = alpha(t, params)
            out = out + 2 * a.real * (A @ rho @ A) - a * (AA @ rho) - np.conj(a) * (rho @ AA)
        return scale * out

    return rhs


def canonical_rhs(ops: OperatorSet, params: ModelParams, n_baths: int = 2):
    """Canonical-form generator -i[H_can, rho] + sum_ij D_ij (F_i rho F_j - 1/2 {F_j F_i, rho})."""
    B, C = ops.B.matrix, ops.C.matrix
    F = (B, C)
    prod = [[B @ B, B @ C], [C @ B, C @ C]]

    def rhs(t, rho):
        dm = damping_matrix(t, params, n_baths)
        h = dm.h_can_coeffs
        h_can = (
            h["BB"] * prod[0][0] + h["CC"] * prod[1][1]
            + h["BC"] * prod[0][1] + h["CB"] * prod[1][0]
        )
        # fold -iH_can and the anticommutator G = sum D_ij F_j F_i into one matrix
        g = sum(dm.D[i, j] * prod[j][i] for i in range(2) for j in range(2))
        m = -1j * h_can - 0.5 * g
        out = m @ rho + rho @ m.conj().T
        left = [F[0] @ rho, F[1] @ rho]
        for i in range(2):
            for j in range(2):
                out = out + dm.D[i, j] * (left[i] @ F[j])
        return out

    return rhs


def short_time_rhs(ops: OperatorSet, params: ModelParams):
    """Interaction-picture generator of the short-time (small Jt) limit.

    Local sigma_z dissipators with the rate gamma_X(t) and the
    operators frozen at t = 0 (the tunneling has not yet rotated them);
    differs from the full interaction-picture generator (A terms
    included) at order (Jt)^2.
    """
    sz = (ops.sigma_z_L.matrix, ops.sigma_z_R.matrix)
    sz2 = tuple(s @ s for s in sz)

    def rhs(t, rho):
        g = params.g0 * gamma_short_time(t, params)
        out = np.zeros_like(rho)
        for s, s2 in zip(sz, sz2):
            out = out + 2 * g.real * (s @ rho @ s) - g * (s2 @ rho) - np.conj(g) * (rho @ s2)
        return out

    return rhs


def to_schrodinger_frame(rhs_interaction, H0: np.ndarray):
    """Wrap an interaction-picture generator into the Schroedinger frame.

    L_S(t, rho) = -i[H0, rho] + U(t) L_I(t, U+(t) rho U(t)) U+(t) with
    U(t) = e^{-i H0 t}, via one eigendecomposition of H0.
    """
    w, v = np.linalg.eigh(H0)
    vd = v.conj().T

    def rhs(t, rho):
        phases = np.exp(-1j * w * t)
        u = (v * phases) @ vd
        ud = u.conj().T
        rho_i = ud @ rho @ u
        out_i = rhs_interaction(t, rho_i)
        return -1j * (H0 @ rho - rho @ H0) + u @ out_i @ ud

    return rhs


def frame_unitary(H0: np.ndarray):
    """Return U(t) = e^{-i H0 t} as a callable, via eigendecomposition."""
    w, v = np.linalg.eigh(H0)
    vd = v.conj().T

    def u(t):
        return (v * np.exp(-1j * w * t)) @ vd

    return u
