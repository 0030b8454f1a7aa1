"""Time-dependent bath coefficients and the canonical damping matrix.

All coefficients are closed-form time integrals of the Lorentzian bath
correlation e^{-(i omega_0 + lambda)|t-s|}; they are returned *unscaled*
by the overall coupling g0 (the generators apply g0 and the two-bath
factor).  The canonical 2x2 matrix D(t) and the canonical Hamiltonian
scalars are scaled by g0 and the bath count.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import ModelParams, OperatorSet
from .fock import Operator


def bath_correlation(t: float, s: float, params: ModelParams) -> complex:
    """g0 * e^{-(i omega_0 + lambda)|t - s|}."""
    if t < 0 or s < 0:
        raise ValueError("times must be non-negative")
    z = 1j * params.omega_0 + params.lam
    return params.g0 * np.exp(-z * abs(t - s))


def alpha(t: float, params: ModelParams) -> complex:
    """Integral of e^{-(i omega_0 + lambda)(t-s)} over s in [0, t]."""
    z = 1j * params.omega_0 + params.lam
    return (1.0 - np.exp(-z * t)) / z


def _resonance(t: float, z: complex, omega: float) -> complex:
    # e^{-zt} (e^{(z + i omega) t} - 1) / (z + i omega)
    w = z + 1j * omega
    return (np.exp(1j * omega * t) - np.exp(-z * t)) / w


def beta(t: float, params: ModelParams) -> complex:
    """Integral of cos(J s) e^{-(i omega_0 + lambda)(t-s)} over [0, t]."""
    z = 1j * params.omega_0 + params.lam
    return 0.5 * (_resonance(t, z, params.J) + _resonance(t, z, -params.J))


def kappa(t: float, params: ModelParams) -> complex:
    """Integral of sin(J s) e^{-(i omega_0 + lambda)(t-s)} over [0, t]."""
    z = 1j * params.omega_0 + params.lam
    return (_resonance(t, z, params.J) - _resonance(t, z, -params.J)) / 2j


def gamma_short_time(t: float, params: ModelParams) -> complex:
    """Short-time dephasing rate: same defining integral as alpha.

    The real part saturates to lambda / (lambda^2 + omega_0^2); the
    imaginary part vanishes for omega_0 = 0.
    """
    return alpha(t, params)


@dataclass(frozen=True)
class DampingMatrix:
    """Canonical coefficient matrix over the jump operators (B, C) at time t."""

    t: float
    D: np.ndarray  # 2x2 Hermitian, includes g0 and bath-count factors
    h_can_coeffs: dict  # scalar multipliers keyed by "BB", "CC", "BC", "CB"

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.D)


def _h_can_scalars(t: float, params: ModelParams, scale: float) -> dict:
    c = np.cos(params.J * t)
    s = np.sin(params.J * t)
    b = beta(t, params)
    k = kappa(t, params)
    return {
        "BB": scale * b.imag * c,
        "CC": scale * k.imag * s,
        # off-diagonal Hamiltonian remainder of the canonical rewrite;
        # equivalent to (Re beta sin - Re kappa cos)/(2J) H_D plus
        # (Im beta sin + Im kappa cos) {B,C}/2
        "BC": scale * 0.5j * (s * np.conj(b) - c * k),
        "CB": scale * 0.5j * (c * np.conj(k) - s * b),
    }


def damping_matrix(t: float, params: ModelParams, n_baths: int = 2) -> DampingMatrix:
    """Hermitian D(t) of the canonical master equation, g0- and bath-scaled."""
    if n_baths not in (1, 2):
        raise ValueError("n_baths must be 1 or 2")
    c = np.cos(params.J * t)
    s = np.sin(params.J * t)
    b = beta(t, params)
    k = kappa(t, params)
    scale = params.g0 * n_baths
    d11 = 2.0 * b.real * c
    d22 = 2.0 * k.real * s
    d12 = b.real * s + k.real * c + 1j * (b.imag * s - k.imag * c)
    d = scale * np.array([[d11, d12], [np.conj(d12), d22]], dtype=complex)
    return DampingMatrix(t=t, D=d, h_can_coeffs=_h_can_scalars(t, params, scale))


def canonical_hamiltonian(
    t: float, params: ModelParams, ops: OperatorSet, n_baths: int = 2
) -> Operator:
    """Hermitian H_can(t) combining H_D-like and B^2 / C^2 terms.

    Assembled so that -i[H_can, rho] plus the D(t) dissipator reproduces
    the pre-canonical generator exactly; the B C / C B piece combines an
    H_D-proportional term with a {B, C}/2 term.
    """
    h = _h_can_scalars(t, params, params.g0 * n_baths)
    b, c = ops.B.matrix, ops.C.matrix
    mat = (
        h["BB"] * (b @ b)
        + h["CC"] * (c @ c)
        + h["BC"] * (b @ c)
        + h["CB"] * (c @ b)
    )
    return Operator(ops.basis, mat)


def nonmarkov_spectrum(t: float, params: ModelParams, n_baths: int = 2):
    """Eigenvalues of D(t); a negative value witnesses non-Markovianity."""
    ev = damping_matrix(t, params, n_baths).eigenvalues()
    return float(ev[0]), float(ev[1])
