"""Named operators of the two-site two-component boson model.

Builds the free and tunneling Hamiltonians, the local dephasing
operators, the interaction-picture jump operators A/B/C, the
one-per-site projector, and the pseudomode embedding Hamiltonian.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fock import (
    Mode,
    SYSTEM_MODES,
    PSEUDOMODES,
    FockBasis,
    Operator,
    enumerate_basis,
    hop,
    ladder,
    number,
)


@dataclass(frozen=True)
class ModelParams:
    """Physical parameters of system and baths (hbar = 1).

    ``J`` is the tunneling amplitude (the interaction-picture frequency
    Omega is identified with J), ``phi`` the tunneling phase, ``g0`` the
    overall system-bath coupling, ``lam`` the Lorentzian half-width and
    ``omega_0`` its center frequency.
    """

    omega_s: float = 1.0
    J: float = 1.0
    phi: float = 0.0
    g0: float = 0.1
    lam: float = 1.0
    omega_0: float = 0.0

    def __post_init__(self):
        if self.J <= 0:
            raise ValueError("J must be positive")
        if self.lam <= 0:
            raise ValueError("lambda must be positive")
        if self.g0 < 0:
            raise ValueError("g0 must be non-negative")


def system_basis(n_particles: int = 2, cap: int | None = None) -> FockBasis:
    """Fixed-particle-number sector over the four system modes."""
    cap = n_particles if cap is None else cap
    return enumerate_basis(SYSTEM_MODES, cap, sector=n_particles)


def extended_basis(n_particles: int = 2, n_max: int = 4) -> FockBasis:
    """System sector tensored with two capped pseudomodes."""
    return enumerate_basis(
        SYSTEM_MODES + PSEUDOMODES, max(n_particles, n_max), sector=n_particles
    )


def build_H_S(params: ModelParams, basis: FockBasis) -> Operator:
    """omega_s * total system number operator (main-text prefactor)."""
    total = number(basis, SYSTEM_MODES[0])
    for m in SYSTEM_MODES[1:]:
        total = total + number(basis, m)
    return params.omega_s * total


def build_H_D(params: ModelParams, basis: FockBasis) -> Operator:
    """Tunneling (J/2) sum_sigma [e^{i phi} L+ R + e^{-i phi} R+ L]."""
    ph = np.exp(1j * params.phi)
    h = (
        ph * hop(basis, Mode.L_UP, Mode.R_UP)
        + ph * hop(basis, Mode.L_DOWN, Mode.R_DOWN)
        + np.conj(ph) * hop(basis, Mode.R_UP, Mode.L_UP)
        + np.conj(ph) * hop(basis, Mode.R_DOWN, Mode.L_DOWN)
    )
    return (params.J / 2) * h


def build_sigma_z(basis: FockBasis, site: str) -> Operator:
    """Local dephasing operator n_{X up} - n_{X down} for X in {L, R}."""
    if site == "L":
        return number(basis, Mode.L_UP) - number(basis, Mode.L_DOWN)
    if site == "R":
        return number(basis, Mode.R_UP) - number(basis, Mode.R_DOWN)
    raise ValueError(f"unknown site {site!r}")


def build_alpha_L(params: ModelParams, basis: FockBasis) -> Operator:
    """Anti-Hermitian operator with [H_D, sigma_z_L] = (J/2) alpha_L."""
    ph = np.exp(1j * params.phi)
    return (
        np.conj(ph) * hop(basis, Mode.R_UP, Mode.L_UP)
        - ph * hop(basis, Mode.L_UP, Mode.R_UP)
        - np.conj(ph) * hop(basis, Mode.R_DOWN, Mode.L_DOWN)
        + ph * hop(basis, Mode.L_DOWN, Mode.R_DOWN)
    )


def build_ABC(params: ModelParams, basis: FockBasis):
    """Jump operators of the interaction-picture coupling.

    A = (sigma_z_L + sigma_z_R)/2, B = (sigma_z_L - sigma_z_R)/2 and
    C = (i/2) alpha_L; all three Hermitian, and the bath coupling in the
    rotating frame closes as sigma_z_L(t) = A + B cos(Jt) + C sin(Jt).
    """
    sz_l = build_sigma_z(basis, "L")
    sz_r = build_sigma_z(basis, "R")
    a = 0.5 * (sz_l + sz_r)
    b = 0.5 * (sz_l - sz_r)
    c = 0.5j * build_alpha_L(params, basis)
    return a, b, c


def build_Pi_LR(basis: FockBasis) -> Operator:
    """Projector onto the four one-particle-per-site states."""
    mat = np.zeros((basis.dim, basis.dim), dtype=complex)
    for occ in one_per_site_states():
        i = basis.index_of(pad_occupation(occ, basis))
        mat[i, i] = 1.0
    return Operator(basis, mat)


def one_per_site_states():
    """Occupation vectors |L sigma, R tau> over the four system modes."""
    # ordering matches the two-qubit basis |up up>, |up down>, |down up>, |down down>
    return (
        (1, 0, 1, 0),
        (1, 0, 0, 1),
        (0, 1, 1, 0),
        (0, 1, 0, 1),
    )


def pad_occupation(system_occ, basis: FockBasis):
    """Embed a 4-mode system occupation into a possibly larger basis (pm vacuum)."""
    occ = list(system_occ) + [0] * (len(basis.modes) - 4)
    return tuple(occ)


def build_H_pm(
    params: ModelParams,
    g_pm: float,
    omega_pm: float,
    basis: FockBasis,
) -> Operator:
    """Pseudomode embedding Hamiltonian on the extended basis.

    H_S + H_D plus, per site X, omega_pm c+_X c_X and the dephasing-type
    coupling g_pm sigma_z_X (c+_X + c_X).
    """
    for m in PSEUDOMODES:
        if m not in basis.modes:
            raise ValueError("extended basis must include both pseudomodes")
    h = build_H_S(params, basis) + build_H_D(params, basis)
    for pm, site in ((Mode.PM_L, "L"), (Mode.PM_R, "R")):
        n_pm = number(basis, pm)
        # pseudomode ladders leave the system sector alone, so they are
        # well defined on the sector-constrained basis
        x = ladder(basis, pm, "create") + ladder(basis, pm, "annihilate")
        coupling = build_sigma_z(basis, site) @ x
        h = h + omega_pm * n_pm + g_pm * coupling
    return h


def pseudomode_annihilators(basis: FockBasis):
    """Annihilation operators of the two pseudomodes on the extended basis."""
    return tuple(ladder(basis, pm, "annihilate") for pm in PSEUDOMODES)


@dataclass(frozen=True)
class OperatorSet:
    """All named system operators on one basis."""

    basis: FockBasis
    H_S: Operator
    H_D: Operator
    sigma_z_L: Operator
    sigma_z_R: Operator
    A: Operator
    B: Operator
    C: Operator
    Pi_LR: Operator


def build_operator_set(params: ModelParams, basis: FockBasis) -> OperatorSet:
    a, b, c = build_ABC(params, basis)
    return OperatorSet(
        basis=basis,
        H_S=build_H_S(params, basis),
        H_D=build_H_D(params, basis),
        sigma_z_L=build_sigma_z(basis, "L"),
        sigma_z_R=build_sigma_z(basis, "R"),
        A=a,
        B=b,
        C=c,
        Pi_LR=build_Pi_LR(basis),
    )
