"""Density-matrix propagation for all dynamics variants.

Fixed-step RK4 is the default (deterministic, reproducible); adaptive
RK45 via scipy is optional.  Trajectories carry trace / Hermiticity /
positivity diagnostics; positivity is monitored, never clamped.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from . import generators
from .fock import FockBasis, Mode, Operator
from .model import (
    ModelParams,
    OperatorSet,
    build_H_pm,
    build_operator_set,
    extended_basis,
    pseudomode_annihilators,
    system_basis,
)


class SolverError(Exception):
    """Numerical failure during propagation."""


@dataclass(frozen=True)
class IntegratorConfig:
    dt: float | None = None  # None -> min(0.01/J, 0.01/lambda)
    method: str = "rk4"  # "rk4" | "rk45"
    t_end: float = 10.0
    tolerance: float = 1e-10  # local error target for rk45
    record_stride: int = 1

    def __post_init__(self):
        if self.dt is not None and self.dt <= 0:
            raise ValueError("dt must be positive")
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")
        if self.method not in ("rk4", "rk45"):
            raise ValueError(f"unknown method {self.method!r}")
        if self.record_stride < 1:
            raise ValueError("record_stride must be >= 1")

    def step(self, params: ModelParams) -> float:
        if self.dt is not None:
            return self.dt
        return min(0.01 / params.J, 0.01 / params.lam)


@dataclass
class Trajectory:
    """Recorded density matrices with structural diagnostics."""

    times: np.ndarray
    rhos: np.ndarray  # (n_record, d, d)
    basis: FockBasis | None = None
    diagnostics: dict = field(default_factory=dict)

    def final(self) -> np.ndarray:
        return self.rhos[-1]


def pure_density(ket: np.ndarray) -> np.ndarray:
    ket = np.asarray(ket, dtype=complex)
    return np.outer(ket, ket.conj())


def _diagnose(rhos: np.ndarray) -> dict:
    traces = np.einsum("kii->k", rhos)
    herm = max(
        float(np.max(np.abs(r - r.conj().T))) for r in rhos
    )
    min_eig = min(float(np.linalg.eigvalsh(r)[0]) for r in rhos)
    return {
        "max_trace_drift": float(np.max(np.abs(traces - 1.0))),
        "max_hermiticity_error": herm,
        "min_eigenvalue": min_eig,
    }


def integrate(rhs, rho0: np.ndarray, cfg: IntegratorConfig, params: ModelParams,
              t0: float = 0.0, early_stop_residual: float | None = None,
              early_stop_window: int = 8) -> Trajectory:
    """Propagate rho0 under drho/dt = rhs(t, rho) and record on the stride grid.

    With ``early_stop_residual`` set, integration stops once the
    generator action stays below the threshold at ``early_stop_window``
    consecutive record points (steady state reached before t_end).
    """
    if cfg.method == "rk45":
        return _integrate_rk45(rhs, rho0, cfg, params, t0)
    dt = cfg.step(params)
    n_steps = int(round((cfg.t_end - t0) / dt))
    stride = cfg.record_stride
    rho = np.array(rho0, dtype=complex)
    times = [t0]
    records = [rho.copy()]
    t = t0
    recent = []
    for k in range(n_steps):
        rho = _rk4_step(rhs, t, rho, dt)
        t = t0 + (k + 1) * dt
        if (k + 1) % stride == 0:
            times.append(t)
            records.append(rho.copy())
            if early_stop_residual is not None:
                recent.append(float(np.max(np.abs(rhs(t, rho)))))
                if (len(recent) >= early_stop_window
                        and all(r < early_stop_residual for r in recent[-early_stop_window:])):
                    break
        if not np.all(np.isfinite(rho)):
            raise SolverError(f"non-finite density matrix at t={t}")
    rhos = np.array(records)
    return Trajectory(np.array(times), rhos, diagnostics=_diagnose(rhos))


def _rk4_step(rhs, t, rho, dt):
    k1 = rhs(t, rho)
    k2 = rhs(t + dt / 2, rho + dt / 2 * k1)
    k3 = rhs(t + dt / 2, rho + dt / 2 * k2)
    k4 = rhs(t + dt, rho + dt * k3)
    return rho + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)


def _integrate_rk45(rhs, rho0, cfg, params, t0):
    d = rho0.shape[0]
    dt = cfg.step(params)
    t_eval = np.arange(t0, cfg.t_end + dt * cfg.record_stride / 2,
                       dt * cfg.record_stride)

    def flat_rhs(t, y):
        return rhs(t, y.reshape(d, d)).ravel()

    sol = solve_ivp(
        flat_rhs, (t0, cfg.t_end), np.asarray(rho0, dtype=complex).ravel(),
        method="RK45", t_eval=t_eval, rtol=cfg.tolerance, atol=cfg.tolerance,
    )
    if not sol.success:
        raise SolverError(f"adaptive integration failed: {sol.message}")
    rhos = sol.y.T.reshape(-1, d, d)
    return Trajectory(sol.t, rhos, diagnostics=_diagnose(rhos))


# ---------------------------------------------------------------------------
# closed evolution


@dataclass
class StateTrajectory:
    times: np.ndarray
    states: np.ndarray  # (n_record, d)

    def densities(self) -> np.ndarray:
        return np.einsum("ki,kj->kij", self.states, self.states.conj())

    def as_trajectory(self, basis=None) -> Trajectory:
        rhos = self.densities()
        return Trajectory(self.times, rhos, basis=basis, diagnostics=_diagnose(rhos))


def evolve_closed(H: Operator | np.ndarray, psi0: np.ndarray,
                  cfg: IntegratorConfig, params: ModelParams) -> StateTrajectory:
    """Unitary evolution e^{-iHt} psi0 via dense eigendecomposition."""
    h = H.matrix if isinstance(H, Operator) else np.asarray(H)
    if np.max(np.abs(h - h.conj().T)) > 1e-10:
        raise SolverError("closed evolution requires a Hermitian Hamiltonian")
    w, v = np.linalg.eigh(h)
    coeffs = v.conj().T @ np.asarray(psi0, dtype=complex)
    dt = cfg.step(params) * cfg.record_stride
    times = np.arange(0.0, cfg.t_end + dt / 2, dt)
    states = np.array([v @ (np.exp(-1j * w * t) * coeffs) for t in times])
    return StateTrajectory(times, states)


# ---------------------------------------------------------------------------
# open-system dynamics


def default_dephasing_rate(params: ModelParams) -> float:
    """Markov-limit phenomenological rate 4 g0 lambda / (lambda^2 + omega_0^2).

    Four times the asymptotic short-time rate; the factor maps the
    sigma_z dissipators onto the per-mode number-operator dissipators on
    the two-particle sector (a convention knob, exposed in the config).
    """
    return 4.0 * params.g0 * params.lam / (params.lam**2 + params.omega_0**2)


def evolve_phenomenological(rho0: np.ndarray, params: ModelParams,
                            cfg: IntegratorConfig, rate: float | None = None,
                            ops: OperatorSet | None = None,
                            early_stop_residual: float | None = None) -> Trajectory:
    """Constant-rate dephasing with number-operator jumps on each mode."""
    ops = ops or build_operator_set(params, system_basis())
    rate = default_dephasing_rate(params) if rate is None else rate
    if rate < 0:
        raise ValueError("dephasing rate must be non-negative")
    basis = ops.basis
    from .fock import number, SYSTEM_MODES

    jumps = [(rate, number(basis, m).matrix) for m in SYSTEM_MODES]
    h = (ops.H_S + ops.H_D).matrix
    rhs = generators.lindblad_rhs(h, jumps)
    traj = integrate(rhs, rho0, cfg, params, early_stop_residual=early_stop_residual)
    traj.basis = basis
    return traj


def evolve_microscopic(rho0: np.ndarray, params: ModelParams,
                       cfg: IntegratorConfig, frame: str = "schrodinger",
                       n_baths: int = 2, ops: OperatorSet | None = None,
                       early_stop_residual: float | None = None) -> Trajectory:
    """Time-dependent canonical master equation (microscopic derivation)."""
    if frame not in ("schrodinger", "interaction"):
        raise ValueError(f"unknown frame {frame!r}")
    ops = ops or build_operator_set(params, system_basis())
    rhs_i = generators.canonical_rhs(ops, params, n_baths)
    if frame == "interaction":
        rhs = rhs_i
    else:
        rhs = generators.to_schrodinger_frame(rhs_i, (ops.H_S + ops.H_D).matrix)
    traj = integrate(rhs, rho0, cfg, params, early_stop_residual=early_stop_residual)
    traj.basis = ops.basis
    return traj


def evolve_global_bath(rho0: np.ndarray, params: ModelParams,
                       cfg: IntegratorConfig, gamma: float,
                       ops: OperatorSet | None = None) -> Trajectory:
    """Single common dephasing bath: jump operator sigma_z_L + sigma_z_R."""
    if gamma < 0:
        raise ValueError("gamma must be non-negative")
    ops = ops or build_operator_set(params, system_basis())
    h = (ops.H_S + ops.H_D).matrix
    rhs = generators.lindblad_rhs(
        h, [(gamma, (ops.sigma_z_L + ops.sigma_z_R).matrix)]
    )
    traj = integrate(rhs, rho0, cfg, params)
    traj.basis = ops.basis
    return traj


# ---------------------------------------------------------------------------
# pseudomode benchmark


def _spin_up_blocks(basis: FockBasis, rho0: np.ndarray):
    """Indices of extended-basis states sharing the support's spin-up count.

    The number of spin-up system particles is conserved by the embedding
    Hamiltonian and the pseudomode damping, so the dynamics stay in the
    block(s) populated at t = 0.
    """
    n_up = basis.occupations(Mode.L_UP) + basis.occupations(Mode.R_UP)
    support = np.where(np.abs(rho0).sum(axis=0) + np.abs(rho0).sum(axis=1) > 1e-14)[0]
    values = set(int(n_up[i]) for i in support)
    mask = np.array([int(v) in values for v in n_up])
    return np.where(mask)[0]


def _partial_trace_groups(basis: FockBasis, sys_basis: FockBasis, block: np.ndarray):
    """Group block-local indices by pseudomode configuration for tracing."""
    groups = {}
    for local, i in enumerate(block):
        occ = basis.states[i]
        s = sys_basis.index_of(occ[:4])
        p = occ[4:]
        groups.setdefault(p, []).append((local, s))
    return [
        (np.array([l for l, _ in g]), np.array([s for _, s in g]))
        for g in groups.values()
    ]


def evolve_pseudomode(rho0_sys: np.ndarray, params: ModelParams,
                      cfg: IntegratorConfig, n_max: int = 4,
                      sys_basis: FockBasis | None = None,
                      early_stop_residual: float | None = None) -> Trajectory:
    """Exact benchmark: two damped pseudomodes replace the Lorentzian baths.

    Embeds rho0 (x) |0><0|_pm, integrates the time-independent Lindblad
    equation with damping rate 2*lambda on each pseudomode annihilator
    (so the damped-mode correlation decays as e^{-lambda t}), and
    partial-traces the pseudomodes at every record point.
    """
    if n_max < 2:
        raise ValueError("n_max must be >= 2")
    sys_basis = sys_basis or system_basis()
    ext = extended_basis(n_particles=sys_basis.sector or 2, n_max=n_max)
    h = build_H_pm(params, g_pm=np.sqrt(params.g0), omega_pm=params.omega_0,
                   basis=ext)
    c_l, c_r = pseudomode_annihilators(ext)

    # embed: extended states with pm vacuum map 1-1 onto system states
    d_ext = ext.dim
    rho0 = np.zeros((d_ext, d_ext), dtype=complex)
    vac_idx = np.array(
        [ext.index_of(s + (0, 0)) for s in sys_basis.states]
    )
    rho0[np.ix_(vac_idx, vac_idx)] = rho0_sys

    block = _spin_up_blocks(ext, rho0)
    hb = h.matrix[np.ix_(block, block)]
    jumps = [
        (2 * params.lam, c_l.matrix[np.ix_(block, block)]),
        (2 * params.lam, c_r.matrix[np.ix_(block, block)]),
    ]
    rhs = generators.lindblad_rhs(hb, jumps)
    traj_full = integrate(rhs, rho0[np.ix_(block, block)], cfg, params,
                          early_stop_residual=early_stop_residual)

    groups = _partial_trace_groups(ext, sys_basis, block)
    d_sys = sys_basis.dim
    reduced = np.zeros((len(traj_full.times), d_sys, d_sys), dtype=complex)
    for k, rho in enumerate(traj_full.rhos):
        for local, sys_idx in groups:
            reduced[k][np.ix_(sys_idx, sys_idx)] += rho[np.ix_(local, local)]

    diag = _diagnose(reduced)
    diag["pm_top_level_population"] = _top_level_population(ext, block, traj_full.rhos[-1], n_max)
    diag["pm_truncation_risk"] = diag["pm_top_level_population"] > 1e-4
    return Trajectory(traj_full.times, reduced, basis=sys_basis, diagnostics=diag)


def _top_level_population(ext: FockBasis, block: np.ndarray, rho_block: np.ndarray,
                          n_max: int) -> float:
    occ_l = ext.occupations(Mode.PM_L)[block]
    occ_r = ext.occupations(Mode.PM_R)[block]
    top = (occ_l == n_max) | (occ_r == n_max)
    return float(np.real(np.einsum("ii->i", rho_block)[top].sum()))


# ---------------------------------------------------------------------------
# steady state


@dataclass(frozen=True)
class SteadyStateReport:
    converged: bool
    t_reached: float
    residual: float
    rho_ss: np.ndarray


def find_steady_state(rhs, rho0: np.ndarray, params: ModelParams,
                      residual_threshold: float = 1e-7,
                      t_max: float = 500.0,
                      dt: float | None = None,
                      check_interval: float | None = None,
                      window: int = 8) -> SteadyStateReport:
    """Integrate until the generator action stays below the threshold.

    The residual is the max-abs of rhs(t, rho) sampled at ``window``
    consecutive check points spread over several coefficient
    oscillation periods (the canonical rates keep oscillating, so a
    single sample can alias a zero crossing).  Non-convergence within
    t_max reports converged=False rather than raising.
    """
    dt = dt if dt is not None else min(0.01 / params.J, 0.01 / params.lam)
    check_interval = check_interval or (0.77 * np.pi / params.J)
    steps_per_check = max(1, int(round(check_interval / dt)))
    rho = np.array(rho0, dtype=complex)
    t = 0.0
    recent = []
    residual = float(np.max(np.abs(rhs(t, rho))))
    while t < t_max:
        for _ in range(steps_per_check):
            rho = _rk4_step(rhs, t, rho, dt)
            t += dt
        residual = float(np.max(np.abs(rhs(t, rho))))
        recent.append(residual)
        if len(recent) >= window and all(r < residual_threshold for r in recent[-window:]):
            return SteadyStateReport(True, t, max(recent[-window:]), rho)
    return SteadyStateReport(False, t, residual, rho)
