"""Declarative experiment runner.

Scenario configs are YAML key/value trees (strict: unknown keys are
rejected) or built-in presets; a run integrates every requested
dynamics on a shared record grid, evaluates the requested observables
into a CSV time series and writes a JSON summary with steady-state
metrics, pairwise state comparisons and a content hash of the CSV.
"""

from __future__ import annotations

import hashlib
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, asdict, replace

import numpy as np
import yaml

from . import observables as obs
from .coeffs import alpha, beta, kappa, damping_matrix
from .fock import Mode
from .model import ModelParams, build_operator_set, system_basis
from .solvers import (
    IntegratorConfig,
    SolverError,
    Trajectory,
    evolve_closed,
    evolve_global_bath,
    evolve_microscopic,
    evolve_phenomenological,
    evolve_pseudomode,
    pure_density,
)


class ConfigError(Exception):
    """Invalid or unparsable scenario configuration."""


KNOWN_DYNAMICS = ("closed", "phenomenological", "microscopic", "pseudomode", "global")
KNOWN_OBSERVABLES = (
    "P11",
    "C1",
    "negativity",
    "concurrence",
    "fidelity_psi_plus",
    "fidelity_psi_minus",
    "slocc_success_prob",
)

_MODE_TOKENS = {
    "L_up": Mode.L_UP,
    "L_down": Mode.L_DOWN,
    "R_up": Mode.R_UP,
    "R_down": Mode.R_DOWN,
}


@dataclass(frozen=True)
class ScenarioConfig:
    name: str
    initial_state: str
    dynamics: tuple
    params: ModelParams
    integrator: IntegratorConfig
    observables: tuple = ("P11",)
    n_max: int = 4
    coherence_pairs: tuple = ()
    phenomenological_rate: float | None = None
    global_gamma: float = 0.1
    stop_at_steady: bool = False
    residual_threshold: float = 1e-7
    output_path: str | None = None


@dataclass
class TimeSeries:
    times: np.ndarray
    columns: dict  # name -> real-valued array, same length as times

    def validate(self):
        for name, col in self.columns.items():
            if len(col) != len(self.times):
                raise ValueError(f"column {name} length mismatch")
        if np.any(np.diff(self.times) <= 0):
            raise ValueError("times must be strictly increasing")


def parse_initial_state(spec: str, basis):
    """Symbolic two-particle ket like "L_up,R_down" -> occupation ket."""
    tokens = [tok.strip() for tok in spec.split(",")]
    if len(tokens) != 2:
        raise ConfigError(f"initial_state must name two particles, got {spec!r}")
    occ = [0, 0, 0, 0]
    for tok in tokens:
        if tok not in _MODE_TOKENS:
            raise ConfigError(f"unknown mode token {tok!r} in initial_state")
        occ[_MODE_TOKENS[tok].value] += 1
    return basis.ket(tuple(occ))


def _validate_keys(mapping, allowed, where, errors):
    for key in mapping:
        if key not in allowed:
            errors.append(f"unknown key {key!r} in {where}")


def config_from_dict(raw: dict) -> ScenarioConfig:
    errors = []
    allowed = {
        "name", "initial_state", "dynamics", "observables", "params",
        "integrator", "n_max", "coherence_pairs", "phenomenological_rate",
        "global_gamma", "stop_at_steady", "residual_threshold", "output_path",
    }
    _validate_keys(raw, allowed, "scenario", errors)
    for req in ("name", "initial_state", "dynamics"):
        if req not in raw:
            errors.append(f"missing required key {req!r}")

    params_raw = dict(raw.get("params", {}))
    if "lambda" in params_raw:
        params_raw["lam"] = params_raw.pop("lambda")
    _validate_keys(
        params_raw,
        {"omega_s", "J", "phi", "g0", "lam", "omega_0"},
        "params", errors,
    )
    integ_raw = dict(raw.get("integrator", {}))
    _validate_keys(
        integ_raw, {"dt", "method", "t_end", "tolerance", "record_stride"},
        "integrator", errors,
    )
    dynamics = tuple(raw.get("dynamics", ()))
    if "dynamics" in raw and not dynamics:
        errors.append("dynamics list must be non-empty")
    for dyn in dynamics:
        if dyn not in KNOWN_DYNAMICS:
            errors.append(f"unknown dynamics {dyn!r}")
    observables_ = tuple(raw.get("observables", ("P11",)))
    for name in observables_:
        if name not in KNOWN_OBSERVABLES:
            errors.append(f"unknown observable {name!r}")
    pairs = tuple(tuple(p) for p in raw.get("coherence_pairs", ()))
    for p in pairs:
        if len(p) != 2 or not all(isinstance(i, int) for i in p):
            errors.append(f"coherence pair {p!r} must be two basis indices")

    if errors:
        raise ConfigError("; ".join(errors))
    try:
        params = ModelParams(**params_raw)
        integrator = IntegratorConfig(**integ_raw)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc

    return ScenarioConfig(
        name=str(raw["name"]),
        initial_state=str(raw["initial_state"]),
        dynamics=dynamics,
        params=params,
        integrator=integrator,
        observables=observables_,
        n_max=int(raw.get("n_max", 4)),
        coherence_pairs=pairs,
        phenomenological_rate=raw.get("phenomenological_rate"),
        global_gamma=float(raw.get("global_gamma", 0.1)),
        stop_at_steady=bool(raw.get("stop_at_steady", False)),
        residual_threshold=float(raw.get("residual_threshold", 1e-7)),
        output_path=raw.get("output_path"),
    )


def parse_config(text: str) -> ScenarioConfig:
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"config parse error: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config must be a key/value mapping")
    return config_from_dict(raw)


# ---------------------------------------------------------------------------
# presets (figure scenarios)


def _fig2_params():
    return {"g0": 0.15, "lam": 1.0, "J": 1.0, "omega_0": 0.0, "omega_s": 1.0}


def _fig3_params():
    return {"g0": 0.1, "lam": 0.5, "J": 1.0, "omega_0": 1.0, "omega_s": 1.0}


PRESETS = {
    "fig2_hom_offres": {
        "name": "fig2_hom_offres",
        "initial_state": "L_up,R_up",
        "dynamics": ["closed", "phenomenological", "microscopic", "pseudomode"],
        "observables": ["P11", "C1"],
        "params": _fig2_params(),
        "integrator": {"t_end": 4 * np.pi, "record_stride": 5},
    },
    "fig2_distill_offres": {
        "name": "fig2_distill_offres",
        "initial_state": "L_up,R_down",
        "dynamics": ["phenomenological", "microscopic", "pseudomode"],
        "observables": ["concurrence", "slocc_success_prob"],
        "coherence_pairs": [[1, 6], [3, 4]],
        "params": _fig2_params(),
        "integrator": {"t_end": 4 * np.pi, "record_stride": 5},
    },
    "fig3_onres": {
        "name": "fig3_onres",
        "initial_state": "L_up,R_up",
        "dynamics": ["phenomenological", "microscopic", "pseudomode"],
        "observables": ["P11", "C1", "negativity"],
        "params": _fig3_params(),
        "integrator": {"t_end": 400.0, "record_stride": 50},
        "stop_at_steady": True,
    },
    "fig4_onres_distill": {
        "name": "fig4_onres_distill",
        "initial_state": "L_up,R_down",
        "dynamics": ["phenomenological", "microscopic", "pseudomode"],
        "observables": [
            "concurrence", "fidelity_psi_plus", "fidelity_psi_minus",
            "slocc_success_prob",
        ],
        "params": _fig3_params(),
        "integrator": {"t_end": 400.0, "record_stride": 50},
        "stop_at_steady": True,
    },
    "global_bath": {
        "name": "global_bath",
        "initial_state": "L_up,R_down",
        "dynamics": ["closed", "global"],
        "observables": ["P11", "C1"],
        "params": _fig2_params(),
        "integrator": {"t_end": 4 * np.pi, "record_stride": 5},
    },
    "coeff_table": {
        "name": "coeff_table",
        "initial_state": "L_up,R_up",
        "dynamics": ["closed"],
        "observables": ["P11"],
        "params": _fig3_params(),
        "integrator": {"t_end": 20.0, "record_stride": 10},
    },
}


def preset_config(name: str) -> ScenarioConfig:
    if name not in PRESETS:
        raise ConfigError(
            f"unknown preset {name!r}; available: {', '.join(sorted(PRESETS))}"
        )
    return config_from_dict(PRESETS[name])


# ---------------------------------------------------------------------------
# running


def _evaluate(traj: Trajectory, ops, config: ScenarioConfig) -> dict:
    basis = ops.basis
    cols = {}
    n = len(traj.times)
    for name in config.observables:
        cols[name] = np.full(n, np.nan)
    for i, j in config.coherence_pairs:
        cols[f"coh_{i}_{j}_re"] = np.full(n, np.nan)
        cols[f"coh_{i}_{j}_im"] = np.full(n, np.nan)

    for k, rho in enumerate(traj.rhos):
        for name in config.observables:
            if name == "P11":
                cols[name][k] = obs.coincidence_probability(rho, ops.Pi_LR)
            elif name == "C1":
                cols[name][k] = obs.first_order_correlation(rho, basis)
            elif name == "negativity":
                cols[name][k] = obs.negativity(rho, basis)
            elif name in ("concurrence", "fidelity_psi_plus",
                          "fidelity_psi_minus", "slocc_success_prob"):
                try:
                    rho4, success = obs.slocc_project(rho, basis)
                except obs.PostSelectionError:
                    continue
                if name == "concurrence":
                    cols[name][k] = obs.concurrence(rho4)
                elif name == "slocc_success_prob":
                    cols[name][k] = success
                else:
                    psi_p, psi_m = obs.bell_states(basis)
                    target = psi_p if name.endswith("plus") else psi_m
                    cols[name][k] = obs.fidelity(rho4, target)
        for i, j in config.coherence_pairs:
            cols[f"coh_{i}_{j}_re"][k] = rho[i, j].real
            cols[f"coh_{i}_{j}_im"][k] = rho[i, j].imag
    return cols


def _run_dynamics(dyn: str, config: ScenarioConfig, ops, rho0, psi0) -> Trajectory:
    params, cfg = config.params, config.integrator
    stop = config.residual_threshold if config.stop_at_steady else None
    if dyn == "closed":
        return evolve_closed((ops.H_S + ops.H_D), psi0, cfg, params).as_trajectory(ops.basis)
    if dyn == "phenomenological":
        return evolve_phenomenological(
            rho0, params, cfg, rate=config.phenomenological_rate, ops=ops,
            early_stop_residual=stop,
        )
    if dyn == "microscopic":
        return evolve_microscopic(rho0, params, cfg, ops=ops, early_stop_residual=stop)
    if dyn == "pseudomode":
        return evolve_pseudomode(rho0, params, cfg, n_max=config.n_max,
                                 sys_basis=ops.basis, early_stop_residual=stop)
    if dyn == "global":
        return evolve_global_bath(rho0, params, cfg, gamma=config.global_gamma, ops=ops)
    raise ConfigError(f"unknown dynamics {dyn!r}")


def run_scenario(config: ScenarioConfig):
    """Run every requested dynamics and return (TimeSeries, summary)."""
    if not config.dynamics:
        raise ConfigError("dynamics list must be non-empty")
    basis = system_basis()
    ops = build_operator_set(config.params, basis)
    psi0 = parse_initial_state(config.initial_state, basis)
    rho0 = pure_density(psi0)

    trajs = {}
    for dyn in config.dynamics:
        try:
            trajs[dyn] = _run_dynamics(dyn, config, ops, rho0, psi0)
        except SolverError as exc:
            raise SolverError(f"scenario {config.name!r}, dynamics {dyn!r}: {exc}")

    # shared grid: truncate everything to the shortest trajectory
    n = min(len(t.times) for t in trajs.values())
    times = next(iter(trajs.values())).times[:n]
    columns = {}
    summary = {
        "name": config.name,
        "params": asdict(config.params),
        "integrator": asdict(config.integrator),
        "n_max": config.n_max,
        "dynamics": {},
        "comparisons": {},
    }
    for dyn, traj in trajs.items():
        short = Trajectory(traj.times[:n], traj.rhos[:n], traj.basis, traj.diagnostics)
        for name, col in _evaluate(short, ops, config).items():
            columns[f"{dyn}.{name}"] = col
        info = {"diagnostics": traj.diagnostics, "t_final": float(traj.times[-1])}
        if "concurrence" in config.observables:
            col = columns[f"{dyn}.concurrence"]
            if np.any(np.isfinite(col)):
                k = int(np.nanargmax(col))
                info["slocc_peak"] = {"t": float(times[k]),
                                      "concurrence": float(col[k])}
        summary["dynamics"][dyn] = info

    dyns = list(trajs)
    for a in range(len(dyns)):
        for b in range(a + 1, len(dyns)):
            ra, rb = trajs[dyns[a]].rhos[n - 1], trajs[dyns[b]].rhos[n - 1]
            summary["comparisons"][f"{dyns[a]}|{dyns[b]}"] = {
                "fidelity": obs.fidelity(ra, rb),
                "trace_distance": obs.trace_distance(ra, rb),
            }

    series = TimeSeries(times, columns)
    series.validate()
    return series, summary


# ---------------------------------------------------------------------------
# CSV / JSON output


def format_csv(series: TimeSeries) -> str:
    names = sorted(series.columns)
    lines = [",".join(["t"] + names)]
    for k, t in enumerate(series.times):
        row = [f"{t:.12g}"] + [f"{series.columns[n][k]:.12g}" for n in names]
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def _atomic_write(path: str, text: str):
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        fh.write(text)
    os.replace(tmp, path)


def write_outputs(series: TimeSeries, summary: dict, out_dir: str, name: str):
    os.makedirs(out_dir, exist_ok=True)
    csv_text = format_csv(series)
    csv_path = os.path.join(out_dir, f"{name}.csv")
    _atomic_write(csv_path, csv_text)
    summary = dict(summary)
    summary["csv_sha256"] = hashlib.sha256(csv_text.encode()).hexdigest()
    json_path = os.path.join(out_dir, f"{name}.json")
    _atomic_write(json_path, json.dumps(summary, indent=2, default=float))
    return csv_path, json_path


# ---------------------------------------------------------------------------
# coefficient table


def coeff_table(params: ModelParams, times) -> str:
    """CSV with t, Re/Im alpha, beta, kappa and the D(t) eigenvalues."""
    header = "t,alpha_re,alpha_im,beta_re,beta_im,kappa_re,kappa_im,D_eig1,D_eig2"
    lines = [header]
    for t in times:
        a, b, k = alpha(t, params), beta(t, params), kappa(t, params)
        ev = damping_matrix(t, params).eigenvalues()
        vals = [t, a.real, a.imag, b.real, b.imag, k.real, k.imag, ev[0], ev[1]]
        lines.append(",".join(f"{v:.12g}" for v in vals))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# sweeps


SWEEPABLE = {"omega_s", "J", "phi", "g0", "lam", "omega_0", "n_max",
             "global_gamma", "phenomenological_rate"}


def _sweep_point(args):
    config, axis, value = args
    if axis == "n_max":
        point = replace(config, n_max=int(value))
    elif axis in ("global_gamma", "phenomenological_rate"):
        point = replace(config, **{axis: float(value)})
    else:
        point = replace(config, params=replace(config.params, **{axis: float(value)}))
    point = replace(point, name=f"{config.name}_{axis}_{value:g}")
    series, summary = run_scenario(point)
    return value, point.name, series, summary


def worker_count(requested: int | None) -> int:
    env = os.environ.get("BOSEDEPH_WORKERS")
    if env:
        return max(1, int(env))
    return max(1, requested or 1)


def run_sweep(config: ScenarioConfig, axis: str, values, out_dir: str,
              workers: int | None = None):
    """Run the scenario once per swept value; write per-point outputs and
    an aggregate CSV of final-row observables keyed by the swept value."""
    if axis not in SWEEPABLE:
        raise ConfigError(f"cannot sweep {axis!r}; choose from {sorted(SWEEPABLE)}")
    values = list(values)
    if not values:
        raise ConfigError("sweep value list must be non-empty")
    tasks = [(config, axis, v) for v in values]
    n_workers = worker_count(workers)
    if n_workers > 1:
        with ProcessPoolExecutor(max_workers=n_workers) as pool:
            results = list(pool.map(_sweep_point, tasks))
    else:
        results = [_sweep_point(t) for t in tasks]

    results.sort(key=lambda r: r[0])
    agg_rows = []
    col_names = None
    for value, name, series, summary in results:
        write_outputs(series, summary, out_dir, name)
        if col_names is None:
            col_names = sorted(series.columns)
        agg_rows.append(
            [value] + [series.columns[c][-1] for c in col_names]
        )
    lines = [",".join([axis] + col_names)]
    for row in agg_rows:
        lines.append(",".join(f"{v:.12g}" for v in row))
    agg_path = os.path.join(out_dir, f"{config.name}_sweep_{axis}.csv")
    _atomic_write(agg_path, "\n".join(lines) + "\n")
    return agg_path
