import json
import os

import numpy as np
import pytest

from bosedeph.cli import EXIT_CONFIG, EXIT_OK, main
from bosedeph.model import ModelParams
from bosedeph.scenario import (
    ConfigError,
    PRESETS,
    ScenarioConfig,
    TimeSeries,
    coeff_table,
    config_from_dict,
    format_csv,
    parse_config,
    parse_initial_state,
    preset_config,
    run_scenario,
    run_sweep,
    write_outputs,
)
from bosedeph.solvers import IntegratorConfig


def _cheap_config(**overrides):
    raw = {
        "name": "cheap",
        "initial_state": "L_up,R_up",
        "dynamics": ["closed", "phenomenological"],
        "observables": ["P11", "C1"],
        "params": {"g0": 0.1, "lam": 0.5, "J": 1.0, "omega_0": 1.0},
        "integrator": {"dt": 0.02, "t_end": 2.0, "record_stride": 10},
    }
    raw.update(overrides)
    return config_from_dict(raw)


def test_parse_initial_state(basis):
    psi = parse_initial_state("L_up,R_down", basis)
    assert psi[basis.index_of((1, 0, 0, 1))] == 1.0
    assert np.linalg.norm(psi) == 1.0
    psi = parse_initial_state(" L_up , L_up ", basis)
    assert psi[basis.index_of((2, 0, 0, 0))] == 1.0
    with pytest.raises(ConfigError):
        parse_initial_state("L_up", basis)
    with pytest.raises(ConfigError):
        parse_initial_state("L_up,M_down", basis)


def test_all_presets_parse():
    for name in PRESETS:
        cfg = preset_config(name)
        assert isinstance(cfg, ScenarioConfig)
        assert cfg.name == name
    with pytest.raises(ConfigError):
        preset_config("fig9_nonexistent")


def test_config_errors_are_aggregated():
    raw = {
        "name": "bad",
        "dynamics": ["closed", "warp"],
        "observables": ["P11", "entropy"],
        "params": {"g0": 0.1, "coupling": 2.0},
        "bogus_key": 1,
    }
    with pytest.raises(ConfigError) as exc:
        config_from_dict(raw)
    msg = str(exc.value)
    for frag in ("initial_state", "warp", "entropy", "coupling", "bogus_key"):
        assert frag in msg


def test_lambda_alias_and_empty_dynamics():
    cfg = _cheap_config(params={"g0": 0.1, "lambda": 0.7})
    assert cfg.params.lam == 0.7
    with pytest.raises(ConfigError, match="non-empty"):
        _cheap_config(dynamics=[])


def test_yaml_parsing_round_trip():
    text = """
name: yaml_case
initial_state: L_up,R_down
dynamics: [closed]
observables: [P11]
params: {g0: 0.05, lambda: 1.0, J: 2.0}
integrator: {dt: 0.01, t_end: 1.0}
"""
    cfg = parse_config(text)
    assert cfg.params.J == 2.0
    with pytest.raises(ConfigError):
        parse_config("just a string")
    with pytest.raises(ConfigError):
        parse_config("a: [unclosed")


def test_run_scenario_columns_and_summary():
    series, summary = run_scenario(_cheap_config())
    assert set(series.columns) == {
        "closed.P11", "closed.C1", "phenomenological.P11", "phenomenological.C1",
    }
    for col in series.columns.values():
        assert len(col) == len(series.times)
        assert np.all(np.isfinite(col))
    assert series.times[0] == 0.0
    assert summary["name"] == "cheap"
    assert "phenomenological" in summary["dynamics"]
    comp = summary["comparisons"]["closed|phenomenological"]
    assert 0.0 <= comp["trace_distance"] <= 1.0
    assert 0.0 <= comp["fidelity"] <= 1.0


def test_coherence_columns():
    cfg = _cheap_config(coherence_pairs=[[1, 6]])
    series, _ = run_scenario(cfg)
    assert "closed.coh_1_6_re" in series.columns
    assert "closed.coh_1_6_im" in series.columns


def test_csv_format():
    series, _ = run_scenario(_cheap_config())
    text = format_csv(series)
    lines = text.strip().split("\n")
    header = lines[0].split(",")
    assert header[0] == "t"
    assert header[1:] == sorted(header[1:])
    assert len(lines) == len(series.times) + 1
    assert all(len(line.split(",")) == len(header) for line in lines[1:])


def test_rerun_is_bit_identical():
    a = format_csv(run_scenario(_cheap_config())[0])
    b = format_csv(run_scenario(_cheap_config())[0])
    assert a == b


def test_write_outputs(tmp_path):
    series, summary = run_scenario(_cheap_config())
    csv_path, json_path = write_outputs(series, summary, str(tmp_path), "cheap")
    assert os.path.exists(csv_path) and os.path.exists(json_path)
    with open(json_path) as fh:
        loaded = json.load(fh)
    assert loaded["csv_sha256"]
    assert loaded["name"] == "cheap"
    # no stray temp files left behind
    assert not [f for f in os.listdir(tmp_path) if f.endswith(".tmp")]


def test_timeseries_validation():
    with pytest.raises(ValueError, match="length mismatch"):
        TimeSeries(np.array([0.0, 1.0]), {"x": np.array([1.0])}).validate()
    with pytest.raises(ValueError, match="increasing"):
        TimeSeries(np.array([0.0, 0.0]), {"x": np.zeros(2)}).validate()


def test_coeff_table_contents():
    params = ModelParams(g0=0.1, lam=0.5, J=1.0, omega_0=0.0)
    times = np.linspace(0.0, 2.0, 5)
    lines = coeff_table(params, times).strip().split("\n")
    header = lines[0].split(",")
    assert header == ["t", "alpha_re", "alpha_im", "beta_re", "beta_im",
                      "kappa_re", "kappa_im", "D_eig1", "D_eig2"]
    first = [float(v) for v in lines[1].split(",")]
    assert all(v == 0.0 for v in first)  # all coefficients vanish at t = 0
    # zero bath detuning keeps every coefficient real
    for line in lines[1:]:
        vals = dict(zip(header, (float(v) for v in line.split(","))))
        assert vals["alpha_im"] == 0.0
        assert vals["beta_im"] == 0.0
        assert vals["kappa_im"] == 0.0


def test_run_sweep(tmp_path):
    cfg = _cheap_config(dynamics=["phenomenological"], observables=["P11"])
    agg = run_sweep(cfg, "g0", [0.2, 0.05, 0.1], str(tmp_path))
    lines = open(agg).read().strip().split("\n")
    assert lines[0].split(",")[0] == "g0"
    swept = [float(line.split(",")[0]) for line in lines[1:]]
    assert swept == [0.05, 0.1, 0.2]  # sorted regardless of input order
    assert os.path.exists(tmp_path / "cheap_g0_0.05.csv")
    with pytest.raises(ConfigError):
        run_sweep(cfg, "dt", [0.1], str(tmp_path))
    with pytest.raises(ConfigError):
        run_sweep(cfg, "g0", [], str(tmp_path))


def test_run_sweep_parallel_matches_serial(tmp_path):
    cfg = _cheap_config(dynamics=["phenomenological"], observables=["P11"])
    a = run_sweep(cfg, "g0", [0.05, 0.1], str(tmp_path / "serial"), workers=1)
    b = run_sweep(cfg, "g0", [0.05, 0.1], str(tmp_path / "par"), workers=2)
    assert open(a).read() == open(b).read()


# ---------------------------------------------------------------------------
# CLI


def _write_cheap_yaml(tmp_path, **extra):
    body = """
name: cli_case
initial_state: L_up,R_up
dynamics: [phenomenological]
observables: [P11]
params: {g0: 0.1, lambda: 0.5, J: 1.0, omega_0: 1.0}
integrator: {dt: 0.02, t_end: 1.0, record_stride: 10}
"""
    path = tmp_path / "scenario.yaml"
    path.write_text(body)
    return str(path)


def test_cli_run(tmp_path, capsys):
    cfg_path = _write_cheap_yaml(tmp_path)
    code = main(["run", cfg_path, "--out", str(tmp_path / "out")])
    assert code == EXIT_OK
    assert (tmp_path / "out" / "cli_case.csv").exists()
    assert "wrote" in capsys.readouterr().out


def test_cli_bad_config(tmp_path, capsys):
    path = tmp_path / "bad.yaml"
    path.write_text("name: x\ndynamics: [warp]\n")
    assert main(["run", str(path), "--out", str(tmp_path)]) == EXIT_CONFIG
    assert "error" in capsys.readouterr().err
    missing = str(tmp_path / "nope.yaml")
    assert main(["run", missing, "--out", str(tmp_path)]) == EXIT_CONFIG


def test_cli_strict_rejects_coarse_step(tmp_path):
    path = tmp_path / "coarse.yaml"
    path.write_text("""
name: coarse
initial_state: L_up,R_up
dynamics: [closed]
params: {g0: 0.1, lambda: 0.5, J: 1.0, omega_0: 1.0}
integrator: {dt: 0.2, t_end: 1.0}
""")
    assert main(["run", str(path), "--out", str(tmp_path), "--strict"]) == EXIT_CONFIG
    # strict is opt-in: the same file runs fine without the flag
    assert main(["run", str(path), "--out", str(tmp_path)]) == EXIT_OK


def test_cli_sweep(tmp_path):
    cfg_path = _write_cheap_yaml(tmp_path)
    out = str(tmp_path / "sweep")
    code = main(["sweep", "--config", cfg_path, "--axis", "g0",
                 "--values", "0.05,0.1", "--out", out])
    assert code == EXIT_OK
    assert os.path.exists(os.path.join(out, "cli_case_sweep_g0.csv"))
    code = main(["sweep", "--config", cfg_path, "--axis", "dt",
                 "--values", "0.1", "--out", out])
    assert code == EXIT_CONFIG


def test_cli_coeff_table(tmp_path, capsys):
    code = main(["coeff-table", "--g0", "0.1", "--lam", "0.5",
                 "--t-end", "2.0", "--steps", "10"])
    assert code == EXIT_OK
    out = capsys.readouterr().out
    assert out.startswith("t,alpha_re")
    assert len(out.strip().split("\n")) == 11
    target = tmp_path / "coeffs.csv"
    code = main(["coeff-table", "--steps", "5", "--out", str(target)])
    assert code == EXIT_OK
    assert target.exists()
