"""Experiment harness: config validation, CSV/figure outputs, exit codes, baseline."""

import json
from pathlib import Path

import numpy as np
import pytest

from llocg import OnlineConfig, make_linear_loss_stream, oco_general, simplex
from llocg.bench import (
    ConfigError,
    ExperimentConfig,
    project_to_simplex,
    projected_subgradient_baseline,
    run_experiment,
    validate_config,
)
from llocg.cli import main as cli_main

CONFIG_DIR = Path(__file__).resolve().parent.parent / "configs"


def write_config(tmp_path, **overrides):
    cfg = {
        "name": "small",
        "solver": "llo_cg",
        "polytope": {"family": "simplex", "n": 6},
        "objective": {"family": "lower_bound", "n": 6},
        "T": 120,
        "C": 2.0,
        "seeds": [1],
        "certify": ["linear_envelope", "oracle_budget"],
    }
    cfg.update(overrides)
    path = tmp_path / "config.json"
    path.write_text(json.dumps(cfg))
    return path


# --- config validation -------------------------------------------------------


def test_unknown_solver_named():
    with pytest.raises(ConfigError, match="unknown solver: 'wat'"):
        ExperimentConfig(name="x", solver="wat", T=5, seeds=[1],
                         polytope={"family": "simplex", "n": 3}).validate()


def test_unknown_polytope_family_named(tmp_path):
    path = write_config(tmp_path, polytope={"family": "dodecahedron", "n": 3})
    with pytest.raises(ConfigError, match="dodecahedron"):
        ExperimentConfig.from_json(path)


def test_unknown_top_level_key_named(tmp_path):
    path = write_config(tmp_path, frobnicate=1)
    with pytest.raises(ConfigError, match="frobnicate"):
        ExperimentConfig.from_json(path)


def test_unknown_stream_family_named(tmp_path):
    path = write_config(tmp_path, solver="oco_general", objective=None,
                        stream={"family": "bogus_stream", "n": 3})
    with pytest.raises(ConfigError, match="bogus_stream"):
        ExperimentConfig.from_json(path)


def test_dimension_mismatch_named(tmp_path):
    path = write_config(tmp_path, solver="oco_general", objective=None,
                        stream={"family": "linear_stream", "n": 4, "scale": 1.0})
    with pytest.raises(ConfigError, match="does not match"):
        validate_config(path, log=lambda *_: None)


def test_empty_seed_list_rejected(tmp_path):
    path = write_config(tmp_path, seeds=[])
    with pytest.raises(ConfigError, match="seeds"):
        ExperimentConfig.from_json(path)


def test_validate_command_ok():
    assert validate_config(CONFIG_DIR / "lower_bound_n10.json", log=lambda *_: None) == 0


# --- run_experiment ----------------------------------------------------------


def test_run_writes_expected_files(tmp_path):
    path = write_config(tmp_path)
    out = tmp_path / "out"
    status = run_experiment(path, jobs=1, out_dir=out, log=lambda *_: None)
    assert status == 0
    trace = out / "small_trace_seed1.csv"
    summary = out / "small_summary.csv"
    figure = out / "small_gap.png"
    assert trace.exists() and summary.exists()
    assert figure.exists() and figure.stat().st_size > 0
    lines = trace.read_text().splitlines()
    assert lines[0] == "t,value,gap,regret,support,radius,oracle_calls"
    assert len(lines) == 120 + 1
    srows = summary.read_text().splitlines()
    assert "cert_linear_envelope" in srows[0]
    assert srows[1].endswith("true,true")


def test_run_byte_identical_across_repeats_and_jobs(tmp_path):
    path = write_config(tmp_path, solver="oco_general", objective=None,
                        polytope={"family": "simplex", "n": 4},
                        stream={"family": "linear_stream", "n": 4, "scale": 1.0},
                        T=150, C=None, seeds=[1, 2, 3],
                        certify=["regret_bound", "oracle_budget"])
    out1, out2 = tmp_path / "a", tmp_path / "b"
    assert run_experiment(path, jobs=1, out_dir=out1, figures=False, log=lambda *_: None) == 0
    assert run_experiment(path, jobs=3, out_dir=out2, figures=False, log=lambda *_: None) == 0
    for name in ["small_trace_seed1.csv", "small_trace_seed2.csv",
                 "small_trace_seed3.csv", "small_summary.csv"]:
        assert (out1 / name).read_bytes() == (out2 / name).read_bytes()


def test_run_certification_failure_exit_code(tmp_path):
    # C below the true initial gap invalidates the envelope from round one
    path = write_config(tmp_path, C=0.25)
    status = run_experiment(path, jobs=1, out_dir=tmp_path / "out",
                            figures=False, log=lambda *_: None)
    assert status == 1


def test_run_flow_dag_config(tmp_path):
    (tmp_path / "dag.txt").write_text("0 1\n0 2\n1 2\n1 3\n2 3\n")
    cfg = {
        "name": "flow",
        "solver": "llo_cg",
        "polytope": {"family": "flow_dag", "edge_file": "dag.txt"},
        "objective": {"family": "distance",
                      "target": [0.5, 0.5, 0.0, 0.5, 0.5]},
        "T": 200,
        "C": 5.0,
        "seeds": [1],
        "certify": ["linear_envelope"],
    }
    path = tmp_path / "flow.json"
    path.write_text(json.dumps(cfg))
    out = tmp_path / "out"
    assert run_experiment(path, jobs=1, out_dir=out, figures=False,
                          log=lambda *_: None) == 0
    assert (out / "flow_trace_seed1.csv").exists()


def test_run_env_var_output_dir(tmp_path, monkeypatch):
    path = write_config(tmp_path, T=30, certify=[])
    monkeypatch.setenv("LLOCG_OUT", str(tmp_path / "envout"))
    assert run_experiment(path, jobs=1, figures=False, log=lambda *_: None) == 0
    assert (tmp_path / "envout" / "small_trace_seed1.csv").exists()


# --- CLI ----------------------------------------------------------------------


def test_cli_run_and_exit_codes(tmp_path, capsys):
    path = write_config(tmp_path, T=50)
    assert cli_main(["run", str(path), "--out", str(tmp_path / "o"), "--jobs", "1",
                     "--no-figures"]) == 0
    # bad JSON -> usage error
    bad = tmp_path / "bad.json"
    bad.write_text("{nope")
    assert cli_main(["validate", str(bad)]) == 2
    # unknown key -> usage error
    path2 = write_config(tmp_path, bogus_key=True)
    assert cli_main(["run", str(path2)]) == 2
    # missing file -> usage error
    assert cli_main(["run", str(tmp_path / "missing.json")]) == 2


def test_cli_list(capsys):
    assert cli_main(["list"]) == 0
    out = capsys.readouterr().out
    for token in ("llo_cg", "simplex", "flow_dag", "linear_stream", "bandit"):
        assert token in out


def test_cli_radius_schedule_flag(tmp_path):
    path = write_config(tmp_path, T=60, certify=[])
    assert cli_main(["run", str(path), "--out", str(tmp_path / "o"),
                     "--radius-schedule", "algbox", "--no-figures", "--jobs", "1"]) == 0


# --- projection + baseline -----------------------------------------------------


def test_projection_examples():
    np.testing.assert_allclose(project_to_simplex([2.0, 0.0, 0.0]), [1, 0, 0], atol=1e-12)
    np.testing.assert_allclose(project_to_simplex([0.5, 0.5, 0.5]),
                               [1 / 3, 1 / 3, 1 / 3], atol=1e-12)


def test_projection_random_against_grid():
    rng = np.random.default_rng(2)
    step = 1e-3
    a = np.arange(0.0, 1.0 + step / 2, step)
    A, B = np.meshgrid(a, a, indexing="ij")
    C = 1.0 - A - B
    mask = C >= -1e-12
    pts = np.stack([A[mask], B[mask], np.maximum(C[mask], 0.0)], axis=1)
    for _ in range(10):
        y = rng.uniform(-1, 2, size=3)
        p = project_to_simplex(y)
        dists = np.sum((pts - y) ** 2, axis=1)
        assert float(np.sum((p - y) ** 2)) <= dists.min() + 1e-5


def test_baseline_requires_simplex():
    stream = make_linear_loss_stream(1, 3, 10, 1.0)
    from llocg import hypercube

    with pytest.raises(ValueError):
        projected_subgradient_baseline(stream, hypercube(3), 10)


def test_baseline_regret_comparable_to_restricted_cg():
    """Mean baseline regret stays within 4x of the conditional-gradient
    solver's mean regret on the shipped linear-stream instance."""
    n, T = 5, 4000
    s = simplex(n)
    cg, og = [], []
    for seed in (1, 2, 3, 4, 5):
        rep = oco_general(make_linear_loss_stream(seed, n, T, 1.0), s,
                          OnlineConfig(horizon=T))
        cg.append(rep.regret)
        base = projected_subgradient_baseline(
            make_linear_loss_stream(seed, n, T, 1.0), s, T)
        og.append(base.regret)
    assert np.mean(og) <= 4.0 * np.mean(cg)
    assert np.mean(cg) <= 4.0 * np.mean(og)
