from __future__ import annotations

import json
import subprocess
import sys

import pytest

from majda_znd import cli, stability
from majda_znd.params import P0

P0_JSON = {"u_plus": 0.0, "u_star": 2.0, "q": 0.3, "k": 1.0, "u_i": 1.2}


def write(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return str(path)


def test_verify_p0_exit_zero(tmp_path):
    cfg = write(tmp_path, "p0.json", P0_JSON)
    out = tmp_path / "out"
    assert cli.main(["verify", "--config", cfg, "--out", str(out)]) == 0
    report = json.loads((out / "report.json").read_text())
    assert (report["winding_open_half_plane"], report["winding_small_circle"]) == (0, 1)
    assert report["verdict"] == "StableConditionD"


def test_malformed_json_exit_two_and_no_files(tmp_path):
    cfg = write(tmp_path, "bad.json", '{"u_plus": 0.0, "u_star": ')
    out = tmp_path / "out"
    assert cli.main(["verify", "--config", cfg, "--out", str(out)]) == 2
    assert not out.exists()


@pytest.mark.parametrize(
    "body",
    [
        {"params": {**P0_JSON, "gamma": 1.4}},
        {"params": P0_JSON, "trace": "yes"},
        {"params": {**P0_JSON, "q": 0.6}},  # above q_max
        {"params": {"u_plus": 0.0}},
    ],
)
def test_invalid_config_exit_two(tmp_path, body):
    cfg = write(tmp_path, "c.json", body)
    out = tmp_path / "out"
    assert cli.main(["verify", "--config", cfg, "--out", str(out)]) == 2
    assert not out.exists()


def test_unknown_command_and_bad_flags():
    assert cli.main(["frobnicate"]) == 2
    assert cli.main(["params", "--tol", "2"]) == 2
    assert cli.main(["params", "--threads", "0"]) == 2


def test_inconclusive_exit_three(tmp_path):
    cfg = write(tmp_path, "c.json", {"params": P0_JSON, "indent_r": 10.0})
    assert cli.main(["verify", "--config", cfg, "--out", str(tmp_path)]) == 3
    assert "Inconclusive" in (tmp_path / "report.json").read_text()


def test_violation_exit_one(tmp_path, monkeypatch):
    real = stability.verify_condition_D

    def fake(*args, **kwargs):
        report = real(*args, **kwargs)
        report.verdict = stability.Verdict.VIOLATED
        return report

    monkeypatch.setattr(stability, "verify_condition_D", fake)
    assert cli.main(["verify", "--out", str(tmp_path)]) == 1


def test_unwritable_output_exit_one(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    assert cli.main(["params", "--out", str(blocker / "sub")]) == 1


def test_environment_defaults_and_flag_precedence(tmp_path, monkeypatch):
    env_out = tmp_path / "env"
    flag_out = tmp_path / "flag"
    monkeypatch.setenv("MAJDA_ZND_OUT", str(env_out))
    assert cli.main(["params"]) == 0
    assert (env_out / "params.json").exists()
    assert cli.main(["params", "--out", str(flag_out)]) == 0
    assert (flag_out / "params.json").exists()
    monkeypatch.setenv("MAJDA_ZND_TOL", "not-a-number")
    assert cli.main(["params"]) == 2


def test_det_output_is_deterministic_with_header(tmp_path):
    grid = {"params": P0_JSON, "grid": {"kind": "rectangle", "re": [0, 2], "im": [-1, 1], "n_re": 2, "n_im": 3}}
    cfg = write(tmp_path, "g.json", grid)
    for d in ("a", "b"):
        assert cli.main(["det", "--config", cfg, "--out", str(tmp_path / d)]) == 0
    a = (tmp_path / "a" / "det.csv").read_bytes()
    assert a == (tmp_path / "b" / "det.csv").read_bytes()
    lines = a.decode().splitlines()
    assert lines[0] == "lambda_re,lambda_im,D_re,D_im,abs_D"
    assert len(lines) == 7


def test_oracle_and_psi_and_profile(tmp_path):
    ray = {"params": P0_JSON, "grid": {"kind": "ray", "angle": 0.5, "r_min": 0.5, "r_max": 3.0, "n": 4}}
    cfg = write(tmp_path, "r.json", ray)
    assert cli.main(["oracle", "--config", cfg, "--out", str(tmp_path)]) == 0
    header = (tmp_path / "oracle.csv").read_text().splitlines()[0]
    assert header == "lambda_re,lambda_im,D_closed_re,D_closed_im,D_ode_re,D_ode_im,rel_err"
    assert cli.main(["psi", "--config", cfg, "--out", str(tmp_path)]) == 0
    assert cli.main(["profile", "--out", str(tmp_path), "--plot-script"]) == 0
    assert (tmp_path / "profile.gp").exists()
    assert (tmp_path / "profile.csv").read_text().startswith("xi,u_bar,z_bar\n")


def test_verify_trace_csv(tmp_path):
    cfg = write(tmp_path, "t.json", {"params": P0_JSON, "trace": True})
    assert cli.main(["verify", "--config", cfg, "--out", str(tmp_path)]) == 0
    assert (tmp_path / "contour_trace.csv").read_text().startswith("lambda_re,lambda_im,D_re,D_im,cum_arg\n")


def test_sweep_and_simulate(tmp_path):
    cfg = write(tmp_path, "s.json", {"u_plus": [0.0, 0.2], "u_star": [2.0], "q_fraction": [0.5], "k": [1.0]})
    assert cli.main(["sweep", "--config", cfg, "--out", str(tmp_path), "--threads", "2", "--tol", "1e-8"]) == 0
    assert len((tmp_path / "sweep.csv").read_text().splitlines()) == 3
    sim = write(tmp_path, "sim.json", {"params": P0_JSON, "grid": {"n_cells": 500}, "horizon": 0.5, "snapshot_every": 50})
    assert cli.main(["simulate", "--config", sim, "--out", str(tmp_path)]) == 0
    assert (tmp_path / "snapshots.csv").read_text().startswith("t,xi,u,z\n")
    assert (tmp_path / "metrics.csv").read_text().startswith("t,distance_to_orbit,shift,mass_balance_residual\n")


def test_module_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "majda_znd", "params", "--out", str(tmp_path)], capture_output=True, text=True
    )
    assert proc.returncode == 0
    assert json.loads((tmp_path / "params.json").read_text())["s"] == P0.s
