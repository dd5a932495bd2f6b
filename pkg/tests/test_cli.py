import json
import subprocess
import sys

import numpy as np
import pytest

from frontlab import cli, golden


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr().out.strip()
    return code, out


def last_json(out):
    # commands may print one JSON object over several lines
    return json.loads(out)


def test_tau_golden_pass(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    code, out = run_cli(capsys, "tau", "--nu", "0", "--golden")
    assert code == 0
    payload = last_json(out)
    assert abs(payload["tau"] - 0.693147) < 1e-3
    assert payload["is_sharp"] is True


def test_tau_output_file(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    code, out = run_cli(capsys, "tau", "--nu", "0", "--output", "tau.json")
    assert code == 0
    assert json.loads(out) == {"written": "tau.json"}
    payload = json.loads((tmp_path / "tau.json").read_text())
    assert set(payload) == {"nu", "tau", "balance_point", "m_infinity",
                            "shock_offset", "l1_distance", "is_sharp"}


def test_tau_grid_refinement_consistency(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    _, out1 = run_cli(capsys, "tau", "--nu", "0", "--grid-points", "1025")
    _, out2 = run_cli(capsys, "tau", "--nu", "0", "--grid-points", "2049")
    t1 = last_json(out1)["tau"]
    t2 = last_json(out2)["tau"]
    assert abs(t1 - t2) < 1e-4


def test_golden_mismatch_exit_code(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    monkeypatch.setitem(golden.GOLDEN, "tau@nu=0", (0.5, 1e-6))
    code, out = run_cli(capsys, "tau", "--nu", "0", "--golden")
    assert code == 4
    record = json.loads(out)
    assert record["error"] == "GoldenMismatch"


def test_config_error_exit_code(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    code, out = run_cli(capsys, "tau", "--nu", "0.1", "--golden")
    assert code == 2
    assert json.loads(out)["error"] == "ConfigError"
    code, out = run_cli(capsys, "front", "--nu", "0.25", "--grid-points", "8")
    assert code == 2


def test_unknown_flag_rejected(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    code, out = run_cli(capsys, "tau", "--nu", "0", "--frobnicate", "3")
    assert code == 2
    assert json.loads(out)["error"] == "ConfigError"


def test_numerical_error_exit_code(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    code, out = run_cli(capsys, "front", "--nu", "1", "--half-length", "3",
                        "--grid-points", "256")
    assert code == 3
    record = json.loads(out)
    assert record["error"] == "NoConnection"
    assert "origin" in record


def test_front_artifacts(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    code, out = run_cli(capsys, "front", "--nu", "0.25", "--plot")
    assert code == 0
    payload = last_json(out)
    csv_path = tmp_path / payload["csv"]
    assert csv_path.exists()
    assert csv_path.with_suffix(".json").exists()
    assert csv_path.with_suffix(".svg").exists()
    sidecar = json.loads(csv_path.with_suffix(".json").read_text())
    assert set(sidecar) == {"nu", "half_length", "residual", "ode_tol"}


def test_tau_scan_deterministic(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    run_cli(capsys, "tau-scan", "--lo", "0", "--hi", "0.5", "--steps", "3",
            "--output", "a.csv")
    monkeypatch.setenv("FRONTLAB_THREADS", "2")
    run_cli(capsys, "tau-scan", "--lo", "0", "--hi", "0.5", "--steps", "3",
            "--output", "b.csv")
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
    lines = (tmp_path / "a.csv").read_text().splitlines()
    assert lines[0] == "nu,tau"
    assert len(lines) == 4


def test_spectrum_command(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    code, out = run_cli(capsys, "spectrum", "--nu", "0.25", "--gamma", "1.05")
    assert code == 0
    payload = last_json(out)
    assert payload["negative_count"] == 1
    assert payload["min_eig_perturbed"] >= -1e-6


def test_rank_one_command(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    code, out = run_cli(capsys, "rank-one", "--nu", "0.25", "--gamma", "0.5")
    assert code == 0
    payload = last_json(out)
    assert payload["min_eig_perturbed"] < 0.0
    assert abs(payload["threshold_gamma"] - 1.0) < 1e-6


def test_evans_command(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    code, out = run_cli(capsys, "evans", "--nu", "0.25", "--points", "60")
    assert code == 0
    payload = last_json(out)
    assert payload["count"] == 1
    csv_path = tmp_path / payload["csv"]
    assert csv_path.read_text().splitlines()[0] == "lambda,delta"
    sidecar = json.loads(csv_path.with_suffix(".json").read_text())
    assert set(sidecar) == {"nu", "negative_roots", "delta_at_zero"}


def test_tau_crossing_golden(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    code, out = run_cli(capsys, "tau-crossing", "--lo", "0.25", "--hi", "1.25",
                        "--golden")
    assert code == 0
    assert abs(last_json(out)["nu"] - 1.1835) < 0.01


def test_nu_critical_golden(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    code, out = run_cli(capsys, "nu-critical", "--lo", "4.0", "--hi", "4.2",
                        "--golden")
    assert code == 0
    assert abs(last_json(out)["nu_c"] - 4.096) < 0.01


def test_evans_scan_command(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    code, out = run_cli(capsys, "evans-scan", "--lo", "0.2", "--hi", "0.3",
                        "--steps", "2")
    assert code == 0
    data = np.genfromtxt(tmp_path / last_json(out)["csv"], delimiter=",", names=True)
    assert set(data.dtype.names) == {"nu", "delta_at_zero"}
    assert np.all(data["delta_at_zero"] < 0.0)  # fixed sign in the stable range


def test_simulate_command(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    code, out = run_cli(capsys, "simulate", "--nu", "0.25", "--T", "1.0",
                        "--dt", "0.02", "--points", "1024")
    assert code == 0
    payload = last_json(out)
    assert payload["monotone_violations"] == 0
    csv_path = tmp_path / payload["csv"]
    assert csv_path.read_text().splitlines()[0] == "t,l2_v,l2_vx,x0,energy_residual"
    assert csv_path.with_suffix(".json").exists()


def test_reproduce_front_gallery(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    code, out = run_cli(capsys, "reproduce", "front-gallery", "--nu", "1")
    assert code == 0
    payload = last_json(out)
    data = np.genfromtxt(payload["csv"], delimiter=",", names=True)
    assert set(data.dtype.names) == {"x", "phi", "m", "s"}
    # the monotonization must be exactly constant where phi increases
    dphi = np.gradient(data["phi"], data["x"])
    rising = (dphi[:-1] > 1e-3) & (dphi[1:] > 1e-3)
    dm = np.diff(data["m"])
    assert rising.any()
    assert np.max(np.abs(dm[rising])) == 0.0
    assert payload["m_infinity"] >= 1.0


def test_reproduce_tau_vs_nu(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    code, out = run_cli(capsys, "reproduce", "tau-vs-nu", "--steps", "21")
    assert code == 0
    payload = last_json(out)
    assert abs(payload["tau_equals_one_at_nu"] - 1.1835) < 0.01
    data = np.genfromtxt(payload["csv"], delimiter=",", names=True)
    assert data["nu"][0] == 0.25 and data["nu"][-1] == 1.25
    assert (tmp_path / "tau_vs_nu.svg").exists()


def test_reproduce_evans_curves(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    code, out = run_cli(capsys, "reproduce", "evans-curves")
    assert code == 0
    curves = last_json(out)["curves"]
    assert curves["4.09"]["count"] == 1
    assert curves["4.1"]["count"] >= 2
    # the middle curve sits at the resonance: its value at the origin is
    # far smaller than on either side
    mid = abs(curves["4.096"]["delta_at_zero"])
    assert mid < 0.5 * abs(curves["4.09"]["delta_at_zero"])
    assert mid < 0.5 * abs(curves["4.1"]["delta_at_zero"])


def test_help_lists_commands(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.build_parser().parse_args(["--help"])
    assert exc.value.code == 0
    out = capsys.readouterr().out
    for cmd in ("front", "tau", "tau-scan", "tau-crossing", "spectrum",
                "rank-one", "evans", "evans-scan", "nu-critical",
                "simulate", "reproduce"):
        assert cmd in out


def test_installed_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "frontlab.cli", "tau", "--nu", "0"],
                          capture_output=True, text=True, cwd=tmp_path)
    assert proc.returncode == 0
    assert abs(json.loads(proc.stdout)["tau"] - 0.693147) < 1e-3
