import json
from pathlib import Path

import numpy as np
import pytest
from click.testing import CliRunner

from curvedual.cli import main


@pytest.fixture()
def runner():
    return CliRunner()


def _read_csv(path):
    with open(path) as fh:
        header = fh.readline().strip().split(",")
        rows = [line.strip().split(",") for line in fh if line.strip()]
    return header, rows


def test_design_default_sinusoidal(runner, tmp_path):
    out = tmp_path / "run"
    res = runner.invoke(main, ["design", "--out", str(out), "--grid-n", "64"])
    assert res.exit_code == 0, res.output
    header, rows = _read_csv(out / "design.csv")
    assert header == ["x", "gamma_bar", "z", "kappa"]
    assert len(rows) == 64
    sidecar = json.loads((out / "design.json").read_text())
    assert sidecar["results"]["residual"] < 1e-8
    assert sidecar["config"]["grid_n"] == 64
    assert "curvedual" in sidecar["versions"]
    assert sidecar["timing_seconds"] >= 0


def test_design_flat_profile_is_zero(runner, tmp_path):
    out = tmp_path / "run"
    res = runner.invoke(main, ["design", "--out", str(out), "--preset", "flat", "--grid-n", "32"])
    assert res.exit_code == 0, res.output
    _, rows = _read_csv(out / "design.csv")
    gammas = [float(r[1]) for r in rows]
    xs = [float(r[0]) for r in rows]
    assert max(abs(g) for g in gammas) < 1e-12
    assert xs[0] == 0.0


def test_design_deterministic_byte_identical(runner, tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for out in (a, b):
        res = runner.invoke(main, ["design", "--out", str(out), "--grid-n", "48"])
        assert res.exit_code == 0, res.output
    assert (a / "design.csv").read_bytes() == (b / "design.csv").read_bytes()


def test_run_dir_environment_variable(runner, tmp_path):
    env_dir = tmp_path / "envrun"
    res = runner.invoke(
        main,
        ["design", "--preset", "flat", "--grid-n", "32"],
        env={"CURVEDUAL_RUN_DIR": str(env_dir)},
    )
    assert res.exit_code == 0, res.output
    assert (env_dir / "design.csv").exists()


def test_config_file_with_flag_override(runner, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"grid_n": 32, "lam": 0.1, "q": 1.0}))
    out = tmp_path / "run"
    res = runner.invoke(
        main,
        ["design", "--config", str(cfg), "--out", str(out), "--grid-n", "16"],
    )
    assert res.exit_code == 0, res.output
    _, rows = _read_csv(out / "design.csv")
    assert len(rows) == 16  # flag wins over config
    sidecar = json.loads((out / "design.json").read_text())
    assert sidecar["config"]["grid_n"] == 16
    assert sidecar["config"]["lam"] == 0.1  # config wins over default


def test_validation_exit_codes(runner, tmp_path):
    # unknown preset
    res = runner.invoke(main, ["design", "--out", str(tmp_path), "--preset", "nope"])
    assert res.exit_code == 2
    # invalid physics parameter (|lambda| >= 1)
    res = runner.invoke(main, ["design", "--out", str(tmp_path), "--lambda", "1.5"])
    assert res.exit_code == 2
    # unreadable config file
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    res = runner.invoke(main, ["design", "--out", str(tmp_path), "--config", str(bad)])
    assert res.exit_code == 2


@pytest.mark.filterwarnings("ignore::RuntimeWarning")
def test_numerical_failure_exit_code(runner, tmp_path):
    # an absurdly strong drive overflows the slice exponentials
    res = runner.invoke(
        main,
        ["duality", "--out", str(tmp_path), "--grid-n", "16", "--slices", "64",
         "--period", "10", "--amplitude", "1e6"],
    )
    assert res.exit_code == 3, res.output
    assert "numerical failure" in res.output


def test_duality_single_run(runner, tmp_path):
    out = tmp_path / "run"
    res = runner.invoke(
        main,
        ["duality", "--out", str(out), "--grid-n", "64", "--slices", "256",
         "--period", str(2 * np.pi / 256.0)],
    )
    assert res.exit_code == 0, res.output
    header, rows = _read_csv(out / "duality.csv")
    assert header == ["level", "hf1", "geom", "abs_diff"]
    sidecar = json.loads((out / "duality.json").read_text())
    results = sidecar["results"]
    assert results["eta_residual"] < 1e-12
    assert results["max_spectrum_diff"] < 1e-2
    assert "within_tol" in results


def test_duality_frequency_sweep(runner, tmp_path):
    out = tmp_path / "run"
    periods = f"{2 * np.pi / 512.0},{2 * np.pi / 1024.0}"
    res = runner.invoke(
        main,
        ["duality", "--out", str(out), "--grid-n", "32", "--slices", "512",
         "--period", periods],
    )
    assert res.exit_code == 0, res.output
    header, rows = _read_csv(out / "duality_sweep.csv")
    assert header == ["omega", "truncation_estimate", "max_imag", "eta_residual"]
    assert len(rows) == 2
    trunc = [float(r[1]) for r in rows]
    assert trunc[1] < trunc[0]  # higher frequency, smaller truncation


def test_torus_command(runner, tmp_path):
    out = tmp_path / "run"
    res = runner.invoke(
        main,
        ["torus", "--out", str(out), "--grid-n", "128", "--major", "3", "--minor", "1",
         "--sector", "0,1", "--tol", "1e-4"],
    )
    assert res.exit_code == 0, res.output
    header, rows = _read_csv(out / "duality.csv")
    assert header == ["sector", "level", "floquet", "isothermal", "theta_brute",
                      "diff_floquet_iso", "diff_iso_brute"]
    sidecar = json.loads((out / "duality.json").read_text())
    assert sidecar["results"]["within_tol"] is True
    assert sidecar["results"]["v_sign"] == -1


def test_pt_sweep_command(runner, tmp_path):
    out = tmp_path / "run"
    res = runner.invoke(
        main,
        ["pt-sweep", "--out", str(out), "--asym", "0,0.2"],
    )
    assert res.exit_code == 0, res.output
    header, rows = _read_csv(out / "pt_sweep.csv")
    assert header[:3] == ["asymmetry", "max_imag", "pt_broken"]
    assert rows[0][2] == "false"
    assert rows[1][2] == "true"
    sidecar = json.loads((out / "pt_sweep.json").read_text())
    assert sidecar["results"]["empirical_breaking_threshold"] == 0.2


def test_evolve_command(runner, tmp_path):
    out = tmp_path / "run"
    res = runner.invoke(
        main,
        ["evolve", "--out", str(out), "--preset", "flat", "--grid-n", "32",
         "--slices", "128", "--periods", "3"],
    )
    assert res.exit_code == 0, res.output
    header, rows = _read_csv(out / "evolve.csv")
    assert header == ["x", "z", "psi2_final"]
    assert len(rows) == 32
    _, norm_rows = _read_csv(out / "evolve_norms.csv")
    assert len(norm_rows) == 4
    sidecar = json.loads((out / "evolve.json").read_text())
    assert abs(sidecar["results"]["final_norm"] - 1.0) < 1e-8


def test_csv_cells_are_full_precision(runner, tmp_path):
    out = tmp_path / "run"
    res = runner.invoke(main, ["design", "--out", str(out), "--grid-n", "32"])
    assert res.exit_code == 0, res.output
    _, rows = _read_csv(out / "design.csv")
    # round-trip through the printed representation must be exact
    for cell in rows[3]:
        v = float(cell)
        assert ("%.17g" % v) == cell
