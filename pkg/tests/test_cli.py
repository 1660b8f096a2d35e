import json

import pytest
from click.testing import CliRunner

from wigner_deco.cli import main


@pytest.fixture()
def runner():
    return CliRunner()


def write_config(path, doc):
    path.write_text(json.dumps(doc), encoding="utf-8")
    return str(path)


def test_scales_prints_six_decimals(runner):
    result = runner.invoke(main, ["scales"])
    assert result.exit_code == 0
    assert "tD=1.316074" in result.output
    assert "sigma0=1.000000" in result.output


def test_scales_with_config(runner, tmp_path):
    cfg = write_config(tmp_path / "c.json", {"params": {"hbar": 1.0, "mass": 4.0, "diffusion_d": 1.0}})
    result = runner.invoke(main, ["scales", "--config", cfg])
    assert result.exit_code == 0
    assert "t0=2.000000" in result.output


def test_state_writes_csv(runner, tmp_path):
    out = tmp_path / "psi.csv"
    cfg = write_config(
        tmp_path / "c.json",
        {"state": {"type": "gaussian", "sigma": 1.0}, "output": {"csv": str(out)}},
    )
    result = runner.invoke(main, ["state", "--config", cfg])
    assert result.exit_code == 0
    assert out.read_text().startswith("x,re,im\n")


def test_wigner_writes_artifacts_and_is_deterministic(runner, tmp_path):
    out_csv, out_pgm = tmp_path / "w.csv", tmp_path / "w.pgm"
    cfg = write_config(
        tmp_path / "c.json",
        {"state": {"type": "gaussian"}, "output": {"csv": str(out_csv), "pgm": str(out_pgm)}},
    )
    assert runner.invoke(main, ["wigner", "--config", cfg]).exit_code == 0
    first_csv = out_csv.read_bytes()
    first_pgm = out_pgm.read_bytes()
    assert first_pgm.startswith(b"P5\n")
    # gaussian field has no negative lobe: darkest pixel stays mid-gray
    pixels = first_pgm[first_pgm.index(b"255\n") + 4 :]
    assert min(pixels) >= 127
    assert runner.invoke(main, ["wigner", "--config", cfg]).exit_code == 0
    assert out_csv.read_bytes() == first_csv
    assert out_pgm.read_bytes() == first_pgm


def test_cat_heatmap_shows_negativity(runner, tmp_path):
    out_pgm = tmp_path / "cat.pgm"
    cfg = write_config(
        tmp_path / "c.json",
        {"state": {"type": "cat", "x0": 4.0}, "output": {"pgm": str(out_pgm)}},
    )
    assert runner.invoke(main, ["wigner", "--config", cfg]).exit_code == 0
    data = out_pgm.read_bytes()
    pixels = data[data.index(b"255\n") + 4 :]
    assert min(pixels) <= 60


def test_husimi_command(runner, tmp_path):
    cfg = write_config(tmp_path / "c.json", {"state": {"type": "cat", "x0": 4.0}})
    result = runner.invoke(main, ["husimi", "--config", cfg])
    assert result.exit_code == 0
    assert "relative_floor=" in result.output


def test_smooth_flags_override_config(runner, tmp_path):
    cfg = write_config(
        tmp_path / "c.json",
        {
            "state": {"type": "cat", "x0": 4.0},
            "covariance": {"cxx": 0.01, "cxp": 0.0, "cpp": 0.01},
        },
    )
    tight = runner.invoke(main, ["smooth", "--config", cfg])
    loose = runner.invoke(main, ["smooth", "--config", cfg, "--cxx", "0.5", "--cpp", "0.5"])
    assert tight.exit_code == 0 and loose.exit_code == 0
    floor_tight = float(tight.output.split("relative_floor=")[1])
    floor_loose = float(loose.output.split("relative_floor=")[1])
    assert floor_tight < -0.5
    assert floor_loose >= -1e-9


def test_evolve_command_with_flags(runner, tmp_path):
    cfg = write_config(tmp_path / "c.json", {"state": {"type": "cat", "x0": 4.0}, "time": 0.0})
    result = runner.invoke(main, ["evolve", "--config", cfg, "--t", str(3**0.25), "--engine", "exact"])
    assert result.exit_code == 0
    floor = float(result.output.split("relative_floor=")[1])
    assert floor >= -1e-9


def test_scan_summary_line(runner, tmp_path):
    out = tmp_path / "trace.csv"
    cfg = write_config(
        tmp_path / "c.json",
        {"state": {"type": "cat", "x0": 4.0}, "t_max": 1.4, "n_steps": 15, "output": {"csv": str(out)}},
    )
    result = runner.invoke(main, ["scan", "--config", cfg])
    assert result.exit_code == 0
    assert "first_nonneg_time=" in result.output
    summary = dict(
        part.split("=") for part in result.output.split() if "=" in part
    )
    assert float(summary["first_nonneg_time"]) <= 1.317
    assert out.read_text().startswith("t,min_w,relative_floor,det_cw\n")


def test_scan_flag_overrides(runner, tmp_path):
    cfg = write_config(tmp_path / "c.json", {"state": {"type": "gaussian"}, "t_max": 1.4})
    result = runner.invoke(main, ["scan", "--config", cfg, "--tmax", "1.5", "--steps", "5"])
    assert result.exit_code == 0
    assert "first_nonneg_time=0.000000" in result.output


def test_misspelled_key_exits_one_and_names_key(runner, tmp_path):
    cfg = write_config(tmp_path / "c.json", {"state": {"type": "gaussian", "sigmma": 1.0}})
    result = runner.invoke(main, ["wigner", "--config", cfg])
    assert result.exit_code == 1
    assert "sigmma" in result.output


def test_precondition_failure_exits_one(runner, tmp_path):
    # packet at the grid edge: leakage is a validation failure
    cfg = write_config(tmp_path / "c.json", {"state": {"type": "gaussian", "x0": 15.0}})
    result = runner.invoke(main, ["wigner", "--config", cfg])
    assert result.exit_code == 1
    assert "rejected" in result.output


def test_contract_violation_exits_two(runner, tmp_path, monkeypatch):
    import wigner_deco.evolution as evolution
    from wigner_deco.errors import NeverPositiveError

    def boom(w0, t_max, n_steps):
        raise NeverPositiveError("still negative at t_max")

    monkeypatch.setattr(evolution, "decoherence_scan", boom)
    import importlib

    service_module = importlib.import_module("wigner_deco.service.app")
    monkeypatch.setattr(service_module.evolution, "decoherence_scan", boom)
    cfg = write_config(tmp_path / "c.json", {"state": {"type": "cat", "x0": 4.0}, "t_max": 1.4})
    result = runner.invoke(main, ["scan", "--config", cfg])
    assert result.exit_code == 2
    assert "contract" in result.output


def test_missing_config_file_exits_one(runner):
    result = runner.invoke(main, ["wigner", "--config", "/nonexistent/conf.json"])
    assert result.exit_code == 1
