import json
import math
import os
import subprocess
from pathlib import Path

import pytest

CLI = os.environ.get("ATOMCHIP_CLI")
SOURCE = Path(os.environ.get("ATOMCHIP_SOURCE_DIR", Path(__file__).resolve().parents[2]))

pytestmark = pytest.mark.skipif(not CLI, reason="ATOMCHIP_CLI not set")


def run(*args, cwd=None):
    return subprocess.run([CLI, *args], capture_output=True, text=True, cwd=cwd)


def write_config(tmp_path, edit):
    cfg = json.loads((SOURCE / "configs" / "default.json").read_text())
    edit(cfg)
    path = tmp_path / "scenario.json"
    path.write_text(json.dumps(cfg))
    return path


def test_report_writes_all_formats(tmp_path):
    out = tmp_path / "out"
    r = run("report", "--config", str(SOURCE / "configs" / "default.json"), "--out", str(out))
    assert r.returncode == 0, r.stderr
    for ext in ("txt", "json", "csv"):
        assert (out / f"report.{ext}").stat().st_size > 0
    assert json.loads((out / "report.json").read_text())["summary"]["fail"] == 0


def test_report_is_byte_identical(tmp_path):
    a = run("report", "--format", "json", "--out", str(tmp_path / "a"))
    b = run("report", "--format", "json", "--out", str(tmp_path / "b"))
    assert a.returncode == b.returncode == 0
    assert a.stdout == b.stdout
    for ext in ("txt", "json", "csv"):
        assert (tmp_path / "a" / f"report.{ext}").read_bytes() == (tmp_path / "b" / f"report.{ext}").read_bytes()


def test_missing_config_is_a_usage_error(tmp_path):
    missing = tmp_path / "nowhere" / "cfg.json"
    r = run("report", "--config", str(missing))
    assert r.returncode == 2
    assert str(missing) in r.stderr


def test_bad_flag_is_a_usage_error():
    assert run("report", "--format", "xml").returncode == 2
    assert run("frobnicate").returncode == 2
    assert run().returncode == 2


def test_claim_failure_exits_one(tmp_path):
    def edit(cfg):
        cfg["probe"]["n_scattered_per_atom"]["value"] = 1000

    r = run("report", "--config", str(write_config(tmp_path, edit)), "--out", str(tmp_path / "o"))
    assert r.returncode == 1
    assert "FAIL" in r.stdout.upper()


def test_mirror_override_gives_snr_three(tmp_path):
    def edit(cfg):
        cfg["probe"]["mirror_reflectivity"]["value"] = 0.9

    r = run("report", "--config", str(write_config(tmp_path, edit)), "--format", "json",
            "--claim", "detection.snr_cavity", "--out", str(tmp_path / "o"))
    assert r.returncode == 0, r.stderr
    (row,) = json.loads(r.stdout)["rows"]
    assert row["value"] == pytest.approx(3.0, rel=0.1)


def test_validate_config(tmp_path):
    assert run("validate-config").returncode == 0

    def edit(cfg):
        cfg["rydberg"]["anchor_n"] = 40.5

    r = run("validate-config", "--config", str(write_config(tmp_path, edit)))
    assert r.returncode == 2
    assert "rydberg.anchor_n" in r.stderr


def test_two_point_sweep(tmp_path):
    r = run("sweep", "--param", "magnetic_trap.temperature", "--min", "1", "--max", "4", "--points", "2",
            "--objective", "cloud.sigma_radial", "--format", "csv", "--out", str(tmp_path))
    assert r.returncode == 0, r.stderr
    rows = [line for line in r.stdout.splitlines() if line and not line.startswith("#")][1:]
    assert len(rows) == 2
    assert (tmp_path / "sweep.gp").exists()


def test_power_sweep_square_root_law():
    r = run("sweep", "--param", "dipole_trap.power_each", "--min", "20", "--max", "320", "--points", "5",
            "--scale", "log", "--objective", "trap.radial_freq_contrast0", "--format", "json", "--jobs", "3")
    assert r.returncode == 0, r.stderr
    assert json.loads(r.stdout)["loglog_slope"] == pytest.approx(0.5, abs=1e-6)


def test_blockade_sweep_follows_error_law():
    r = run("sweep", "--param", "cz.blockade", "--min", "1", "--max", "100", "--points", "5", "--scale", "log",
            "--objective", "gates.cz_error_optimized", "--format", "json", "--jobs", "4")
    assert r.returncode == 0, r.stderr
    assert abs(json.loads(r.stdout)["loglog_slope"] + 2 / 3) <= 0.1


def test_simulate_and_optimize():
    r = run("simulate-gate", "--gate", "cz", "--format", "json")
    assert r.returncode == 0, r.stderr
    assert 1e-4 <= json.loads(r.stdout)["gate_error"] <= 1e-2
    r = run("simulate-gate", "--gate", "hadamard", "--format", "json")
    assert r.returncode == 0, r.stderr
    a = run("optimize-pulse", "--format", "json")
    b = run("optimize-pulse", "--format", "json")
    assert a.returncode == 0, a.stderr
    assert a.stdout == b.stdout
    opt = json.loads(a.stdout)
    assert math.isfinite(opt["optimal_duration_s"])
    assert opt["simulated_error"] <= opt["formula_error"] * 10


def test_seed_flag_changes_only_monte_carlo_rows():
    a = json.loads(run("report", "--format", "json", "--seed", "1", "--claim", "detection.shot_noise_mc",
                       "--claim", "trap.depth").stdout)
    b = json.loads(run("report", "--format", "json", "--seed", "2", "--claim", "detection.shot_noise_mc",
                       "--claim", "trap.depth").stdout)
    assert a["rows"][1] == b["rows"][1]
    assert a["rows"][0]["value"] != b["rows"][0]["value"]


def test_species_override_from_environment(tmp_path):
    rec = json.loads((SOURCE / "data" / "species" / "rb87.json").read_text())
    rec["mass"]["value"] *= 4
    (tmp_path / "rb87.json").write_text(json.dumps(rec))
    env = dict(os.environ, ATOMCHIP_DATA=str(tmp_path))
    base = json.loads(run("report", "--format", "json", "--claim", "cloud.sigma_radial").stdout)
    r = subprocess.run([CLI, "report", "--format", "json", "--claim", "cloud.sigma_radial"],
                       capture_output=True, text=True, env=env)
    heavy = json.loads(r.stdout)
    assert heavy["rows"][0]["value"] == pytest.approx(base["rows"][0]["value"] / 2, rel=1e-8)
