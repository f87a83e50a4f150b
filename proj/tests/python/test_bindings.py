import math

import pytest

import atomchip


def test_default_report_passes():
    r = atomchip.report()
    assert r["summary"]["fail"] == 0
    assert len(r["rows"]) == len(atomchip.claim_ids()) >= 15
    assert all(row["reference"] for row in r["rows"])


def test_report_subset_and_config_override():
    cfg = atomchip.default_config()
    cfg["probe"]["mirror_reflectivity"]["value"] = 0.9
    r = atomchip.report(cfg, claims=["detection.snr_cavity"])
    (row,) = r["rows"]
    assert row["value"] == pytest.approx(0.874 / math.sqrt(0.1), rel=0.01)


def test_bad_config_names_the_field():
    cfg = atomchip.default_config()
    cfg["chip"]["trench_widht"] = cfg["chip"]["trench_width"]
    with pytest.raises(ValueError, match="chip.trench_widht"):
        atomchip.validate_config(cfg)


def test_validate_config_is_idempotent():
    once = atomchip.validate_config(atomchip.default_config())
    assert atomchip.validate_config(once) == once
    assert once["dipole_trap"]["power_each"]["unit"] == "W"


def test_blue_trap_is_a_report_error():
    cfg = atomchip.default_config()
    cfg["dipole_trap"]["wavelength"]["value"] = 770.0
    with pytest.raises(atomchip.ReportError, match="not a trap"):
        atomchip.report(cfg)


def test_thermal_cloud():
    c = atomchip.thermal_cloud(20.0, 1e3, 1e5, 2e-6)
    assert c["length_1e2"] == pytest.approx(220e-6, rel=0.05)
    assert c["peak_linear_density"] == pytest.approx(360e6, rel=0.05)


def test_dipole_trap_scales_with_power():
    a = atomchip.dipole_trap(80e-6, 830e-9, 2.2e-6, 8e-6)
    b = atomchip.dipole_trap(320e-6, 830e-9, 2.2e-6, 8e-6)
    assert b["radial_hz"] == pytest.approx(2 * a["radial_hz"], rel=1e-12)
    assert b["depth_kelvin"] == pytest.approx(4 * a["depth_kelvin"], rel=1e-12)
    with pytest.raises(ValueError, match="not a trap"):
        atomchip.dipole_trap(80e-6, 770e-9, 2.2e-6, 8e-6)


def test_readout_identity():
    b = atomchip.atom_number_uncertainty(1e-13, 1e-13, 1.0, 1.0)
    assert b["sigma_n_atoms"] == pytest.approx(1.0)


def test_blockade_and_error_law():
    assert atomchip.blockade_shift_hz(40, 2e-6) == pytest.approx(90e6, rel=1e-12)
    assert atomchip.blockade_shift_hz(100, 10e-6) == pytest.approx(137.33e6, rel=1e-4)
    b_hz = 1e4 / (2 * math.pi)
    assert atomchip.minimum_gate_error(b_hz, 1.0) == pytest.approx(6.463e-3, rel=1e-3)


def test_cz_simulation():
    ideal = atomchip.simulate_cz(1e-6, math.inf, math.inf)
    assert ideal["gate_error"] < 1e-6
    assert ideal["rydberg_decay"] == 0.0
    real = atomchip.simulate_cz(10e-6, 50e6, 1.5625e-3)
    assert 1e-4 <= real["gate_error"] <= 1e-2


def test_optimizer_is_deterministic():
    a = atomchip.optimize_cz_pulse(50e6, 1.5625e-3)
    b = atomchip.optimize_cz_pulse(50e6, 1.5625e-3)
    assert a == b
    assert a["gate_error"] < atomchip.simulate_cz(10e-6, 50e6, 1.5625e-3)["gate_error"]


def test_sweep_rows_and_slope():
    rows = atomchip.sweep("dipole_trap.power_each", 20, 320, 3, "trap.radial_freq_contrast0", scale="log", jobs=2)
    assert [r[0] for r in rows] == pytest.approx([20, 80, 320])
    ratio = rows[-1][1] / rows[0][1]
    assert ratio == pytest.approx(4.0, rel=1e-6)
