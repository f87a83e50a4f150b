"""Design budgets and gate simulations for a waveguide-chip atom processor."""

import json

from . import _core
from ._core import (
    ReportError,
    SimulationError,
    atom_number_uncertainty,
    blockade_shift_hz,
    claim_ids,
    dipole_trap,
    minimum_gate_error,
    optimize_cz_pulse,
    simulate_cz,
    thermal_cloud,
)

__all__ = [
    "ReportError",
    "SimulationError",
    "atom_number_uncertainty",
    "blockade_shift_hz",
    "claim_ids",
    "default_config",
    "dipole_trap",
    "minimum_gate_error",
    "optimize_cz_pulse",
    "report",
    "simulate_cz",
    "sweep",
    "thermal_cloud",
    "validate_config",
]


def _dump(config):
    return None if config is None else json.dumps(config)


def default_config():
    """The bundled scenario config as a dict."""
    return json.loads(_core.default_config_json())


def validate_config(config):
    """Validate a config dict; returns it normalised to SI units."""
    return json.loads(_core.normalize_config(json.dumps(config)))


def report(config=None, claims=()):
    """Run the design pipeline; returns the report as a dict."""
    return json.loads(_core.report_json(_dump(config), list(claims)))


def sweep(parameter, min, max, points, objective, scale="linear", config=None, jobs=1):
    """Sweep one config value; returns (parameter, objective, status) rows."""
    text = _core.sweep_csv(_dump(config), parameter, min, max, points, scale, objective, jobs)
    rows = []
    for line in text.splitlines()[2:]:
        x, y, status = line.split(",")
        rows.append((float(x), float(y), status))
    return rows
