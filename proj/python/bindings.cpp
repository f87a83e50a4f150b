#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>

#include "atomchip/detection.hpp"
#include "atomchip/gates.hpp"
#include "atomchip/optimize.hpp"
#include "atomchip/report.hpp"
#include "atomchip/rydberg.hpp"
#include "atomchip/scenario.hpp"
#include "atomchip/sweep.hpp"
#include "atomchip/traps.hpp"

namespace py = pybind11;
using namespace atomchip;

namespace {

scenario::ScenarioConfig parse_config(const std::optional<std::string>& text) {
  return text ? scenario::ScenarioConfig::from_json(nlohmann::json::parse(*text))
              : scenario::default_config();
}

py::dict gate_dict(const gates::GateFidelityReport& g) {
  py::dict d;
  d["gate_error"] = g.gate_error;
  d["rydberg_decay"] = g.breakdown.rydberg_decay;
  d["leftover_rydberg_population"] = g.breakdown.leftover_rydberg_population;
  d["blockade_leakage"] = g.breakdown.blockade_leakage;
  d["gate_duration"] = g.gate_duration;
  d["local_phases"] = py::make_tuple(g.local_phases[0], g.local_phases[1]);
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Design budgets and gate simulations for a waveguide-chip atom processor";

  py::register_exception<gates::SimulationError>(m, "SimulationError", PyExc_RuntimeError);
  py::register_exception<report::ReportError>(m, "ReportError", PyExc_RuntimeError);

  m.def("default_config_json", [] { return std::string(scenario::default_config_text()); },
        "The bundled default scenario config as JSON text.");

  m.def("normalize_config", [](const std::string& text) {
    return scenario::ScenarioConfig::from_json(nlohmann::json::parse(text)).to_json().dump();
  }, py::arg("config_json"), "Validate a config and return it in SI units.");

  m.def("claim_ids", &report::claim_ids);

  m.def("report_json", [](std::optional<std::string> config_json, std::vector<std::string> claims) {
    const auto cfg = parse_config(config_json);
    py::gil_scoped_release release;
    return report::to_json(report::assemble_report(cfg, {std::move(claims)}));
  }, py::arg("config_json") = py::none(), py::arg("claims") = std::vector<std::string>{});

  m.def("sweep_csv", [](std::optional<std::string> config_json, std::string parameter, double lo, double hi,
                        int points, std::string scale, std::string objective, int jobs) {
    const auto doc = config_json ? nlohmann::json::parse(*config_json) : scenario::default_config_json();
    sweep::SweepSpec spec{std::move(parameter), lo, hi, points, sweep::scale_from_string(scale), std::move(objective)};
    py::gil_scoped_release release;
    return sweep::to_csv(sweep::run_sweep(doc, spec, jobs));
  }, py::arg("config_json"), py::arg("parameter"), py::arg("min"), py::arg("max"), py::arg("points"),
     py::arg("scale") = "linear", py::arg("objective"), py::arg("jobs") = 1);

  m.def("thermal_cloud", [](double axial_hz, double radial_hz, double atoms, double temperature) {
    const auto c = traps::thermal_cloud({Frequency::from_hz(axial_hz), Frequency::from_hz(radial_hz)}, atoms,
                                        temperature, default_species());
    py::dict d;
    d["sigma_axial"] = c.sigma_axial;
    d["sigma_radial"] = c.sigma_radial;
    d["length_1e2"] = c.length_1e2();
    d["peak_linear_density"] = c.peak_linear_density;
    return d;
  }, py::arg("axial_hz"), py::arg("radial_hz"), py::arg("atoms"), py::arg("temperature"));

  m.def("dipole_trap", [](double power_each, double wavelength, double mode_field_radius, double facet_distance,
                          double contrast, const std::string& model) {
    traps::DipoleTrapSpec s{power_each, wavelength, mode_field_radius, facet_distance, contrast,
                            traps::polarizability_model_from_string(model)};
    const auto r = traps::dipole_trap(s, default_species());
    py::dict d;
    d["depth_kelvin"] = r.depth_kelvin();
    d["axial_hz"] = r.axial.hz();
    d["radial_hz"] = r.radial.hz();
    d["photon_scattering_rate"] = r.photon_scattering_rate;
    return d;
  }, py::arg("power_each"), py::arg("wavelength"), py::arg("mode_field_radius"), py::arg("facet_distance"),
     py::arg("contrast") = 0.0, py::arg("model") = "d1_d2_full");

  m.def("atom_number_uncertainty", [](double beam_area, double cross_section, double n_scattered, double efficiency) {
    const auto b = detection::atom_number_uncertainty({beam_area, cross_section, n_scattered, efficiency});
    py::dict d;
    d["sigma_n_atoms"] = b.sigma_n_atoms;
    d["snr_single_atom"] = b.snr_single_atom;
    d["incident_photons"] = b.incident_photons;
    return d;
  }, py::arg("beam_area"), py::arg("cross_section"), py::arg("n_scattered_per_atom"),
     py::arg("detection_efficiency") = 1.0);

  m.def("blockade_shift_hz", [](int n, double distance, int anchor_n, double anchor_shift_hz,
                                double anchor_distance, double anchor_lifetime) {
    const auto model = rydberg::RydbergScalingModel::calibrated(anchor_n, Frequency::from_hz(anchor_shift_hz),
                                                                anchor_distance, anchor_lifetime);
    return rydberg::blockade_shift(rydberg::rydberg_level(model, n), distance).hz();
  }, py::arg("n"), py::arg("distance"), py::arg("anchor_n") = 40, py::arg("anchor_shift_hz") = 90e6,
     py::arg("anchor_distance") = 2e-6, py::arg("anchor_lifetime") = 100e-6);

  m.def("minimum_gate_error", [](double blockade_hz, double lifetime) {
    return gates::minimum_gate_error(Frequency::from_hz(blockade_hz), lifetime);
  }, py::arg("blockade_hz"), py::arg("lifetime"));

  m.def("simulate_cz", [](double duration, double blockade_hz, double lifetime, double steps_per_period) {
    gates::SimulationOptions o;
    o.steps_per_period = steps_per_period;
    const Frequency b = std::isinf(blockade_hz) ? gates::infinite_blockade() : Frequency::from_hz(blockade_hz);
    py::gil_scoped_release release;
    auto g = gates::simulate_cz(gates::cz_rabi_for_duration(duration), b, lifetime, o);
    py::gil_scoped_acquire acquire;
    return gate_dict(g);
  }, py::arg("duration"), py::arg("blockade_hz"), py::arg("lifetime"), py::arg("steps_per_period") = 1000.0);

  m.def("optimize_cz_pulse", [](double blockade_hz, double lifetime) {
    optimize::PulseOptimum o;
    {
      py::gil_scoped_release release;
      o = optimize::optimize_cz_pulse(Frequency::from_hz(blockade_hz), lifetime);
    }
    py::dict d = gate_dict(o.report);
    d["duration"] = o.duration;
    d["formula_error"] = o.formula_error;
    d["grid_fallback"] = o.grid_fallback;
    d["at_boundary"] = o.at_boundary;
    d["notes"] = o.notes;
    return d;
  }, py::arg("blockade_hz"), py::arg("lifetime"));
}
