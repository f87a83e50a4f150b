// atomchip: design report, sweeps and gate simulations from a scenario config.
//
// Exit status: 0 success, 1 a report claim failed, 2 usage or config error.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "atomchip/gates.hpp"
#include "atomchip/optimize.hpp"
#include "atomchip/report.hpp"
#include "atomchip/scenario.hpp"
#include "atomchip/sweep.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using atomchip::report::format_number;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitClaimFailed = 1;
constexpr int kExitUsage = 2;

struct Common {
  std::string config;
  std::string format = "txt";
  std::optional<std::uint64_t> seed;
  int jobs = 1;
};

struct Loaded {
  nlohmann::json doc;
  atomchip::scenario::ScenarioConfig cfg;
};

Loaded load(const Common& c) {
  Loaded l;
  fs::path base;
  if (c.config.empty()) {
    l.doc = atomchip::scenario::default_config_json();
  } else {
    l.doc = atomchip::scenario::read_json_file(c.config, "config");
    base = fs::path(c.config).parent_path();
  }
  if (c.seed && l.doc.contains("simulation") && l.doc["simulation"].is_object()) {
    l.doc["simulation"]["seed"] = *c.seed;
  }
  l.cfg = atomchip::scenario::ScenarioConfig::from_json(l.doc);
  l.cfg.base_dir = base;
  return l;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw atomchip::ValidationError("out", "cannot write '" + path.string() + "'");
  out << text;
}

void add_common(CLI::App* sub, Common& c, bool with_jobs) {
  sub->add_option("--config", c.config, "Scenario config (JSON); bundled defaults when omitted");
  sub->add_option("--format", c.format, "Output format on stdout")
      ->check(CLI::IsMember({"txt", "json", "csv"}));
  sub->add_option("--seed", c.seed, "Seed for Monte-Carlo paths (overrides the config)");
  if (with_jobs) sub->add_option("--jobs", c.jobs, "Parallel workers")->check(CLI::PositiveNumber);
}

std::string print_json(const ordered_json& j) { return j.dump(2) + "\n"; }

ordered_json gate_json(const atomchip::gates::GateFidelityReport& g) {
  ordered_json j;
  j["protocol"] = g.protocol;
  j["gate_error"] = g.gate_error;
  j["rydberg_decay"] = g.breakdown.rydberg_decay;
  j["leftover_rydberg_population"] = g.breakdown.leftover_rydberg_population;
  j["blockade_leakage"] = g.breakdown.blockade_leakage;
  j["gate_duration_s"] = g.gate_duration;
  j["rabi_hz"] = g.rabi.hz();
  j["blockade_hz"] = std::isfinite(g.blockade.hz()) ? ordered_json(g.blockade.hz()) : ordered_json("inf");
  j["rydberg_lifetime_s"] = g.rydberg_lifetime;
  j["local_phases_rad"] = {g.local_phases[0], g.local_phases[1]};
  return j;
}

std::string render(const ordered_json& j, const std::string& format) {
  if (format == "json") return print_json(j);
  std::ostringstream os;
  const bool csv = format == "csv";
  if (csv) os << "key,value\n";
  for (const auto& [k, v] : j.items()) {
    std::string value;
    if (v.is_number()) {
      value = format_number(v.get<double>());
    } else if (v.is_string()) {
      value = v.get<std::string>();
    } else if (v.is_array()) {
      for (const auto& e : v) {
        if (!value.empty()) value += csv ? ";" : " ";
        value += e.is_number() ? format_number(e.get<double>()) : e.dump();
      }
    } else {
      value = v.dump();
    }
    if (csv) {
      os << k << ',' << (value.find(',') != std::string::npos ? "\"" + value + "\"" : value) << '\n';
    } else {
      os << k << ": " << value << '\n';
    }
  }
  return os.str();
}

int cmd_report(const Common& c, const std::string& out_dir, const std::vector<std::string>& claims) {
  const auto l = load(c);
  const auto rep = atomchip::report::assemble_report(l.cfg, {claims});
  const std::string txt = atomchip::report::to_text(rep);
  const std::string json = atomchip::report::to_json(rep);
  const std::string csv = atomchip::report::to_csv(rep);
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    write_file(fs::path(out_dir) / "report.txt", txt);
    write_file(fs::path(out_dir) / "report.json", json);
    write_file(fs::path(out_dir) / "report.csv", csv);
  }
  std::cout << (c.format == "json" ? json : c.format == "csv" ? csv : txt);
  return rep.passed() ? kExitOk : kExitClaimFailed;
}

int cmd_sweep(const Common& c, const atomchip::sweep::SweepSpec& spec, const std::string& out_dir) {
  auto l = load(c);
  const auto res = atomchip::sweep::run_sweep(l.doc, spec, c.jobs);
  const std::string csv = atomchip::sweep::to_csv(res);
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    write_file(fs::path(out_dir) / "sweep.csv", csv);
    write_file(fs::path(out_dir) / "sweep.gp", atomchip::sweep::gnuplot_script(res, "sweep.csv"));
  }
  if (c.format == "csv") {
    std::cout << csv;
  } else {
    ordered_json j;
    j["parameter"] = spec.parameter;
    j["parameter_unit"] = res.parameter_unit;
    j["objective"] = spec.objective;
    j["objective_unit"] = res.objective_unit;
    j["scale"] = atomchip::sweep::to_string(spec.scale);
    j["loglog_slope"] = std::isfinite(res.loglog_slope) ? ordered_json(res.loglog_slope) : ordered_json(nullptr);
    auto pts = ordered_json::array();
    for (const auto& p : res.points) pts.push_back({{"parameter", p.parameter}, {"objective", p.objective}, {"status", p.status}});
    j["points"] = pts;
    if (c.format == "json") {
      std::cout << print_json(j);
    } else {
      std::cout << "sweep " << spec.parameter << " [" << res.parameter_unit << "] -> " << spec.objective
                << " [" << res.objective_unit << "]\n";
      for (const auto& p : res.points)
        std::cout << "  " << format_number(p.parameter) << "  " << format_number(p.objective) << "  " << p.status << "\n";
      std::cout << "log-log slope: " << format_number(res.loglog_slope) << "\n";
    }
  }
  return kExitOk;
}

atomchip::Frequency cz_blockade(const atomchip::scenario::ScenarioConfig& cfg) {
  if (cfg.cz.blockade) return *cfg.cz.blockade;
  const auto model = atomchip::rydberg::RydbergScalingModel::calibrated(
      cfg.rydberg.anchor_n, cfg.rydberg.anchor_shift, cfg.rydberg.anchor_distance, cfg.rydberg.anchor_lifetime);
  return atomchip::rydberg::blockade_shift(atomchip::rydberg::rydberg_level(model, cfg.cz.n), cfg.cz.distance,
                                           cfg.rydberg.min_distance);
}

double cz_lifetime(const atomchip::scenario::ScenarioConfig& cfg) {
  auto model = atomchip::rydberg::RydbergScalingModel::calibrated(
      cfg.rydberg.anchor_n, cfg.rydberg.anchor_shift, cfg.rydberg.anchor_distance, cfg.rydberg.anchor_lifetime);
  model.c6_exponent = cfg.rydberg.c6_exponent;
  model.lifetime_exponent = cfg.rydberg.lifetime_exponent;
  return atomchip::rydberg::rydberg_level(model, cfg.cz.n).lifetime;
}

int cmd_simulate_gate(const Common& c, const std::string& gate, std::optional<double> duration) {
  const auto l = load(c);
  atomchip::gates::SimulationOptions opts;
  opts.steps_per_period = l.cfg.simulation.steps_per_period;
  ordered_json j;
  if (gate == "cz") {
    const double t = duration.value_or(l.cfg.cz.total_duration);
    if (!(t > 0.0)) throw atomchip::ValidationError("duration", "must be positive");
    j = gate_json(atomchip::gates::simulate_cz(atomchip::gates::cz_rabi_for_duration(t), cz_blockade(l.cfg),
                                               cz_lifetime(l.cfg), opts));
  } else {
    const auto& h = l.cfg.hadamard;
    const auto model = atomchip::rydberg::RydbergScalingModel::calibrated(
        l.cfg.rydberg.anchor_n, l.cfg.rydberg.anchor_shift, l.cfg.rydberg.anchor_distance,
        l.cfg.rydberg.anchor_lifetime);
    const auto level = atomchip::rydberg::rydberg_level(model, h.n);
    const auto b = atomchip::rydberg::blockade_shift(level, h.extent, l.cfg.rydberg.min_distance);
    const auto sim = atomchip::gates::simulate_hadamard({h.atoms, h.extent, l.cfg.chip.pitch}, h.single_rabi, b,
                                                        level, opts);
    j["gate"] = "hadamard";
    j["nominal_duration_s"] = sim.nominal_duration;
    j["completion_time_s"] = sim.completion_time;
    j["final_double_excitation"] = sim.final_double_excitation;
    j["peak_double_excitation"] = sim.peak_double_excitation;
    j["perturbative_estimate"] = sim.perturbative_estimate;
    j["final_norm"] = sim.final_norm;
  }
  std::cout << render(j, c.format);
  return kExitOk;
}

int cmd_optimize(const Common& c, double min_t, double max_t) {
  const auto l = load(c);
  atomchip::optimize::PulseSearch s;
  s.simulation.steps_per_period = l.cfg.simulation.steps_per_period;
  s.min_duration = min_t;
  s.max_duration = max_t;
  const auto o = atomchip::optimize::optimize_cz_pulse(cz_blockade(l.cfg), cz_lifetime(l.cfg), s);
  ordered_json j;
  j["optimal_duration_s"] = o.duration;
  j["simulated_error"] = o.report.gate_error;
  j["formula_error"] = o.formula_error;
  j["rydberg_decay"] = o.report.breakdown.rydberg_decay;
  j["leftover_rydberg_population"] = o.report.breakdown.leftover_rydberg_population;
  j["blockade_leakage"] = o.report.breakdown.blockade_leakage;
  j["search_min_s"] = o.search_min;
  j["search_max_s"] = o.search_max;
  j["evaluations"] = o.evaluations;
  j["grid_fallback"] = o.grid_fallback;
  j["at_boundary"] = o.at_boundary;
  auto notes = ordered_json::array();
  for (const auto& n : o.notes) notes.push_back(n);
  j["notes"] = notes;
  std::cout << render(j, c.format);
  return kExitOk;
}

int cmd_validate(const Common& c) {
  const auto l = load(c);
  if (c.format == "json") {
    std::cout << l.cfg.to_json().dump(2) << "\n";
  } else {
    std::cout << "config OK (" << (c.config.empty() ? "bundled defaults" : c.config) << ")\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Design budgets and gate simulations for a waveguide-chip atom processor"};
  app.require_subcommand(1);

  Common common;

  auto* report = app.add_subcommand("report", "Write the claim-by-claim design report");
  std::string report_out = "out";
  std::vector<std::string> claims;
  add_common(report, common, false);
  report->add_option("--out", report_out, "Directory for report.{txt,json,csv}");
  report->add_option("--claim", claims, "Only compute these claim ids");

  auto* sweep = app.add_subcommand("sweep", "Sweep one config parameter and record a claim value");
  atomchip::sweep::SweepSpec spec;
  std::string scale = "linear";
  std::string sweep_out;
  add_common(sweep, common, true);
  sweep->add_option("--param", spec.parameter, "Dotted config path, e.g. dipole_trap.power_each")->required();
  sweep->add_option("--min", spec.min, "Lowest value, in the config's unit")->required();
  sweep->add_option("--max", spec.max, "Highest value, in the config's unit")->required();
  sweep->add_option("--points", spec.points, "Number of points")->default_val(5);
  sweep->add_option("--scale", scale, "linear or log")->check(CLI::IsMember({"linear", "log"}));
  sweep->add_option("--objective", spec.objective, "Report claim id to record")->required();
  sweep->add_option("--out", sweep_out, "Directory for sweep.csv and sweep.gp");

  auto* sim = app.add_subcommand("simulate-gate", "Time-domain simulation of one gate");
  std::string gate = "cz";
  std::optional<double> duration;
  add_common(sim, common, false);
  sim->add_option("--gate", gate, "cz or hadamard")->check(CLI::IsMember({"cz", "hadamard"}));
  sim->add_option("--duration", duration, "Total CZ duration in seconds (config value by default)");

  auto* opt = app.add_subcommand("optimize-pulse", "Search the CZ duration that minimises the gate error");
  double min_t = 0.0, max_t = 0.0;
  add_common(opt, common, false);
  opt->add_option("--min-duration", min_t, "Shortest duration in seconds (automatic when 0)");
  opt->add_option("--max-duration", max_t, "Longest duration in seconds (automatic when 0)");

  auto* validate = app.add_subcommand("validate-config", "Check a config and print it normalised");
  add_common(validate, common, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*report) return cmd_report(common, report_out, claims);
    if (*sweep) {
      spec.scale = atomchip::sweep::scale_from_string(scale);
      return cmd_sweep(common, spec, sweep_out);
    }
    if (*sim) return cmd_simulate_gate(common, gate, duration);
    if (*opt) return cmd_optimize(common, min_t, max_t);
    if (*validate) return cmd_validate(common);
  } catch (const atomchip::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const atomchip::report::ReportError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const atomchip::gates::SimulationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
