#pragma once

// Parameter sweeps over a scenario config with any report claim as objective.

#include <string>
#include <vector>

#include <json.hpp>

namespace atomchip::sweep {

enum class Scale { linear, log };

std::string_view to_string(Scale s);
Scale scale_from_string(std::string_view s);

struct SweepSpec {
  std::string parameter;  // dotted config path, value in the config's own unit
  double min = 0.0;
  double max = 0.0;
  int points = 2;
  Scale scale = Scale::linear;
  std::string objective;  // report claim id

  void validate() const;
  std::vector<double> values() const;
};

struct SweepPoint {
  double parameter = 0.0;
  double objective = 0.0;
  std::string status;
};

struct SweepResult {
  SweepSpec spec;
  std::string parameter_unit;
  std::string objective_unit;
  std::vector<SweepPoint> points;  // in parameter order
  double loglog_slope = 0.0;       // NaN when any value is non-positive
};

/// Evaluates the objective at every point. Points run on up to `jobs`
/// threads; each builds its own config and pipeline, so results do not
/// depend on scheduling.
SweepResult run_sweep(const nlohmann::json& base_config, const SweepSpec& spec, int jobs = 1);

std::string to_csv(const SweepResult& r);

/// gnuplot script plotting `csv_name` on log-log axes for log sweeps.
std::string gnuplot_script(const SweepResult& r, const std::string& csv_name);

}  // namespace atomchip::sweep
