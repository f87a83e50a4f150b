#include "atomchip/sweep.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "atomchip/optimize.hpp"
#include "atomchip/report.hpp"
#include "atomchip/scenario.hpp"

namespace atomchip::sweep {

std::string_view to_string(Scale s) { return s == Scale::log ? "log" : "linear"; }

Scale scale_from_string(std::string_view s) {
  if (s == "linear") return Scale::linear;
  if (s == "log") return Scale::log;
  throw ValidationError("scale", "expected 'linear' or 'log', got '" + std::string(s) + "'");
}

void SweepSpec::validate() const {
  if (parameter.empty()) throw ValidationError("parameter", "missing parameter path");
  if (objective.empty()) throw ValidationError("objective", "missing objective claim id");
  if (points < 2) throw ValidationError("points", "must be at least 2");
  if (!(std::isfinite(min) && std::isfinite(max) && min < max))
    throw ValidationError("range", "min must be below max");
  if (scale == Scale::log && !(min > 0.0))
    throw ValidationError("range", "log sweeps need a positive minimum");
}

std::vector<double> SweepSpec::values() const {
  validate();
  std::vector<double> v(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    const double t = static_cast<double>(i) / (points - 1);
    v[i] = scale == Scale::log ? min * std::pow(max / min, t) : min + (max - min) * t;
  }
  v.back() = max;
  return v;
}

SweepResult run_sweep(const nlohmann::json& base_config, const SweepSpec& spec, int jobs) {
  spec.validate();
  if (jobs < 1) throw ValidationError("jobs", "must be at least 1");
  const auto ids = report::claim_ids();
  if (std::find(ids.begin(), ids.end(), spec.objective) == ids.end())
    throw ValidationError("objective", "unknown claim id '" + spec.objective + "'");

  SweepResult res;
  res.spec = spec;
  res.parameter_unit = scenario::parameter_unit(base_config, spec.parameter);
  {
    // Fails early, naming the path, when it does not resolve.
    auto probe = base_config;
    scenario::set_parameter(probe, spec.parameter, spec.min);
  }
  const auto xs = spec.values();
  res.points.resize(xs.size());

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::string objective_unit;

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= xs.size()) return;
      try {
        auto doc = base_config;
        scenario::set_parameter(doc, spec.parameter, xs[i]);
        const auto cfg = scenario::ScenarioConfig::from_json(doc);
        const auto rep = report::assemble_report(cfg, {{spec.objective}});
        const auto& row = rep.rows.at(0);
        res.points[i] = {xs[i], row.value.value_or(std::numeric_limits<double>::quiet_NaN()),
                         std::string(report::to_string(row.status))};
        if (i == 0) objective_unit = row.unit;
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(xs.size());
        return;
      }
    }
  };

  const int n_threads = std::min<int>(jobs, static_cast<int>(xs.size()));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  res.objective_unit = objective_unit;

  std::vector<double> px, py;
  bool positive = true;
  for (const auto& p : res.points) {
    positive = positive && p.parameter > 0.0 && p.objective > 0.0;
    px.push_back(p.parameter);
    py.push_back(std::abs(p.objective));
  }
  res.loglog_slope = positive ? optimize::fit_loglog_slope(px, py) : std::numeric_limits<double>::quiet_NaN();
  return res;
}

std::string to_csv(const SweepResult& r) {
  std::ostringstream os;
  os << "# parameter=" << r.spec.parameter << " unit=" << r.parameter_unit
     << " objective=" << r.spec.objective << " unit=" << r.objective_unit
     << " loglog_slope=" << report::format_number(r.loglog_slope) << "\n";
  os << "parameter,objective,status\n";
  for (const auto& p : r.points) {
    os << report::format_number(p.parameter) << ',' << report::format_number(p.objective) << ','
       << p.status << '\n';
  }
  return os.str();
}

std::string gnuplot_script(const SweepResult& r, const std::string& csv_name) {
  std::ostringstream os;
  os << "set datafile separator ','\n"
     << "set key off\n"
     << "set xlabel '" << r.spec.parameter << " [" << r.parameter_unit << "]'\n"
     << "set ylabel '" << r.spec.objective << " [" << r.objective_unit << "]'\n";
  if (r.spec.scale == Scale::log) os << "set logscale xy\n";
  os << "plot '" << csv_name << "' every ::2 using 1:2 with linespoints\n";
  return os.str();
}

}  // namespace atomchip::sweep
