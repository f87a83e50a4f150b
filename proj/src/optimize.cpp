#include "atomchip/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace atomchip::optimize {

Minimum golden_section(const std::function<double(double)>& f, double a, double b, double x_tol,
                       int max_iterations) {
  if (!(a < b)) throw ValidationError("bracket", "lower end must be below upper end");
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  Minimum m;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  m.evaluations = 2;
  for (int i = 0; i < max_iterations && (b - a) > x_tol; ++i) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
    ++m.evaluations;
  }
  if (fc <= fd) {
    m.x = c;
    m.fx = fc;
  } else {
    m.x = d;
    m.fx = fd;
  }
  return m;
}

namespace {

std::pair<double, double> default_range(Frequency blockade, double lifetime,
                                        const gates::SimulationOptions& sim) {
  const double b = blockade.angular();
  const bool finite_b = std::isfinite(b);
  const bool finite_tau = std::isfinite(lifetime);
  double lo = 0.0, hi = 0.0;
  if (finite_b && finite_tau) {
    const double rabi = std::cbrt(b * b / lifetime);
    const double t = 4.0 * std::numbers::pi / rabi;
    lo = t / 100.0;
    hi = t * 100.0;
  } else if (finite_b) {
    lo = 4.0 * std::numbers::pi / b;
    hi = lo * 1e4;
  } else {
    lo = lifetime * 1e-6;
    hi = lifetime * 1e-1;
  }
  if (finite_b) {
    // Keep the longest candidate well inside the integrator's step limit.
    const double cap = std::numbers::pi * static_cast<double>(sim.max_steps) / (b * sim.steps_per_period);
    if (hi > cap) {
      hi = cap;
      lo = std::min(lo, hi / 1e4);
    }
  }
  return {lo, hi};
}

}  // namespace

PulseOptimum optimize_cz_pulse(Frequency blockade, double lifetime, const PulseSearch& search) {
  if (!(blockade.angular() > 0.0)) throw ValidationError("blockade", "must be positive");
  if (!(lifetime > 0.0)) throw ValidationError("lifetime", "must be positive");
  if (std::isinf(blockade.angular()) && std::isinf(lifetime)) {
    throw ValidationError("blockade", "needs a finite blockade or a finite lifetime");
  }
  if (search.grid_points < 5) throw ValidationError("grid_points", "must be at least 5");

  PulseOptimum out;
  auto [lo, hi] = default_range(blockade, lifetime, search.simulation);
  if (search.min_duration > 0.0) lo = search.min_duration;
  if (search.max_duration > 0.0) hi = search.max_duration;
  if (!(lo < hi)) throw ValidationError("duration range", "min must be below max");
  out.search_min = lo;
  out.search_max = hi;

  auto error_at_log = [&](double log_t) {
    ++out.evaluations;
    const auto rabi = gates::cz_rabi_for_duration(std::exp(log_t));
    return gates::simulate_cz(rabi, blockade, lifetime, search.simulation).gate_error;
  };

  const int n = search.grid_points;
  const double a = std::log(lo), b = std::log(hi);
  std::vector<double> xs(n), fs(n);
  for (int i = 0; i < n; ++i) {
    xs[i] = a + (b - a) * i / (n - 1);
    fs[i] = error_at_log(xs[i]);
  }
  const auto best = static_cast<int>(std::min_element(fs.begin(), fs.end()) - fs.begin());

  int local_minima = 0;
  for (int i = 0; i < n; ++i) {
    const bool left = i == 0 || fs[i] < fs[i - 1];
    const bool right = i == n - 1 || fs[i] <= fs[i + 1];
    if (left && right) ++local_minima;
  }
  if (local_minima > 1) {
    out.grid_fallback = true;
    out.notes.push_back("non-unimodal error landscape (" + std::to_string(local_minima) +
                        " local minima on the grid); fell back to grid search with local refinement");
  }

  double x_best = xs[best];
  double f_best = fs[best];
  if (best == 0 || best == n - 1) {
    out.at_boundary = true;
    out.notes.push_back(best == 0 ? "optimum at the short-duration end of the search range"
                                  : "optimum at the long-duration end of the search range");
  } else {
    const auto m = golden_section(error_at_log, xs[best - 1], xs[best + 1], search.log_tolerance);
    if (m.fx < f_best) {
      x_best = m.x;
      f_best = m.fx;
    }
  }

  out.duration = std::exp(x_best);
  out.report = gates::simulate_cz(gates::cz_rabi_for_duration(out.duration), blockade, lifetime,
                                  search.simulation);
  out.formula_error = std::isfinite(blockade.angular()) && std::isfinite(lifetime)
                          ? gates::minimum_gate_error(blockade, lifetime)
                          : 0.0;
  return out;
}

double fit_loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw ValidationError("fit", "needs at least two paired points");
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0 && y[i] > 0.0)) throw ValidationError("fit", "log-log fit needs positive values");
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw ValidationError("fit", "x values are all equal");
  return (n * sxy - sx * sy) / denom;
}

ScalingStudy cz_scaling_study(double lifetime, double b_tau_min, double b_tau_max, int points,
                              const PulseSearch& search) {
  if (!(lifetime > 0.0 && std::isfinite(lifetime)))
    throw ValidationError("lifetime", "must be positive and finite");
  if (!(b_tau_min > 0.0 && b_tau_min < b_tau_max)) throw ValidationError("b_tau", "bad range");
  if (points < 2) throw ValidationError("points", "must be at least 2");
  ScalingStudy s;
  for (int i = 0; i < points; ++i) {
    const double bt = b_tau_min * std::pow(b_tau_max / b_tau_min, static_cast<double>(i) / (points - 1));
    const auto opt = optimize_cz_pulse(Frequency::from_angular(bt / lifetime), lifetime, search);
    s.b_tau.push_back(bt);
    s.optimal_error.push_back(opt.report.gate_error);
  }
  s.slope = fit_loglog_slope(s.b_tau, s.optimal_error);
  return s;
}

}  // namespace atomchip::optimize
