#pragma once

// One-dimensional minimisation and CZ pulse-duration search.

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "atomchip/gates.hpp"

namespace atomchip::optimize {

struct Minimum {
  double x = 0.0;
  double fx = 0.0;
  int evaluations = 0;
};

/// Golden-section search for a minimum of f on [a, b], stopping when the
/// bracket is narrower than x_tol.
Minimum golden_section(const std::function<double(double)>& f, double a, double b, double x_tol,
                       int max_iterations = 200);

struct PulseSearch {
  // Duration range; zero picks one around (B^2 / tau)^(-1/3).
  double min_duration = 0.0;
  double max_duration = 0.0;
  int grid_points = 41;  // log-spaced bracketing grid
  double log_tolerance = 1e-3;  // natural-log width of the final bracket
  gates::SimulationOptions simulation;
};

struct PulseOptimum {
  double duration = 0.0;
  gates::GateFidelityReport report;
  double formula_error = 0.0;  // 3 (B tau)^(-2/3)
  double search_min = 0.0;
  double search_max = 0.0;
  bool grid_fallback = false;  // the grid had more than one local minimum
  bool at_boundary = false;
  int evaluations = 0;
  std::vector<std::string> notes;
};

/// Minimises the simulated pi-2pi-pi gate error over total duration. A coarse
/// log grid brackets the minimum and golden-section search refines it. When
/// the grid shows several local minima the best grid point is refined
/// locally instead and the fallback is noted.
PulseOptimum optimize_cz_pulse(Frequency blockade, double lifetime, const PulseSearch& search = {});

/// Least-squares slope of log(y) against log(x).
double fit_loglog_slope(std::span<const double> x, std::span<const double> y);

struct ScalingStudy {
  std::vector<double> b_tau;  // angular blockade times lifetime
  std::vector<double> optimal_error;
  double slope = 0.0;
};

/// Optimised CZ error at `points` log-spaced blockade values spanning
/// [b_tau_min, b_tau_max] at fixed lifetime.
ScalingStudy cz_scaling_study(double lifetime, double b_tau_min, double b_tau_max, int points,
                              const PulseSearch& search = {});

}  // namespace atomchip::optimize
