#include "atomchip/rydberg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace atomchip::rydberg {

RydbergScalingModel RydbergScalingModel::calibrated(int n_anchor, Frequency shift,
                                                    double distance, double lifetime_anchor) {
  if (!(shift.angular() > 0.0)) throw ValidationError("anchor_shift", "must be positive");
  if (!(distance > 0.0)) throw ValidationError("anchor_distance", "must be positive");
  RydbergScalingModel m;
  m.n_anchor = n_anchor;
  m.c6_anchor = shift.angular() * std::pow(distance, 6);
  m.lifetime_anchor = lifetime_anchor;
  m.validate();
  return m;
}

void RydbergScalingModel::validate() const {
  if (n_anchor < 10) throw ValidationError("n_anchor", "must be at least 10");
  if (!(c6_anchor > 0.0)) throw ValidationError("c6_anchor", "must be positive");
  if (!(lifetime_anchor > 0.0)) throw ValidationError("lifetime_anchor", "must be positive");
}

RydbergLevel rydberg_level(const RydbergScalingModel& model, int n) {
  model.validate();
  if (n < 10) throw ValidationError("n", "principal quantum number must be at least 10");
  RydbergLevel level;
  level.n = n;
  if (n == model.n_anchor) {
    level.c6 = model.c6_anchor;
    level.lifetime = model.lifetime_anchor;
    return level;
  }
  const double ratio = static_cast<double>(n) / model.n_anchor;
  level.c6 = model.c6_anchor * std::pow(ratio, model.c6_exponent);
  level.lifetime = model.lifetime_anchor * std::pow(ratio, model.lifetime_exponent);
  return level;
}

Frequency blockade_shift(const RydbergLevel& level, double distance, double min_distance) {
  if (!(distance > 0.0)) throw ValidationError("distance", "must be positive");
  if (distance < min_distance) {
    throw ValidationError("distance",
                          "short-range regime outside van der Waals validity (" +
                              std::to_string(distance * 1e6) + " um < " +
                              std::to_string(min_distance * 1e6) + " um)");
  }
  return Frequency::from_angular(level.c6 / std::pow(distance, 6));
}

std::string_view to_string(BlockadeStatus s) {
  switch (s) {
    case BlockadeStatus::blockaded: return "blockaded";
    case BlockadeStatus::marginal: return "marginal";
    case BlockadeStatus::not_blockaded: return "not blockaded";
  }
  return "?";
}

BlockadeVerdict blockade_condition(Frequency shift, Frequency rabi, Frequency linewidth,
                                   double threshold) {
  BlockadeVerdict v;
  const double width = std::max(std::abs(rabi.angular()), std::abs(linewidth.angular()));
  if (!(shift.angular() > 0.0)) return v;
  v.ratio = width > 0.0 ? shift.angular() / width : std::numeric_limits<double>::infinity();
  if (v.ratio > threshold) {
    v.status = BlockadeStatus::blockaded;
  } else if (v.ratio > 1.0) {
    v.status = BlockadeStatus::marginal;
  }
  return v;
}

void CollectiveQubit::validate() const {
  if (atom_count < 1) throw ValidationError("atom_count", "must be at least 1");
  if (!(extent > 0.0)) throw ValidationError("extent", "must be positive");
}

Frequency collective_rabi(Frequency single_atom_rabi, int atoms) {
  if (atoms < 1) throw ValidationError("atoms", "must be at least 1");
  return single_atom_rabi * std::sqrt(static_cast<double>(atoms));
}

TwoPhotonRabi two_photon_rabi(Frequency red_rabi, Frequency blue_rabi,
                              Frequency intermediate_detuning) {
  const double delta = std::abs(intermediate_detuning.angular());
  if (!(delta > 0.0)) throw ValidationError("intermediate_detuning", "must be non-zero");
  const double r = red_rabi.angular();
  const double b = blue_rabi.angular();

  TwoPhotonRabi out;
  out.rabi = Frequency::from_angular(r * b / (2.0 * delta));
  out.intermediate_population = std::pow(r / (2.0 * delta), 2) + std::pow(b / (2.0 * delta), 2);
  const double largest = std::max(std::abs(r), std::abs(b));
  if (largest > 0.0 && delta / largest < 10.0) {
    out.warning = "intermediate detuning is less than 10x the single-photon Rabi frequencies; "
                  "adiabatic elimination is unreliable";
  }
  return out;
}

Frequency rabi_from_power(double power, double waist_x, double waist_y, Frequency gamma,
                          double i_sat) {
  if (!(power >= 0.0)) throw ValidationError("power", "must be non-negative");
  if (!(waist_x > 0.0 && waist_y > 0.0)) throw ValidationError("waist", "must be positive");
  const double intensity = 2.0 * power / (std::numbers::pi * waist_x * waist_y);
  return gamma * std::sqrt(intensity / (2.0 * i_sat));
}

Frequency RabiCalibration::rabi(double power, double waist_x, double waist_y) const {
  if (!(waist_x > 0.0 && waist_y > 0.0)) throw ValidationError("waist", "must be positive");
  const double intensity = 2.0 * power / (std::numbers::pi * waist_x * waist_y);
  return Frequency::from_angular(rabi_per_sqrt_intensity * std::sqrt(intensity));
}

RabiCalibration RabiCalibration::for_two_photon_target(Frequency target, Frequency red_rabi,
                                                       Frequency intermediate_detuning,
                                                       double power, double waist_x,
                                                       double waist_y) {
  if (!(red_rabi.angular() > 0.0)) throw ValidationError("red_rabi", "must be positive");
  const double blue = 2.0 * std::abs(intermediate_detuning.angular()) * target.angular() /
                      red_rabi.angular();
  const double intensity = 2.0 * power / (std::numbers::pi * waist_x * waist_y);
  if (!(intensity > 0.0)) throw ValidationError("blue_power", "must be positive");
  return {blue / std::sqrt(intensity)};
}

}  // namespace atomchip::rydberg
