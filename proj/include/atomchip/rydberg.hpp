#pragma once

#include <optional>
#include <string>

#include "atomchip/units.hpp"

namespace atomchip::rydberg {

/// A Rydberg nS level. c6 is the van der Waals coefficient expressed as an
/// angular-frequency shift times distance^6 (rad/s m^6).
struct RydbergLevel {
  int n = 0;
  double lifetime = 0.0;  // s
  double c6 = 0.0;

  Frequency linewidth() const { return Frequency::from_angular(1.0 / lifetime); }
};

/// Power-law scaling of C6 and radiative lifetime with n, anchored at one
/// calibrated level. Lifetime is purely radiative (no blackbody correction),
/// which overestimates it at high n.
struct RydbergScalingModel {
  int n_anchor = 40;
  double c6_anchor = 0.0;        // rad/s m^6
  double lifetime_anchor = 0.0;  // s
  double c6_exponent = 11.0;
  double lifetime_exponent = 3.0;

  /// Chooses c6_anchor so that blockade_shift(level(n_anchor), distance) == shift.
  static RydbergScalingModel calibrated(int n_anchor, Frequency shift, double distance,
                                        double lifetime_anchor);

  void validate() const;
};

RydbergLevel rydberg_level(const RydbergScalingModel& model, int n);

inline constexpr double kDefaultMinimumDistance = 0.5e-6;

/// B = C6 / R^6. Distances below min_distance are outside the van der Waals
/// regime and rejected.
Frequency blockade_shift(const RydbergLevel& level, double distance,
                         double min_distance = kDefaultMinimumDistance);

enum class BlockadeStatus { blockaded, marginal, not_blockaded };

std::string_view to_string(BlockadeStatus s);

struct BlockadeVerdict {
  double ratio = 0.0;  // shift / max(rabi, linewidth)
  BlockadeStatus status = BlockadeStatus::not_blockaded;
};

/// Blockaded when the shift exceeds the power-broadened linewidth by more than
/// `threshold`; marginal when it exceeds it by less.
BlockadeVerdict blockade_condition(Frequency shift, Frequency rabi, Frequency linewidth,
                                   double threshold = 10.0);

struct CollectiveQubit {
  int atom_count = 1;
  double extent = 0.0;      // m
  double site_pitch = 0.0;  // m

  void validate() const;
};

/// sqrt(N) enhancement of the ground <-> symmetric single-Rydberg coupling.
Frequency collective_rabi(Frequency single_atom_rabi, int atoms);

struct TwoPhotonRabi {
  Frequency rabi;
  double intermediate_population = 0.0;
  std::optional<std::string> warning;
};

/// Adiabatic elimination of the intermediate level: Omega = Or Ob / (2 Delta),
/// peak intermediate fraction (Or/2Delta)^2 + (Ob/2Delta)^2.
TwoPhotonRabi two_photon_rabi(Frequency red_rabi, Frequency blue_rabi,
                              Frequency intermediate_detuning);

/// Resonant Rabi frequency of a Gaussian beam of the given power on a
/// transition with linewidth gamma and saturation intensity i_sat:
/// Gamma sqrt(I / (2 I_sat)), I = 2P / (pi wx wy).
Frequency rabi_from_power(double power, double waist_x, double waist_y, Frequency gamma,
                          double i_sat);

/// Upper-transition coupling whose matrix element is not modelled: a single
/// calibration constant maps sqrt(intensity) to Rabi frequency.
struct RabiCalibration {
  double rabi_per_sqrt_intensity = 0.0;  // rad/s per sqrt(W/m^2)

  Frequency rabi(double power, double waist_x, double waist_y) const;

  /// The calibration that makes the two-photon Rabi frequency equal `target`.
  static RabiCalibration for_two_photon_target(Frequency target, Frequency red_rabi,
                                               Frequency intermediate_detuning, double power,
                                               double waist_x, double waist_y);
};

}  // namespace atomchip::rydberg
