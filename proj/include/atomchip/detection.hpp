#pragma once

// Shot-noise-limited atom-number readout: absorption, mirror-enhanced
// absorption, balanced-interferometer phase readout and camera fluorescence.

#include <cstdint>
#include <optional>
#include <string>

#include "atomchip/units.hpp"

namespace atomchip::detection {

struct ProbeSetup {
  double beam_area = 0.0;         // m^2, effective area A
  double cross_section = 0.0;     // m^2
  double n_scattered_per_atom = 0.0;
  double detection_efficiency = 1.0;  // transmission x detector QE, in (0, 1]

  void validate() const;
};

struct ReadoutBudget {
  double sigma_n_atoms = 0.0;
  double snr_single_atom = 0.0;
  double incident_photons = 0.0;
  std::optional<double> duration;  // s
  std::optional<std::string> warning;
};

struct CollectionGeometry {
  double lens_diameter = 0.0;  // m
  double lens_distance = 0.0;  // m
  double camera_qe = 1.0;

  void validate() const;
};

/// sigma = hbar * omega * Gamma / (2 I_sat). With the cycling I_sat this is
/// the resonant two-level value 3 lambda^2 / (2 pi).
double scattering_cross_section(const AtomSpecies& species, const OpticalTransition& transition,
                                IsatConvention convention = IsatConvention::cycling);

/// A = pi w^2 / 2 for a Gaussian mode of 1/e field radius w.
double effective_area(double mode_field_radius);

inline constexpr double kWeakAbsorptionLimit = 0.1;

/// sigma_N = sqrt(A / (sigma n_sc q)). When expected_atoms is given and the
/// optical depth sigma*N/A exceeds 0.1, the budget carries a warning.
ReadoutBudget atom_number_uncertainty(const ProbeSetup& setup,
                                      std::optional<double> expected_atoms = std::nullopt);

/// Same scattered photons per atom, probe folded across the trench by mirrors
/// of power reflectivity R: sigma_N shrinks by sqrt(1 - R).
ReadoutBudget cavity_enhancement(const ProbeSetup& setup, double mirror_reflectivity);

struct PlaneCavityEstimate {
  double rayleigh_length = 0.0;  // m
  double ratio = 0.0;            // z_R / trench width, unclipped
  double effective_reflectivity = 0.0;
  std::optional<std::string> advisory;
};

PlaneCavityEstimate plane_cavity_effective_reflectivity(double mode_field_radius,
                                                        double wavelength, double trench_width);

/// Fraction of isotropic emission collected by a lens of the given diameter
/// at the given distance: (1 - cos theta) / 2, tan theta = radius / distance.
double solid_angle_fraction(double lens_diameter, double lens_distance);

struct FluorescenceReadout {
  double collection_fraction = 0.0;
  double counts = 0.0;
};

FluorescenceReadout fluorescence_readout(const CollectionGeometry& geometry,
                                         double scattering_events);

/// Counts for an explicitly specified collection fraction (skips geometry).
FluorescenceReadout fluorescence_readout(double collection_fraction, double camera_qe,
                                         double scattering_events);

struct ScatteringRateInputs {
  Frequency gamma;
  double saturation = 1.0;  // s = I / I_sat
  Frequency detuning;       // laser minus atom
};

/// (Gamma/2) s / (1 + s + (2 delta / Gamma)^2), photons per second.
double steady_state_scattering_rate(const ScatteringRateInputs& in);

struct DepumpLimit {
  double events = 0.0;
  double duration = 0.0;  // s
  double rate = 0.0;      // 1/s
};

DepumpLimit max_scattering_before_depump(const ScatteringRateInputs& rate,
                                         double depump_probability_per_event);

// Monte-Carlo shot-noise estimators. Each trial draws Poisson photon counts
// and inverts a linearised estimator for the atom number; the returned spread
// is the sample standard deviation of those estimates.

struct ShotNoiseTrial {
  double mean_estimate = 0.0;
  double sigma_estimate = 0.0;
  std::int64_t trials = 0;
};

/// Single-beam transmission: detected ~ Poisson(q N_gamma (1 - sigma N / A)).
ShotNoiseTrial simulate_absorption_readout(const ProbeSetup& setup, double true_atoms,
                                           std::int64_t trials, std::uint64_t seed);

struct PhaseReadoutOptions {
  double normalized_detuning = 50.0;  // 2 delta / Gamma
  double reference_ratio = 1.0e3;      // reference-arm photons per probe photon
};

/// Balanced two-detector interferometer at quadrature with a strong reference
/// arm; the probe is detuned so that it still scatters n_sc photons per atom.
/// Closed form: sigma_N * sqrt(1 + x^2) / x, which tends to the absorption
/// result for large x.
ShotNoiseTrial simulate_phase_readout(const ProbeSetup& setup, double true_atoms,
                                      std::int64_t trials, std::uint64_t seed,
                                      const PhaseReadoutOptions& options = {});

double phase_readout_sigma(const ProbeSetup& setup, const PhaseReadoutOptions& options = {});

}  // namespace atomchip::detection
