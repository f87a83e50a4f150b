#include "atomchip/detection.hpp"

#include <cmath>
#include <random>

namespace atomchip::detection {

void ProbeSetup::validate() const {
  if (!(beam_area > 0.0)) throw ValidationError("beam_area", "must be positive");
  if (!(cross_section > 0.0)) throw ValidationError("cross_section", "must be positive");
  if (!(n_scattered_per_atom > 0.0))
    throw ValidationError("n_scattered_per_atom", "must be positive");
  if (!(detection_efficiency > 0.0 && detection_efficiency <= 1.0))
    throw ValidationError("detection_efficiency", "must lie in (0, 1]");
}

void CollectionGeometry::validate() const {
  if (lens_diameter < 0.0) throw ValidationError("lens_diameter", "must be non-negative");
  if (!(lens_distance > 0.0)) throw ValidationError("lens_distance", "must be positive");
  if (!(lens_diameter < 2.0 * lens_distance))
    throw ValidationError("lens_diameter", "half-angle must stay below 90 degrees");
  if (!(camera_qe > 0.0 && camera_qe <= 1.0))
    throw ValidationError("camera_qe", "must lie in (0, 1]");
}

double scattering_cross_section(const AtomSpecies& species, const OpticalTransition& transition,
                                IsatConvention convention) {
  bool owned = false;
  for (const auto& t : species.transitions) owned = owned || (t == transition);
  if (!owned) {
    throw ValidationError("transition",
                          "'" + transition.label + "' does not belong to " + species.label);
  }
  const double photon_energy = kPhys.hbar * transition.optical_frequency().angular();
  return photon_energy * transition.gamma.angular() / (2.0 * transition.i_sat(convention));
}

double effective_area(double mode_field_radius) {
  if (!(mode_field_radius > 0.0))
    throw ValidationError("mode_field_radius", "must be positive");
  return std::numbers::pi * mode_field_radius * mode_field_radius / 2.0;
}

ReadoutBudget atom_number_uncertainty(const ProbeSetup& setup,
                                      std::optional<double> expected_atoms) {
  setup.validate();
  ReadoutBudget b;
  b.sigma_n_atoms = std::sqrt(setup.beam_area / (setup.cross_section *
                                                 setup.n_scattered_per_atom *
                                                 setup.detection_efficiency));
  b.snr_single_atom = 1.0 / b.sigma_n_atoms;
  b.incident_photons = setup.n_scattered_per_atom * setup.beam_area / setup.cross_section;
  if (expected_atoms) {
    const double depth = setup.cross_section * *expected_atoms / setup.beam_area;
    if (depth > kWeakAbsorptionLimit) {
      b.warning = "weak-absorption assumption violated (optical depth " + std::to_string(depth) +
                  " > 0.1)";
    }
  }
  return b;
}

ReadoutBudget cavity_enhancement(const ProbeSetup& setup, double mirror_reflectivity) {
  if (!(mirror_reflectivity >= 0.0 && mirror_reflectivity < 1.0)) {
    throw ValidationError("mirror_reflectivity", "must satisfy 0 <= R < 1");
  }
  ReadoutBudget b = atom_number_uncertainty(setup);
  b.sigma_n_atoms *= std::sqrt(1.0 - mirror_reflectivity);
  b.snr_single_atom = 1.0 / b.sigma_n_atoms;
  return b;
}

PlaneCavityEstimate plane_cavity_effective_reflectivity(double mode_field_radius,
                                                        double wavelength, double trench_width) {
  if (!(mode_field_radius > 0.0)) throw ValidationError("mode_field_radius", "must be positive");
  if (!(wavelength > 0.0)) throw ValidationError("wavelength", "must be positive");
  if (!(trench_width > 0.0)) throw ValidationError("trench_width", "must be positive");

  PlaneCavityEstimate e;
  e.rayleigh_length = std::numbers::pi * mode_field_radius * mode_field_radius / wavelength;
  e.ratio = e.rayleigh_length / trench_width;
  e.effective_reflectivity = std::min(1.0, e.ratio);
  // Only a trench much narrower than z_R gives a useful plane cavity.
  if (e.ratio < 10.0) {
    e.advisory = "plane cavity unstable: effective reflectivity of order z_R/L";
    if (e.ratio > 1.0) *e.advisory += " (clipped to 1)";
    *e.advisory += ", no significant improvement over single pass";
  }
  return e;
}

double solid_angle_fraction(double lens_diameter, double lens_distance) {
  const double r = lens_diameter / 2.0;
  const double cos_theta = lens_distance / std::hypot(lens_distance, r);
  return (1.0 - cos_theta) / 2.0;
}

FluorescenceReadout fluorescence_readout(const CollectionGeometry& geometry,
                                         double scattering_events) {
  geometry.validate();
  return fluorescence_readout(solid_angle_fraction(geometry.lens_diameter, geometry.lens_distance),
                              geometry.camera_qe, scattering_events);
}

FluorescenceReadout fluorescence_readout(double collection_fraction, double camera_qe,
                                         double scattering_events) {
  if (!(scattering_events > 0.0))
    throw ValidationError("scattering_events", "must be positive");
  if (!(collection_fraction >= 0.0 && collection_fraction <= 0.5))
    throw ValidationError("collection_fraction", "must lie in [0, 1/2]");
  return {collection_fraction, scattering_events * collection_fraction * camera_qe};
}

double steady_state_scattering_rate(const ScatteringRateInputs& in) {
  const double gamma = in.gamma.angular();
  const double x = 2.0 * in.detuning.angular() / gamma;
  return 0.5 * gamma * in.saturation / (1.0 + in.saturation + x * x);
}

DepumpLimit max_scattering_before_depump(const ScatteringRateInputs& rate,
                                         double depump_probability_per_event) {
  const double p = depump_probability_per_event;
  if (!(p > 0.0 && p <= 1.0))
    throw ValidationError("depump_probability_per_event", "must lie in (0, 1]");
  DepumpLimit d;
  d.events = 1.0 / p;
  d.rate = steady_state_scattering_rate(rate);
  d.duration = d.events / d.rate;
  return d;
}

namespace {

ShotNoiseTrial summarize(double sum, double sum_sq, std::int64_t n) {
  const double mean = sum / static_cast<double>(n);
  const double var = (sum_sq - static_cast<double>(n) * mean * mean) / static_cast<double>(n - 1);
  return {mean, std::sqrt(std::max(var, 0.0)), n};
}

}  // namespace

ShotNoiseTrial simulate_absorption_readout(const ProbeSetup& setup, double true_atoms,
                                           std::int64_t trials, std::uint64_t seed) {
  setup.validate();
  if (trials < 2) throw ValidationError("trials", "need at least two trials");
  const double incident = setup.n_scattered_per_atom * setup.beam_area / setup.cross_section;
  const double detected_incident = setup.detection_efficiency * incident;
  const double transmission = 1.0 - setup.cross_section * true_atoms / setup.beam_area;

  std::mt19937_64 rng(seed);
  std::poisson_distribution<std::int64_t> counts(detected_incident * transmission);
  const double scale = setup.beam_area / setup.cross_section;

  double sum = 0.0, sum_sq = 0.0;
  for (std::int64_t i = 0; i < trials; ++i) {
    const double estimate = scale * (1.0 - static_cast<double>(counts(rng)) / detected_incident);
    sum += estimate;
    sum_sq += estimate * estimate;
  }
  return summarize(sum, sum_sq, trials);
}

double phase_readout_sigma(const ProbeSetup& setup, const PhaseReadoutOptions& options) {
  const double x = options.normalized_detuning;
  const double base = atom_number_uncertainty(setup).sigma_n_atoms;
  return base * std::sqrt(1.0 + x * x) / x * std::sqrt(1.0 + 1.0 / options.reference_ratio);
}

ShotNoiseTrial simulate_phase_readout(const ProbeSetup& setup, double true_atoms,
                                      std::int64_t trials, std::uint64_t seed,
                                      const PhaseReadoutOptions& options) {
  setup.validate();
  if (trials < 2) throw ValidationError("trials", "need at least two trials");
  const double x = options.normalized_detuning;
  if (!(x > 0.0)) throw ValidationError("normalized_detuning", "must be positive");
  if (!(options.reference_ratio > 0.0))
    throw ValidationError("reference_ratio", "must be positive");

  // Off resonance the cross-section drops by 1 + x^2; more probe photons keep
  // the scattered number per atom fixed.
  const double sigma_eff = setup.cross_section / (1.0 + x * x);
  const double probe = setup.n_scattered_per_atom * setup.beam_area / sigma_eff;
  const double reference = options.reference_ratio * probe;
  const double phase_per_atom = sigma_eff * x / (2.0 * setup.beam_area);
  const double q = setup.detection_efficiency;

  const double phase = phase_per_atom * true_atoms;
  const double interference = 2.0 * std::sqrt(reference * probe);
  const double mean_port = 0.5 * (reference + probe);

  std::mt19937_64 rng(seed);
  std::poisson_distribution<std::int64_t> plus(q * (mean_port + 0.5 * interference * std::sin(phase)));
  std::poisson_distribution<std::int64_t> minus(q * (mean_port - 0.5 * interference * std::sin(phase)));
  const double gain = q * interference * phase_per_atom;

  double sum = 0.0, sum_sq = 0.0;
  for (std::int64_t i = 0; i < trials; ++i) {
    const double diff = static_cast<double>(plus(rng) - minus(rng));
    const double estimate = diff / gain;
    sum += estimate;
    sum_sq += estimate * estimate;
  }
  return summarize(sum, sum_sq, trials);
}

}  // namespace atomchip::detection
