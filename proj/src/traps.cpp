#include "atomchip/traps.hpp"

#include <cmath>

namespace atomchip::traps {

ThermalCloud thermal_cloud(const MagneticTrapSpec& trap, double atoms, double temperature,
                           const AtomSpecies& species) {
  if (!(temperature > 0.0)) throw ValidationError("temperature", "must be positive");
  if (!(atoms > 0.0)) throw ValidationError("atoms", "must be positive");
  if (!(trap.axial.angular() > 0.0)) throw ValidationError("axial_freq", "must be positive");
  if (!(trap.radial.angular() > 0.0)) throw ValidationError("radial_freq", "must be positive");

  const double thermal_velocity = std::sqrt(kPhys.kB * temperature / species.mass);
  ThermalCloud c;
  c.atom_count = atoms;
  c.temperature = temperature;
  c.sigma_axial = thermal_velocity / trap.axial.angular();
  c.sigma_radial = thermal_velocity / trap.radial.angular();
  c.peak_linear_density = atoms / (std::sqrt(kTwoPi) * c.sigma_axial);
  return c;
}

std::string_view to_string(PolarizabilityModel m) {
  switch (m) {
    case PolarizabilityModel::two_level_rwa: return "two_level_RWA";
    case PolarizabilityModel::two_level_full: return "two_level_full";
    case PolarizabilityModel::d1_d2_full: return "d1_d2_full";
  }
  return "?";
}

PolarizabilityModel polarizability_model_from_string(std::string_view s) {
  if (s == "two_level_RWA" || s == "two_level_rwa") return PolarizabilityModel::two_level_rwa;
  if (s == "two_level_full") return PolarizabilityModel::two_level_full;
  if (s == "d1_d2_full") return PolarizabilityModel::d1_d2_full;
  throw ValidationError("polarizability_model", "unknown model '" + std::string(s) + "'");
}

void DipoleTrapSpec::validate() const {
  if (!(beam_power_each > 0.0)) throw ValidationError("beam_power_each", "must be positive");
  if (!(wavelength > 0.0)) throw ValidationError("wavelength", "must be positive");
  if (!(mode_field_radius > 0.0)) throw ValidationError("mode_field_radius", "must be positive");
  if (!(facet_distance >= 0.0)) throw ValidationError("facet_distance", "must be non-negative");
  if (!(interference_contrast >= 0.0 && interference_contrast <= 1.0))
    throw ValidationError("interference_contrast", "must lie in [0, 1]");
}

namespace {

struct Line {
  const OpticalTransition* transition;
  double strength;
};

std::vector<Line> included_lines(PolarizabilityModel model, const AtomSpecies& species) {
  if (model == PolarizabilityModel::d1_d2_full) {
    std::vector<Line> lines;
    for (const auto& t : species.transitions) lines.push_back({&t, t.relative_strength});
    return lines;
  }
  return {{&species.transition("D2"), 1.0}};
}

// Light-shift coefficient of one line, U = -coef * I.
double line_coefficient(const Line& line, double laser_angular, PolarizabilityModel model) {
  const double w0 = line.transition->optical_frequency().angular();
  const double gamma = line.transition->gamma.angular();
  double response = gamma / (w0 - laser_angular);
  if (model != PolarizabilityModel::two_level_rwa) response += gamma / (w0 + laser_angular);
  return 3.0 * std::numbers::pi * kPhys.c * kPhys.c / (2.0 * w0 * w0 * w0) * line.strength *
         response;
}

double laser_angular(const DipoleTrapSpec& spec) { return kTwoPi * kPhys.c / spec.wavelength; }

void require_red_detuned(const DipoleTrapSpec& spec, const std::vector<Line>& lines) {
  const double w = laser_angular(spec);
  for (const auto& l : lines) {
    if (!(w < l.transition->optical_frequency().angular())) {
      throw ValidationError("dipole_trap.wavelength",
                            "not a trap: light is blue-detuned of " + l.transition->label);
    }
  }
}

double rayleigh_length(const DipoleTrapSpec& spec) {
  return std::numbers::pi * spec.mode_field_radius * spec.mode_field_radius / spec.wavelength;
}

double peak_intensity_each(const DipoleTrapSpec& spec) {
  return 2.0 * spec.beam_power_each /
         (std::numbers::pi * spec.mode_field_radius * spec.mode_field_radius);
}

}  // namespace

double polarizability_coefficient(const DipoleTrapSpec& spec, const AtomSpecies& species) {
  spec.validate();
  const auto lines = included_lines(spec.model, species);
  require_red_detuned(spec, lines);
  double coef = 0.0;
  for (const auto& l : lines) coef += line_coefficient(l, laser_angular(spec), spec.model);
  return coef;
}

double dipole_potential(const DipoleTrapSpec& spec, const AtomSpecies& species, double r,
                        double z) {
  const double coef = polarizability_coefficient(spec, species);
  const double zr = rayleigh_length(spec);
  const double i0 = peak_intensity_each(spec);
  const double w0 = spec.mode_field_radius;

  auto beam = [&](double axial_from_facet) {
    const double u = axial_from_facet / zr;
    const double spread = 1.0 + u * u;
    return i0 / spread * std::exp(-2.0 * r * r / (w0 * w0 * spread));
  };
  const double i1 = beam(z + spec.facet_distance);
  const double i2 = beam(z - spec.facet_distance);
  const double k = kTwoPi / spec.wavelength;
  const double lattice =
      2.0 * spec.interference_contrast * std::sqrt(i1 * i2) * std::cos(2.0 * k * z);
  return -coef * (i1 + i2 + lattice);
}

DipoleTrapResult dipole_trap(const DipoleTrapSpec& spec, const AtomSpecies& species) {
  spec.validate();
  const auto lines = included_lines(spec.model, species);
  require_red_detuned(spec, lines);

  const double w = laser_angular(spec);
  const double zr = rayleigh_length(spec);
  const double i0 = peak_intensity_each(spec);
  const double w0 = spec.mode_field_radius;
  const double c = spec.interference_contrast;
  const double k = kTwoPi / spec.wavelength;
  const double u = spec.facet_distance / zr;
  const double f = 1.0 / (1.0 + u * u);  // on-axis intensity drop at the centre

  const double centre_intensity = (2.0 + 2.0 * c) * i0 * f;
  // Second derivatives of the total intensity at the centre.
  const double d2i_dr2 = -centre_intensity * 4.0 * f / (w0 * w0);
  const double d2i_dz2 = 2.0 * i0 * (6.0 * u * u - 2.0) * f * f * f / (zr * zr) -
                         2.0 * c * i0 * f * ((2.0 - 2.0 * u * u) * f * f / (zr * zr) + 4.0 * k * k);

  DipoleTrapResult res;
  res.peak_intensity_each = i0;
  res.radial_waist = w0 / std::sqrt(f);
  res.capture_limit = 2.0 * spec.facet_distance;

  double coef = 0.0;
  for (const auto& l : lines) {
    const double lc = line_coefficient(l, w, spec.model);
    coef += lc;
    LineContribution lcb;
    lcb.label = l.transition->label;
    lcb.depth = lc * centre_intensity;
    lcb.detuning = l.transition->optical_frequency() - Frequency::from_angular(w);
    lcb.scattering_rate =
        lcb.depth / kPhys.hbar * (l.transition->gamma / lcb.detuning);
    res.photon_scattering_rate += lcb.scattering_rate;
    res.lines.push_back(std::move(lcb));
  }
  res.depth = coef * centre_intensity;

  const double axial_curvature = -coef * d2i_dz2;
  if (!(axial_curvature > 0.0)) {
    throw ValidationError("dipole_trap.facet_distance",
                          "beams diverge too fast: the trench centre is not an axial minimum");
  }
  res.radial = Frequency::from_angular(std::sqrt(-coef * d2i_dr2 / species.mass));
  res.axial = Frequency::from_angular(std::sqrt(axial_curvature / species.mass));
  return res;
}

double loading_estimate(const ThermalCloud& cloud, const DipoleTrapResult& trap,
                        double truncation) {
  if (!(truncation > 0.0)) throw ValidationError("truncation", "must be positive");
  const double threshold = truncation * kPhys.kB * cloud.temperature;
  if (!(trap.depth > threshold)) return 0.0;
  // depth * exp(-2 x^2 / w^2) > threshold
  const double half = trap.radial_waist * std::sqrt(std::log(trap.depth / threshold) / 2.0);
  double capture = 2.0 * half;
  if (trap.capture_limit > 0.0) capture = std::min(capture, trap.capture_limit);
  return cloud.peak_linear_density * capture;
}

}  // namespace atomchip::traps
