#pragma once

#include <string_view>
#include <vector>

#include "atomchip/units.hpp"

namespace atomchip::traps {

struct MagneticTrapSpec {
  Frequency axial;
  Frequency radial;
};

struct ThermalCloud {
  double atom_count = 0.0;
  double temperature = 0.0;  // K
  double sigma_axial = 0.0;  // m
  double sigma_radial = 0.0;
  double peak_linear_density = 0.0;  // atoms / m

  /// Distance from the centre to the 1/e^2 point of the axial density (2 sigma).
  double length_1e2() const { return 2.0 * sigma_axial; }
  /// Full 1/e^2 extent, end to end (4 sigma).
  double full_length_1e2() const { return 4.0 * sigma_axial; }
};

/// Equipartition Gaussian cloud in a harmonic magnetic trap.
ThermalCloud thermal_cloud(const MagneticTrapSpec& trap, double atoms, double temperature,
                           const AtomSpecies& species);

enum class PolarizabilityModel {
  two_level_rwa,   // D2 only, full oscillator strength, rotating term only
  two_level_full,  // D2 only, co- and counter-rotating terms
  d1_d2_full,      // both D lines weighted by line strength, both terms
};

std::string_view to_string(PolarizabilityModel m);
PolarizabilityModel polarizability_model_from_string(std::string_view s);

/// Two counter-propagating beams leaving opposite waveguide facets across the
/// trench. The trap centre sits midway, facet_distance from each facet.
struct DipoleTrapSpec {
  double beam_power_each = 0.0;  // W
  double wavelength = 0.0;       // m
  double mode_field_radius = 0.0;  // m, waist at the facet
  double facet_distance = 0.0;     // m
  double interference_contrast = 0.0;  // 0: no lattice, 1: full standing wave
  PolarizabilityModel model = PolarizabilityModel::d1_d2_full;

  void validate() const;
};

struct LineContribution {
  std::string label;
  double depth = 0.0;           // J
  Frequency detuning;           // atom minus laser (positive = red-detuned light)
  double scattering_rate = 0.0;  // 1/s
};

struct DipoleTrapResult {
  double depth = 0.0;  // J, positive for an attractive trap
  Frequency axial;
  Frequency radial;
  double photon_scattering_rate = 0.0;  // 1/s at the trap centre
  double peak_intensity_each = 0.0;     // W/m^2 at the facet waist
  double radial_waist = 0.0;            // 1/e^2 intensity radius at the trap centre
  double capture_limit = 0.0;           // trench width
  std::vector<LineContribution> lines;

  double depth_kelvin() const { return depth / kPhys.kB; }
  double depth_hz() const { return depth / kPhys.h; }
};

/// Ground-state light-shift coefficient: U = -coefficient * I. Throws
/// ValidationError("not a trap") when the light is blue of an included line.
double polarizability_coefficient(const DipoleTrapSpec& spec, const AtomSpecies& species);

/// Potential energy (J) at radial offset r and axial position z (beam axis,
/// z = 0 at the trap centre).
double dipole_potential(const DipoleTrapSpec& spec, const AtomSpecies& species, double r,
                        double z);

DipoleTrapResult dipole_trap(const DipoleTrapSpec& spec, const AtomSpecies& species);

/// Atoms captured from the magnetic-trap cloud: peak linear density times the
/// length of cloud axis over which the trap depth exceeds eta * kB * T. The
/// cloud axis runs along the trench, i.e. across the trapping beam.
double loading_estimate(const ThermalCloud& cloud, const DipoleTrapResult& trap,
                        double truncation = 1.0);

}  // namespace atomchip::traps
