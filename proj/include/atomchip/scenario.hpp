#pragma once

// Scenario configuration: every input of the design pipeline, read from a
// unit-tagged JSON document and held internally in SI (angular frequencies).

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "atomchip/traps.hpp"
#include "atomchip/units.hpp"

namespace atomchip::scenario {

inline constexpr std::string_view kConfigSchema = "atomchip.scenario/1";

struct SpeciesSource {
  std::optional<std::string> path;  // null: ATOMCHIP_DATA or the bundled record
  IsatConvention isat_convention = IsatConvention::cycling;
};

struct ChipGeometry {
  double mode_field_radius = 0.0;  // m
  double trench_width = 0.0;       // m
  double pitch = 0.0;              // m
  int channels = 0;
  double waveguide_wavelength = 0.0;  // m, probe light in the guide
};

struct MagneticTrapConfig {
  traps::MagneticTrapSpec spec;
  double atoms = 0.0;
  double temperature = 0.0;  // K
};

struct DipoleTrapConfig {
  double power_each = 0.0;  // W
  double wavelength = 0.0;  // m
  double facet_distance = 0.0;
  double interference_contrast = 0.0;
  traps::PolarizabilityModel model = traps::PolarizabilityModel::d1_d2_full;
  double loading_truncation = 1.0;
};

struct ProbeConfig {
  double n_scattered_per_atom = 0.0;
  double detection_efficiency = 1.0;
  double mirror_reflectivity = 0.0;
  double expected_atoms = 1.0;
};

struct FluorescenceConfig {
  double lens_diameter = 0.0;
  double lens_distance = 0.0;
  double camera_qe = 1.0;
  double depump_probability = 0.0;
  double saturation = 1.0;
  Frequency detuning;
  double collection_fraction = 0.0;  // used for the count budget
};

struct RydbergConfig {
  int anchor_n = 40;
  Frequency anchor_shift;
  double anchor_distance = 0.0;
  double anchor_lifetime = 0.0;
  double c6_exponent = 11.0;
  double lifetime_exponent = 3.0;
  double min_distance = 0.5e-6;
  double blockade_threshold = 10.0;
};

struct HadamardConfig {
  int n = 40;
  int atoms = 1;
  double extent = 0.0;
  Frequency single_rabi;
  Frequency intermediate_detuning;
  double red_power = 0.0;
  double blue_power = 0.0;
  double blue_waist_x = 0.0;
  double blue_waist_y = 0.0;
  double atom_number_spread = 0.0;  // sigma_N / N
};

struct PhaseGateConfig {
  double power = 0.0;
  Frequency detuning;  // laser minus the F=2 resonance
  double target_phase = 0.0;
  Frequency reference_shift;  // differential shift used for the timing budget
};

struct CzConfig {
  int n = 100;
  double distance = 0.0;
  std::optional<Frequency> blockade;  // null: C6(n) / distance^6
  double total_duration = 0.0;
};

struct NamedRate {
  std::string name;
  double rate = 0.0;  // 1/s

  bool operator==(const NamedRate&) const = default;
};

struct DecoherenceConfig {
  double surface_spin_flip = 0.0;
  std::optional<double> trap_light_scattering;  // null: computed from the dipole trap
  double ac_stark_inhomogeneity = 0.0;
  std::vector<NamedRate> extra;
};

struct SimulationConfig {
  double steps_per_period = 1000.0;
  std::int64_t monte_carlo_trials = 200000;
  std::uint64_t seed = 12345;
};

struct ScenarioConfig {
  SpeciesSource species;
  ChipGeometry chip;
  MagneticTrapConfig magnetic_trap;
  DipoleTrapConfig dipole_trap;
  ProbeConfig probe;
  FluorescenceConfig fluorescence;
  RydbergConfig rydberg;
  HadamardConfig hadamard;
  PhaseGateConfig phase_gate;
  CzConfig cz;
  DecoherenceConfig decoherence;
  double magic_field = 0.0;  // T
  SimulationConfig simulation;

  // Directory relative species paths resolve against; not serialized.
  std::filesystem::path base_dir;

  /// Parses and validates. Unknown keys, missing fields, bad unit tags and
  /// out-of-range values raise ValidationError naming the dotted path.
  static ScenarioConfig from_json(const nlohmann::json& doc);

  /// SI unit tags throughout (frequencies in Hz).
  nlohmann::json to_json() const;

  AtomSpecies load_species() const;
  traps::DipoleTrapSpec dipole_trap_spec(std::optional<double> contrast = std::nullopt) const;
};

std::string_view default_config_text();
nlohmann::json default_config_json();
ScenarioConfig default_config();

/// Reads a config file; relative species paths resolve against its directory.
ScenarioConfig load_config_file(const std::filesystem::path& path);
nlohmann::json read_json_file(const std::filesystem::path& path, const std::string& what);

/// True when two documents have the same structure and all numbers agree to
/// `rel_tol` (frequencies pass through a 2*pi at each boundary).
bool json_equivalent(const nlohmann::json& a, const nlohmann::json& b, double rel_tol = 1e-12);

/// Replaces the number at a dotted path ("dipole_trap.power_each"). For a
/// {"value", "unit"} quantity only the value changes, so `value` is in the
/// unit the document already uses. Throws ValidationError naming the path
/// when it does not resolve to a number or quantity.
void set_parameter(nlohmann::json& doc, const std::string& path, double value);

/// The unit tag at a dotted path ("" for bare numbers).
std::string parameter_unit(const nlohmann::json& doc, const std::string& path);

}  // namespace atomchip::scenario
