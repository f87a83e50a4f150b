#include "atomchip/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "bundled_data.hpp"

namespace atomchip::scenario {

using nlohmann::json;
using units::Dimension;

namespace {

// Reads one config section, remembering which keys were consumed so that
// leftovers (usually typos) can be reported.
class Section {
 public:
  Section(const json& parent, const std::string& key, const std::string& parent_path = "")
      : path_(parent_path.empty() ? key : parent_path + "." + key) {
    if (!parent.contains(key)) throw ValidationError(path_, "missing section");
    node_ = &parent.at(key);
    if (!node_->is_object()) throw ValidationError(path_, "expected an object");
  }

  double quantity(const std::string& key, Dimension dim) {
    seen_.insert(key);
    return units::read_quantity(*node_, key, dim, path_);
  }

  double positive(const std::string& key, Dimension dim) {
    const double v = quantity(key, dim);
    if (!(v > 0.0)) throw ValidationError(field(key), "must be positive");
    return v;
  }

  double non_negative(const std::string& key, Dimension dim) {
    const double v = quantity(key, dim);
    if (!(v >= 0.0)) throw ValidationError(field(key), "must be non-negative");
    return v;
  }

  double in_range(const std::string& key, double lo, double hi, bool lo_open, bool hi_open) {
    const double v = quantity(key, Dimension::dimensionless);
    const bool ok = (lo_open ? v > lo : v >= lo) && (hi_open ? v < hi : v <= hi);
    if (!ok) {
      std::ostringstream os;
      os << "must lie in " << (lo_open ? "(" : "[") << lo << ", " << hi << (hi_open ? ")" : "]");
      throw ValidationError(field(key), os.str());
    }
    return v;
  }

  int integer(const std::string& key, int min_value) {
    const double v = quantity(key, Dimension::dimensionless);
    if (v != std::floor(v) || v < min_value || v > 1e9) {
      throw ValidationError(field(key),
                            "must be an integer >= " + std::to_string(min_value));
    }
    return static_cast<int>(v);
  }

  bool is_null(const std::string& key) const {
    return node_->contains(key) && node_->at(key).is_null();
  }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    if (!node_->contains(key)) throw ValidationError(field(key), "missing field");
    return node_->at(key);
  }

  std::string text(const std::string& key) {
    const auto& v = raw(key);
    if (!v.is_string()) throw ValidationError(field(key), "expected a string");
    return v.get<std::string>();
  }

  void finish() const {
    for (const auto& [k, v] : node_->items()) {
      if (!seen_.contains(k)) throw ValidationError(field(k), "unknown key");
    }
  }

  std::string field(const std::string& key) const { return path_ + "." + key; }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  const json* node_ = nullptr;
  std::set<std::string> seen_;
};

json q(double si, Dimension dim) { return units::write_quantity(si, dim); }
json count(double v) { return json{{"value", v}, {"unit", "count"}}; }
json scalar(double v) { return json{{"value", v}, {"unit", "1"}}; }

}  // namespace

ScenarioConfig ScenarioConfig::from_json(const json& doc) {
  if (!doc.is_object()) throw ValidationError("config", "expected a JSON object");
  if (!doc.contains("schema") || doc.at("schema") != kConfigSchema) {
    throw ValidationError("schema", "expected \"" + std::string(kConfigSchema) + "\"");
  }
  static const std::set<std::string> kSections{
      "schema",   "species",    "chip",       "magnetic_trap", "dipole_trap",
      "probe",    "fluorescence", "rydberg",  "hadamard",      "phase_gate",
      "cz",       "decoherence", "field",     "simulation"};
  for (const auto& [k, v] : doc.items()) {
    if (!kSections.contains(k)) throw ValidationError(k, "unknown section");
  }

  ScenarioConfig c;
  {
    Section s(doc, "species");
    const auto& p = s.raw("path");
    if (p.is_string()) {
      c.species.path = p.get<std::string>();
    } else if (!p.is_null()) {
      throw ValidationError(s.field("path"), "expected a string or null");
    }
    c.species.isat_convention = isat_convention_from_string(s.text("isat_convention"));
    s.finish();
  }
  {
    Section s(doc, "chip");
    c.chip.mode_field_radius = s.positive("mode_field_radius", Dimension::length);
    c.chip.trench_width = s.positive("trench_width", Dimension::length);
    c.chip.pitch = s.positive("pitch", Dimension::length);
    c.chip.channels = s.integer("channels", 1);
    c.chip.waveguide_wavelength = s.positive("waveguide_wavelength", Dimension::length);
    s.finish();
  }
  {
    Section s(doc, "magnetic_trap");
    c.magnetic_trap.spec.axial =
        Frequency::from_angular(s.positive("axial_freq", Dimension::frequency));
    c.magnetic_trap.spec.radial =
        Frequency::from_angular(s.positive("radial_freq", Dimension::frequency));
    c.magnetic_trap.atoms = s.positive("atoms", Dimension::dimensionless);
    c.magnetic_trap.temperature = s.positive("temperature", Dimension::temperature);
    s.finish();
  }
  {
    Section s(doc, "dipole_trap");
    c.dipole_trap.power_each = s.positive("power_each", Dimension::power);
    c.dipole_trap.wavelength = s.positive("wavelength", Dimension::length);
    c.dipole_trap.facet_distance = s.non_negative("facet_distance", Dimension::length);
    c.dipole_trap.interference_contrast = s.in_range("interference_contrast", 0.0, 1.0, false, false);
    try {
      c.dipole_trap.model = traps::polarizability_model_from_string(s.text("polarizability_model"));
    } catch (const ValidationError& e) {
      throw ValidationError(s.field("polarizability_model"), e.what());
    }
    c.dipole_trap.loading_truncation = s.positive("loading_truncation", Dimension::dimensionless);
    s.finish();
  }
  {
    Section s(doc, "probe");
    c.probe.n_scattered_per_atom = s.positive("n_scattered_per_atom", Dimension::dimensionless);
    c.probe.detection_efficiency = s.in_range("detection_efficiency", 0.0, 1.0, true, false);
    c.probe.mirror_reflectivity = s.in_range("mirror_reflectivity", 0.0, 1.0, false, true);
    c.probe.expected_atoms = s.non_negative("expected_atoms", Dimension::dimensionless);
    s.finish();
  }
  {
    Section s(doc, "fluorescence");
    c.fluorescence.lens_diameter = s.non_negative("lens_diameter", Dimension::length);
    c.fluorescence.lens_distance = s.positive("lens_distance", Dimension::length);
    c.fluorescence.camera_qe = s.in_range("camera_qe", 0.0, 1.0, true, false);
    c.fluorescence.depump_probability = s.in_range("depump_probability", 0.0, 1.0, true, false);
    c.fluorescence.saturation = s.non_negative("saturation", Dimension::dimensionless);
    c.fluorescence.detuning = Frequency::from_angular(s.quantity("detuning", Dimension::frequency));
    c.fluorescence.collection_fraction = s.in_range("collection_fraction", 0.0, 0.5, false, false);
    if (!(c.fluorescence.lens_diameter < 2.0 * c.fluorescence.lens_distance)) {
      throw ValidationError(s.field("lens_diameter"), "must be below twice lens_distance");
    }
    s.finish();
  }
  {
    Section s(doc, "rydberg");
    c.rydberg.anchor_n = s.integer("anchor_n", 10);
    c.rydberg.anchor_shift = Frequency::from_angular(s.positive("anchor_shift", Dimension::frequency));
    c.rydberg.anchor_distance = s.positive("anchor_distance", Dimension::length);
    c.rydberg.anchor_lifetime = s.positive("anchor_lifetime", Dimension::time);
    c.rydberg.c6_exponent = s.quantity("c6_exponent", Dimension::dimensionless);
    c.rydberg.lifetime_exponent = s.quantity("lifetime_exponent", Dimension::dimensionless);
    c.rydberg.min_distance = s.positive("min_distance", Dimension::length);
    c.rydberg.blockade_threshold = s.positive("blockade_threshold", Dimension::dimensionless);
    s.finish();
  }
  {
    Section s(doc, "hadamard");
    c.hadamard.n = s.integer("n", 10);
    c.hadamard.atoms = s.integer("atoms", 1);
    c.hadamard.extent = s.positive("extent", Dimension::length);
    c.hadamard.single_rabi = Frequency::from_angular(s.positive("single_rabi", Dimension::frequency));
    c.hadamard.intermediate_detuning =
        Frequency::from_angular(s.quantity("intermediate_detuning", Dimension::frequency));
    if (c.hadamard.intermediate_detuning.angular() == 0.0)
      throw ValidationError(s.field("intermediate_detuning"), "must be non-zero");
    c.hadamard.red_power = s.positive("red_power", Dimension::power);
    c.hadamard.blue_power = s.positive("blue_power", Dimension::power);
    c.hadamard.blue_waist_x = s.positive("blue_waist_x", Dimension::length);
    c.hadamard.blue_waist_y = s.positive("blue_waist_y", Dimension::length);
    c.hadamard.atom_number_spread = s.non_negative("atom_number_spread", Dimension::dimensionless);
    s.finish();
  }
  {
    Section s(doc, "phase_gate");
    c.phase_gate.power = s.non_negative("power", Dimension::power);
    c.phase_gate.detuning = Frequency::from_angular(s.quantity("detuning", Dimension::frequency));
    c.phase_gate.target_phase = s.quantity("target_phase", Dimension::angle);
    c.phase_gate.reference_shift =
        Frequency::from_angular(s.positive("reference_shift", Dimension::frequency));
    s.finish();
  }
  {
    Section s(doc, "cz");
    c.cz.n = s.integer("n", 10);
    c.cz.distance = s.positive("distance", Dimension::length);
    if (s.is_null("blockade")) {
      s.raw("blockade");
    } else {
      c.cz.blockade = Frequency::from_angular(s.positive("blockade", Dimension::frequency));
    }
    c.cz.total_duration = s.positive("total_duration", Dimension::time);
    s.finish();
  }
  {
    Section s(doc, "decoherence");
    c.decoherence.surface_spin_flip = s.non_negative("surface_spin_flip", Dimension::rate);
    if (s.is_null("trap_light_scattering")) {
      s.raw("trap_light_scattering");
    } else {
      c.decoherence.trap_light_scattering = s.non_negative("trap_light_scattering", Dimension::rate);
    }
    c.decoherence.ac_stark_inhomogeneity = s.non_negative("ac_stark_inhomogeneity", Dimension::rate);
    const auto& extra = s.raw("extra");
    if (!extra.is_array()) throw ValidationError(s.field("extra"), "expected an array");
    for (std::size_t i = 0; i < extra.size(); ++i) {
      const std::string path = s.field("extra") + "[" + std::to_string(i) + "]";
      const auto& e = extra[i];
      if (!e.is_object() || !e.contains("name") || !e.at("name").is_string() ||
          e.at("name").get<std::string>().empty()) {
        throw ValidationError(path + ".name", "missing field");
      }
      for (const auto& [k, v] : e.items()) {
        if (k != "name" && k != "rate") throw ValidationError(path + "." + k, "unknown key");
      }
      const double rate = units::read_quantity(e, "rate", Dimension::rate, path);
      if (!(rate >= 0.0)) throw ValidationError(path + ".rate", "must be non-negative");
      c.decoherence.extra.push_back({e.at("name").get<std::string>(), rate});
    }
    s.finish();
  }
  {
    Section s(doc, "field");
    c.magic_field = s.non_negative("magic_field", Dimension::magnetic_field);
    s.finish();
  }
  {
    Section s(doc, "simulation");
    c.simulation.steps_per_period = s.positive("steps_per_period", Dimension::dimensionless);
    c.simulation.monte_carlo_trials = s.integer("monte_carlo_trials", 2);
    const auto& seed = s.raw("seed");
    if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<std::int64_t>() >= 0)) {
      throw ValidationError(s.field("seed"), "expected a non-negative integer");
    }
    c.simulation.seed = seed.get<std::uint64_t>();
    s.finish();
  }
  return c;
}

json ScenarioConfig::to_json() const {
  json j;
  j["schema"] = kConfigSchema;
  j["species"] = {{"path", species.path ? json(*species.path) : json(nullptr)},
                  {"isat_convention", to_string(species.isat_convention)}};
  j["chip"] = {{"mode_field_radius", q(chip.mode_field_radius, Dimension::length)},
               {"trench_width", q(chip.trench_width, Dimension::length)},
               {"pitch", q(chip.pitch, Dimension::length)},
               {"channels", count(chip.channels)},
               {"waveguide_wavelength", q(chip.waveguide_wavelength, Dimension::length)}};
  j["magnetic_trap"] = {
      {"axial_freq", q(magnetic_trap.spec.axial.angular(), Dimension::frequency)},
      {"radial_freq", q(magnetic_trap.spec.radial.angular(), Dimension::frequency)},
      {"atoms", count(magnetic_trap.atoms)},
      {"temperature", q(magnetic_trap.temperature, Dimension::temperature)}};
  j["dipole_trap"] = {{"power_each", q(dipole_trap.power_each, Dimension::power)},
                      {"wavelength", q(dipole_trap.wavelength, Dimension::length)},
                      {"facet_distance", q(dipole_trap.facet_distance, Dimension::length)},
                      {"interference_contrast", scalar(dipole_trap.interference_contrast)},
                      {"polarizability_model", traps::to_string(dipole_trap.model)},
                      {"loading_truncation", scalar(dipole_trap.loading_truncation)}};
  j["probe"] = {{"n_scattered_per_atom", scalar(probe.n_scattered_per_atom)},
                {"detection_efficiency", scalar(probe.detection_efficiency)},
                {"mirror_reflectivity", scalar(probe.mirror_reflectivity)},
                {"expected_atoms", count(probe.expected_atoms)}};
  j["fluorescence"] = {{"lens_diameter", q(fluorescence.lens_diameter, Dimension::length)},
                       {"lens_distance", q(fluorescence.lens_distance, Dimension::length)},
                       {"camera_qe", scalar(fluorescence.camera_qe)},
                       {"depump_probability", scalar(fluorescence.depump_probability)},
                       {"saturation", scalar(fluorescence.saturation)},
                       {"detuning", q(fluorescence.detuning.angular(), Dimension::frequency)},
                       {"collection_fraction", scalar(fluorescence.collection_fraction)}};
  j["rydberg"] = {{"anchor_n", scalar(rydberg.anchor_n)},
                  {"anchor_shift", q(rydberg.anchor_shift.angular(), Dimension::frequency)},
                  {"anchor_distance", q(rydberg.anchor_distance, Dimension::length)},
                  {"anchor_lifetime", q(rydberg.anchor_lifetime, Dimension::time)},
                  {"c6_exponent", scalar(rydberg.c6_exponent)},
                  {"lifetime_exponent", scalar(rydberg.lifetime_exponent)},
                  {"min_distance", q(rydberg.min_distance, Dimension::length)},
                  {"blockade_threshold", scalar(rydberg.blockade_threshold)}};
  j["hadamard"] = {
      {"n", scalar(hadamard.n)},
      {"atoms", count(hadamard.atoms)},
      {"extent", q(hadamard.extent, Dimension::length)},
      {"single_rabi", q(hadamard.single_rabi.angular(), Dimension::frequency)},
      {"intermediate_detuning", q(hadamard.intermediate_detuning.angular(), Dimension::frequency)},
      {"red_power", q(hadamard.red_power, Dimension::power)},
      {"blue_power", q(hadamard.blue_power, Dimension::power)},
      {"blue_waist_x", q(hadamard.blue_waist_x, Dimension::length)},
      {"blue_waist_y", q(hadamard.blue_waist_y, Dimension::length)},
      {"atom_number_spread", scalar(hadamard.atom_number_spread)}};
  j["phase_gate"] = {
      {"power", q(phase_gate.power, Dimension::power)},
      {"detuning", q(phase_gate.detuning.angular(), Dimension::frequency)},
      {"target_phase", q(phase_gate.target_phase, Dimension::angle)},
      {"reference_shift", q(phase_gate.reference_shift.angular(), Dimension::frequency)}};
  j["cz"] = {{"n", scalar(cz.n)},
             {"distance", q(cz.distance, Dimension::length)},
             {"blockade", cz.blockade ? q(cz.blockade->angular(), Dimension::frequency) : json(nullptr)},
             {"total_duration", q(cz.total_duration, Dimension::time)}};
  json extra = json::array();
  for (const auto& e : decoherence.extra) extra.push_back({{"name", e.name}, {"rate", q(e.rate, Dimension::rate)}});
  j["decoherence"] = {
      {"surface_spin_flip", q(decoherence.surface_spin_flip, Dimension::rate)},
      {"trap_light_scattering", decoherence.trap_light_scattering
                                    ? q(*decoherence.trap_light_scattering, Dimension::rate)
                                    : json(nullptr)},
      {"ac_stark_inhomogeneity", q(decoherence.ac_stark_inhomogeneity, Dimension::rate)},
      {"extra", extra}};
  j["field"] = {{"magic_field", q(magic_field, Dimension::magnetic_field)}};
  j["simulation"] = {{"steps_per_period", scalar(simulation.steps_per_period)},
                     {"monte_carlo_trials", count(static_cast<double>(simulation.monte_carlo_trials))},
                     {"seed", simulation.seed}};
  return j;
}

AtomSpecies ScenarioConfig::load_species() const {
  if (!species.path) return default_species();
  std::filesystem::path p(*species.path);
  if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
  try {
    return load_species_file(p);
  } catch (const ValidationError& e) {
    throw ValidationError("species.path", e.what());
  }
}

traps::DipoleTrapSpec ScenarioConfig::dipole_trap_spec(std::optional<double> contrast) const {
  traps::DipoleTrapSpec s;
  s.beam_power_each = dipole_trap.power_each;
  s.wavelength = dipole_trap.wavelength;
  s.mode_field_radius = chip.mode_field_radius;
  s.facet_distance = dipole_trap.facet_distance;
  s.interference_contrast = contrast.value_or(dipole_trap.interference_contrast);
  s.model = dipole_trap.model;
  return s;
}

std::string_view default_config_text() { return detail::kBundledDefaultConfig; }

json default_config_json() { return json::parse(default_config_text()); }

ScenarioConfig default_config() { return ScenarioConfig::from_json(default_config_json()); }

json read_json_file(const std::filesystem::path& path, const std::string& what) {
  std::ifstream in(path);
  if (!in) throw ValidationError(what, "cannot read '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(what, "'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

ScenarioConfig load_config_file(const std::filesystem::path& path) {
  auto cfg = ScenarioConfig::from_json(read_json_file(path, "config"));
  cfg.base_dir = path.parent_path();
  return cfg;
}

bool json_equivalent(const json& a, const json& b, double rel_tol) {
  if (a.is_number() && b.is_number()) {
    const double x = a.get<double>(), y = b.get<double>();
    return std::abs(x - y) <= rel_tol * std::max(std::abs(x), std::abs(y));
  }
  if (a.type() != b.type()) return false;
  if (a.is_object()) {
    if (a.size() != b.size()) return false;
    for (const auto& [k, v] : a.items()) {
      if (!b.contains(k) || !json_equivalent(v, b.at(k), rel_tol)) return false;
    }
    return true;
  }
  if (a.is_array()) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (!json_equivalent(a[i], b[i], rel_tol)) return false;
    return true;
  }
  return a == b;
}

namespace {

json* resolve(json& doc, const std::string& path) {
  json* node = &doc;
  std::size_t start = 0;
  while (start <= path.size()) {
    const auto dot = path.find('.', start);
    const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (key.empty() || !node->is_object() || !node->contains(key)) return nullptr;
    node = &(*node)[key];
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  return node;
}

}  // namespace

namespace {

// Integer slots stay integers when the new value is whole.
void assign_number(json& slot, double value) {
  if (slot.is_number_integer() && value >= 0.0 && value <= 9.0e15 && value == std::floor(value)) {
    slot = static_cast<std::uint64_t>(value);
  } else if (slot.is_number_integer() && value < 0.0 && value >= -9.0e15 && value == std::floor(value)) {
    slot = static_cast<std::int64_t>(value);
  } else {
    slot = value;
  }
}

}  // namespace

void set_parameter(json& doc, const std::string& path, double value) {
  json* node = resolve(doc, path);
  if (node == nullptr) throw ValidationError(path, "parameter path does not resolve in config");
  if (node->is_number()) {
    assign_number(*node, value);
  } else if (node->is_object() && node->contains("value") && node->at("value").is_number()) {
    assign_number((*node)["value"], value);
  } else {
    throw ValidationError(path, "parameter path does not name a numeric value");
  }
}

std::string parameter_unit(const json& doc, const std::string& path) {
  json copy = doc;
  json* node = resolve(copy, path);
  if (node == nullptr) throw ValidationError(path, "parameter path does not resolve in config");
  if (node->is_object() && node->contains("unit") && node->at("unit").is_string())
    return node->at("unit").get<std::string>();
  return "";
}

}  // namespace atomchip::scenario
