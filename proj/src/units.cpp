#include "atomchip/units.hpp"

#include <array>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "bundled_data.hpp"

namespace atomchip {
namespace units {

namespace {

struct UnitEntry {
  std::string_view tag;
  Dimension dim;
  double scale;
};

// Frequency entries scale ordinary Hz; the 2*pi is applied in to_si.
constexpr std::array kUnits{
    UnitEntry{"1", Dimension::dimensionless, 1.0},
    UnitEntry{"", Dimension::dimensionless, 1.0},
    UnitEntry{"count", Dimension::dimensionless, 1.0},
    UnitEntry{"%", Dimension::dimensionless, 1e-2},
    UnitEntry{"m", Dimension::length, 1.0},
    UnitEntry{"mm", Dimension::length, 1e-3},
    UnitEntry{"um", Dimension::length, 1e-6},
    UnitEntry{"nm", Dimension::length, 1e-9},
    UnitEntry{"kg", Dimension::mass, 1.0},
    UnitEntry{"u", Dimension::mass, 1.66053906660e-27},
    UnitEntry{"s", Dimension::time, 1.0},
    UnitEntry{"ms", Dimension::time, 1e-3},
    UnitEntry{"us", Dimension::time, 1e-6},
    UnitEntry{"ns", Dimension::time, 1e-9},
    UnitEntry{"Hz", Dimension::frequency, 1.0},
    UnitEntry{"kHz", Dimension::frequency, 1e3},
    UnitEntry{"MHz", Dimension::frequency, 1e6},
    UnitEntry{"GHz", Dimension::frequency, 1e9},
    UnitEntry{"rad/s", Dimension::frequency, 1.0 / kTwoPi},
    UnitEntry{"1/s", Dimension::rate, 1.0},
    UnitEntry{"W", Dimension::power, 1.0},
    UnitEntry{"mW", Dimension::power, 1e-3},
    UnitEntry{"uW", Dimension::power, 1e-6},
    UnitEntry{"nW", Dimension::power, 1e-9},
    UnitEntry{"W/m^2", Dimension::intensity, 1.0},
    UnitEntry{"mW/cm^2", Dimension::intensity, 10.0},
    UnitEntry{"K", Dimension::temperature, 1.0},
    UnitEntry{"mK", Dimension::temperature, 1e-3},
    UnitEntry{"uK", Dimension::temperature, 1e-6},
    UnitEntry{"T", Dimension::magnetic_field, 1.0},
    UnitEntry{"G", Dimension::magnetic_field, 1e-4},
    UnitEntry{"rad", Dimension::angle, 1.0},
    UnitEntry{"deg", Dimension::angle, std::numbers::pi / 180.0},
};

}  // namespace

std::string_view to_string(Dimension d) {
  switch (d) {
    case Dimension::dimensionless: return "dimensionless";
    case Dimension::length: return "length";
    case Dimension::mass: return "mass";
    case Dimension::time: return "time";
    case Dimension::frequency: return "frequency";
    case Dimension::rate: return "rate";
    case Dimension::power: return "power";
    case Dimension::intensity: return "intensity";
    case Dimension::temperature: return "temperature";
    case Dimension::magnetic_field: return "magnetic field";
    case Dimension::angle: return "angle";
  }
  return "?";
}

double to_si(double value, std::string_view unit, Dimension dim, const std::string& field) {
  for (const auto& e : kUnits) {
    if (e.tag != unit) continue;
    if (e.dim != dim) {
      throw ValidationError(field, "unit '" + std::string(unit) + "' is a " +
                                       std::string(to_string(e.dim)) + ", expected " +
                                       std::string(to_string(dim)));
    }
    const double si = value * e.scale;
    return dim == Dimension::frequency ? kTwoPi * si : si;
  }
  throw ValidationError(field, "unknown unit tag '" + std::string(unit) + "'");
}

std::string_view si_unit(Dimension dim) {
  switch (dim) {
    case Dimension::dimensionless: return "1";
    case Dimension::length: return "m";
    case Dimension::mass: return "kg";
    case Dimension::time: return "s";
    case Dimension::frequency: return "Hz";
    case Dimension::rate: return "1/s";
    case Dimension::power: return "W";
    case Dimension::intensity: return "W/m^2";
    case Dimension::temperature: return "K";
    case Dimension::magnetic_field: return "T";
    case Dimension::angle: return "rad";
  }
  return "1";
}

double read_quantity(const nlohmann::json& obj, const std::string& key, Dimension dim,
                     const std::string& path) {
  const std::string field = path.empty() ? key : path + "." + key;
  if (!obj.is_object() || !obj.contains(key)) {
    throw ValidationError(field, "missing field");
  }
  const auto& q = obj.at(key);
  if (!q.is_object()) {
    throw ValidationError(field, "expected {\"value\": number, \"unit\": string}");
  }
  if (!q.contains("value") || !q.at("value").is_number()) {
    throw ValidationError(field, "missing numeric 'value'");
  }
  if (!q.contains("unit") || !q.at("unit").is_string()) {
    throw ValidationError(field, "missing unit tag");
  }
  const double v = q.at("value").get<double>();
  if (!std::isfinite(v)) throw ValidationError(field, "value is not finite");
  return to_si(v, q.at("unit").get<std::string>(), dim, field);
}

nlohmann::json write_quantity(double si_value, Dimension dim) {
  const double v = dim == Dimension::frequency ? si_value / kTwoPi : si_value;
  return nlohmann::json{{"value", v}, {"unit", si_unit(dim)}};
}

}  // namespace units

std::string_view to_string(IsatConvention c) {
  return c == IsatConvention::cycling ? "cycling" : "isotropic";
}

IsatConvention isat_convention_from_string(std::string_view s) {
  if (s == "cycling") return IsatConvention::cycling;
  if (s == "isotropic") return IsatConvention::isotropic;
  throw ValidationError("isat_convention", "expected 'cycling' or 'isotropic', got '" +
                                               std::string(s) + "'");
}

const OpticalTransition& AtomSpecies::transition(std::string_view want) const {
  for (const auto& t : transitions) {
    if (t.label == want) return t;
  }
  throw ValidationError("transitions", label + " has no transition '" + std::string(want) + "'");
}

namespace {

double positive(double v, const std::string& field) {
  if (!(v > 0.0)) throw ValidationError(field, "must be positive");
  return v;
}

}  // namespace

AtomSpecies load_species(const nlohmann::json& record) {
  using units::Dimension;
  using units::read_quantity;

  if (!record.is_object()) throw ValidationError("species", "record must be a JSON object");

  AtomSpecies s;
  s.label = record.value("label", std::string{});
  if (s.label.empty()) throw ValidationError("label", "missing field");
  s.version = record.value("version", std::string{});
  s.mass = positive(read_quantity(record, "mass", Dimension::mass, ""), "mass");
  s.hyperfine_splitting = Frequency::from_angular(positive(
      read_quantity(record, "hyperfine_splitting", Dimension::frequency, ""),
      "hyperfine_splitting"));

  if (!record.contains("transitions") || !record.at("transitions").is_array() ||
      record.at("transitions").empty()) {
    throw ValidationError("transitions", "at least one transition is required");
  }
  const auto& list = record.at("transitions");
  for (std::size_t i = 0; i < list.size(); ++i) {
    const auto& t = list[i];
    const std::string path = "transitions[" + std::to_string(i) + "]";
    OpticalTransition ot;
    ot.label = t.value("label", std::string{});
    if (ot.label.empty()) throw ValidationError(path + ".label", "missing field");
    ot.wavelength = positive(read_quantity(t, "wavelength", Dimension::length, path),
                             path + ".wavelength");
    ot.gamma = Frequency::from_angular(
        positive(read_quantity(t, "gamma", Dimension::frequency, path), path + ".gamma"));
    ot.i_sat_cycling = positive(read_quantity(t, "i_sat_cycling", Dimension::intensity, path),
                                path + ".i_sat_cycling");
    ot.i_sat_isotropic =
        positive(read_quantity(t, "i_sat_isotropic", Dimension::intensity, path),
                 path + ".i_sat_isotropic");
    ot.relative_strength =
        positive(read_quantity(t, "relative_strength", Dimension::dimensionless, path),
                 path + ".relative_strength");
    s.transitions.push_back(std::move(ot));
  }
  return s;
}

AtomSpecies load_species_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("species", "cannot open '" + path.string() + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("species", "'" + path.string() + "' is not valid JSON: " + e.what());
  }
  return load_species(j);
}

nlohmann::json species_to_json(const AtomSpecies& s) {
  using units::Dimension;
  using units::write_quantity;
  nlohmann::json j;
  j["schema"] = "atomchip.species/1";
  j["version"] = s.version;
  j["label"] = s.label;
  j["mass"] = write_quantity(s.mass, Dimension::mass);
  j["hyperfine_splitting"] = write_quantity(s.hyperfine_splitting.angular(), Dimension::frequency);
  j["transitions"] = nlohmann::json::array();
  for (const auto& t : s.transitions) {
    j["transitions"].push_back({
        {"label", t.label},
        {"wavelength", write_quantity(t.wavelength, Dimension::length)},
        {"gamma", write_quantity(t.gamma.angular(), Dimension::frequency)},
        {"i_sat_cycling", write_quantity(t.i_sat_cycling, Dimension::intensity)},
        {"i_sat_isotropic", write_quantity(t.i_sat_isotropic, Dimension::intensity)},
        {"relative_strength", write_quantity(t.relative_strength, Dimension::dimensionless)},
    });
  }
  return j;
}

std::string_view bundled_species_record() { return detail::kBundledRb87; }

AtomSpecies default_species() {
  if (const char* env = std::getenv("ATOMCHIP_DATA"); env != nullptr && *env != '\0') {
    std::filesystem::path p(env);
    if (std::filesystem::is_directory(p)) p /= "rb87.json";
    return load_species_file(p);
  }
  return load_species(nlohmann::json::parse(bundled_species_record()));
}

}  // namespace atomchip
