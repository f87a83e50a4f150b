#pragma once

// Physical constants, unit-tagged quantity parsing and atomic species data.
//
// Every frequency held inside the library is angular (rad/s). Ordinary
// frequencies (Hz) only appear at the I/O boundary, where Frequency::from_hz
// and Frequency::hz() do the single 2*pi conversion.

#include <compare>
#include <filesystem>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace atomchip {

/// Raised for malformed input: missing fields, bad units, out-of-range values.
/// what() always names the offending field.
class ValidationError : public std::invalid_argument {
 public:
  ValidationError(std::string field, const std::string& message)
      : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct PhysConstants {
  double hbar;  // J s
  double h;     // J s
  double kB;    // J/K
  double c;     // m/s
  double mu_B;  // J/T
};

// CODATA 2018 exact/recommended values.
inline constexpr PhysConstants kPhys{
    6.62607015e-34 / kTwoPi,
    6.62607015e-34,
    1.380649e-23,
    299792458.0,
    9.2740100783e-24,
};

/// Angular frequency. Construct from Hz or rad/s explicitly; there is no
/// implicit conversion from double.
class Frequency {
 public:
  constexpr Frequency() = default;

  static constexpr Frequency from_hz(double hz) { return Frequency(kTwoPi * hz); }
  static constexpr Frequency from_angular(double rad_per_s) { return Frequency(rad_per_s); }

  constexpr double angular() const { return angular_; }
  constexpr double hz() const { return angular_ / kTwoPi; }

  constexpr Frequency operator-() const { return Frequency(-angular_); }
  constexpr Frequency operator+(Frequency o) const { return Frequency(angular_ + o.angular_); }
  constexpr Frequency operator-(Frequency o) const { return Frequency(angular_ - o.angular_); }
  constexpr Frequency operator*(double k) const { return Frequency(angular_ * k); }
  constexpr Frequency operator/(double k) const { return Frequency(angular_ / k); }
  constexpr double operator/(Frequency o) const { return angular_ / o.angular_; }
  friend constexpr Frequency operator*(double k, Frequency f) { return f * k; }

  constexpr auto operator<=>(const Frequency&) const = default;

 private:
  explicit constexpr Frequency(double w) : angular_(w) {}
  double angular_ = 0.0;
};

namespace units {

enum class Dimension {
  dimensionless,
  length,
  mass,
  time,
  frequency,  // value is returned as angular frequency in rad/s
  rate,       // events per second, no 2*pi
  power,
  intensity,
  temperature,
  magnetic_field,
  angle,
};

std::string_view to_string(Dimension d);

/// Converts value expressed in `unit` to SI. Frequencies come back in rad/s.
/// Throws ValidationError naming `field` if the unit is unknown or belongs to
/// another dimension.
double to_si(double value, std::string_view unit, Dimension dim, const std::string& field);

/// Canonical SI unit tag used when serializing (frequency serializes as Hz).
std::string_view si_unit(Dimension dim);

/// Reads {"value": x, "unit": "..."} from `obj[key]`.
double read_quantity(const nlohmann::json& obj, const std::string& key, Dimension dim,
                     const std::string& path);

/// Writes an SI value as a {"value", "unit"} pair. Frequencies must be passed
/// as angular and are written out in Hz.
nlohmann::json write_quantity(double si_value, Dimension dim);

}  // namespace units

enum class IsatConvention { cycling, isotropic };

std::string_view to_string(IsatConvention c);
IsatConvention isat_convention_from_string(std::string_view s);

struct OpticalTransition {
  double wavelength = 0.0;  // m
  Frequency gamma;          // natural linewidth (FWHM)
  double i_sat_cycling = 0.0;    // W/m^2, sigma+- cycling transition
  double i_sat_isotropic = 0.0;  // W/m^2, isotropic pump
  std::string label;
  double relative_strength = 1.0;

  double i_sat(IsatConvention c = IsatConvention::cycling) const {
    return c == IsatConvention::cycling ? i_sat_cycling : i_sat_isotropic;
  }
  Frequency optical_frequency() const {
    return Frequency::from_angular(kTwoPi * kPhys.c / wavelength);
  }

  bool operator==(const OpticalTransition&) const = default;
};

struct AtomSpecies {
  double mass = 0.0;  // kg
  std::vector<OpticalTransition> transitions;
  Frequency hyperfine_splitting;  // ground state
  std::string label;
  std::string version;

  /// Throws ValidationError when no transition carries this label.
  const OpticalTransition& transition(std::string_view label) const;

  bool operator==(const AtomSpecies&) const = default;
};

AtomSpecies load_species(const nlohmann::json& record);
AtomSpecies load_species_file(const std::filesystem::path& path);

/// Writes the species back as a unit-tagged record (frequencies in Hz).
nlohmann::json species_to_json(const AtomSpecies& species);

/// The bundled Rb-87 record compiled into the library.
std::string_view bundled_species_record();

/// Rb-87 from ATOMCHIP_DATA when set (a record file, or a directory holding
/// rb87.json), otherwise the bundled record.
AtomSpecies default_species();

}  // namespace atomchip
