#include <doctest.h>

#include "atomchip/traps.hpp"
#include "test_support.hpp"

using namespace atomchip;
using namespace atomchip::traps;

namespace {

const AtomSpecies& rb() {
  static const AtomSpecies s = default_species();
  return s;
}

DipoleTrapSpec chip_trap(double contrast = 0.0, PolarizabilityModel m = PolarizabilityModel::d1_d2_full) {
  return {80e-6, 830e-9, 2.2e-6, 8e-6, contrast, m};
}

ThermalCloud design_cloud() {
  return thermal_cloud({Frequency::from_hz(20.0), Frequency::from_hz(1e3)}, 1e5, 2e-6, rb());
}

// Trap frequency from a central second difference of the implemented potential.
double numeric_frequency(const DipoleTrapSpec& s, bool radial, double h) {
  auto u = [&](double x) { return radial ? dipole_potential(s, rb(), x, 0.0) : dipole_potential(s, rb(), 0.0, x); };
  const double curvature = (u(h) - 2.0 * u(0.0) + u(-h)) / (h * h);
  return std::sqrt(curvature / rb().mass) / kTwoPi;
}

}  // namespace

TEST_CASE("thermal cloud from the magnetic trap") {
  const auto c = design_cloud();
  CHECK(c.length_1e2() == doctest::Approx(220e-6).epsilon(0.05));
  CHECK(c.sigma_radial == doctest::Approx(2.2e-6).epsilon(0.05));
  CHECK(c.peak_linear_density == doctest::Approx(360e6).epsilon(0.05));

  // independent evaluation: sigma = sqrt(kT/m)/omega, n = N / (sqrt(2 pi) sigma)
  const double v = std::sqrt(kPhys.kB * 2e-6 / rb().mass);
  CHECK(c.sigma_axial == doctest::Approx(v / (kTwoPi * 20.0)).epsilon(1e-12));
  CHECK(c.peak_linear_density == doctest::Approx(1e5 / (std::sqrt(kTwoPi) * c.sigma_axial)).epsilon(1e-12));

  const auto hot = thermal_cloud({Frequency::from_hz(20.0), Frequency::from_hz(1e3)}, 1e5, 8e-6, rb());
  CHECK(hot.sigma_axial == doctest::Approx(2.0 * c.sigma_axial).epsilon(1e-12));
  CHECK(hot.sigma_radial == doctest::Approx(2.0 * c.sigma_radial).epsilon(1e-12));

  const auto round = thermal_cloud({Frequency::from_hz(300.0), Frequency::from_hz(300.0)}, 1e4, 1e-6, rb());
  CHECK(round.sigma_axial == round.sigma_radial);

  CHECK_THROWS_WITH_AS(thermal_cloud({Frequency::from_hz(20.0), Frequency::from_hz(1e3)}, 1e5, 0.0, rb()),
                       doctest::Contains("temperature"), ValidationError);
}

TEST_CASE("facet trap frequencies") {
  const auto t0 = dipole_trap(chip_trap(0.0), rb());
  CHECK(t0.axial.hz() == doctest::Approx(300.0).epsilon(0.35));
  CHECK(t0.radial.hz() == doctest::Approx(6.6e3).epsilon(0.35));
  const auto t1 = dipole_trap(chip_trap(1.0), rb());
  CHECK(t1.axial.hz() == doctest::Approx(120e3).epsilon(0.35));
  CHECK(t1.radial.hz() == doctest::Approx(9e3).epsilon(0.35));
  CHECK(t0.photon_scattering_rate <= 1.0);
  CHECK(t1.photon_scattering_rate <= 1.0);
}

TEST_CASE("analytic curvature matches numeric second differences") {
  for (double contrast : {0.0, 0.5, 1.0}) {
    for (auto model : {PolarizabilityModel::two_level_rwa, PolarizabilityModel::d1_d2_full}) {
      const auto s = chip_trap(contrast, model);
      const auto t = dipole_trap(s, rb());
      CHECK(numeric_frequency(s, true, 2e-9) == doctest::Approx(t.radial.hz()).epsilon(0.01));
      const double h = contrast > 0.0 ? 1e-10 : 2e-9;
      CHECK(numeric_frequency(s, false, h) == doctest::Approx(t.axial.hz()).epsilon(0.01));
      CHECK(-dipole_potential(s, rb(), 0.0, 0.0) == doctest::Approx(t.depth).epsilon(1e-12));
    }
  }
}

TEST_CASE("power sweep scalings") {
  auto s = chip_trap();
  const auto ref = dipole_trap(s, rb());
  for (double k : {0.1, 0.5, 2.0, 7.0}) {
    s.beam_power_each = 80e-6 * k;
    const auto t = dipole_trap(s, rb());
    CHECK(t.depth == doctest::Approx(k * ref.depth).epsilon(1e-12));
    CHECK(t.axial.hz() == doctest::Approx(std::sqrt(k) * ref.axial.hz()).epsilon(1e-12));
    CHECK(t.radial.hz() == doctest::Approx(std::sqrt(k) * ref.radial.hz()).epsilon(1e-12));
    CHECK(t.photon_scattering_rate == doctest::Approx(k * ref.photon_scattering_rate).epsilon(1e-12));
  }
}

TEST_CASE("polarizability model ordering at 830 nm") {
  const double full = dipole_trap(chip_trap(0.0, PolarizabilityModel::d1_d2_full), rb()).depth;
  const double two = dipole_trap(chip_trap(0.0, PolarizabilityModel::two_level_full), rb()).depth;
  const double rwa = dipole_trap(chip_trap(0.0, PolarizabilityModel::two_level_rwa), rb()).depth;
  CHECK(full > two);
  CHECK(two > rwa);
}

TEST_CASE("scattering to depth ratio is the weighted Gamma / Delta") {
  const auto t = dipole_trap(chip_trap(), rb());
  // Independent per-line weights from the two-level light shift with both terms.
  const double wl = kTwoPi * kPhys.c / 830e-9;
  double weight_sum = 0.0;
  double ratio = 0.0;
  for (const auto& tr : rb().transitions) {
    const double w0 = kTwoPi * kPhys.c / tr.wavelength;
    const double g = tr.gamma.angular();
    const double u = tr.relative_strength * g / (w0 * w0 * w0) * (1.0 / (w0 - wl) + 1.0 / (w0 + wl));
    weight_sum += u;
    ratio += u * g / (w0 - wl);
  }
  ratio /= weight_sum;
  CHECK(t.photon_scattering_rate / (t.depth / kPhys.hbar) == doctest::Approx(ratio).epsilon(0.05));
}

TEST_CASE("blue-detuned light is not a trap") {
  auto s = chip_trap();
  s.wavelength = 770e-9;
  CHECK_THROWS_WITH_AS(dipole_trap(s, rb()), doctest::Contains("not a trap"), ValidationError);
  s.wavelength = 790e-9;  // between the D lines
  CHECK_THROWS_WITH_AS(dipole_trap(s, rb()), doctest::Contains("not a trap"), ValidationError);
  s.model = PolarizabilityModel::two_level_full;
  CHECK_NOTHROW(dipole_trap(s, rb()));
}

TEST_CASE("loading from the cloud") {
  const auto c = design_cloud();
  const auto t = dipole_trap(chip_trap(), rb());
  const double n = loading_estimate(c, t, 1.0);
  CHECK(n >= 750.0);
  CHECK(n <= 3000.0);

  DipoleTrapResult empty = t;
  empty.depth = 0.0;
  CHECK(loading_estimate(c, empty, 1.0) == 0.0);

  ThermalCloud dense = c;
  dense.peak_linear_density *= 2.0;
  CHECK(loading_estimate(dense, t, 1.0) == doctest::Approx(2.0 * n).epsilon(1e-14));

  // a stricter truncation never captures more atoms
  CHECK(loading_estimate(c, t, 2.0) <= n);
}
