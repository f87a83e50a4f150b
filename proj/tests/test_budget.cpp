#include <doctest.h>

#include <cmath>

#include "atomchip/budget.hpp"

using namespace atomchip;
using namespace atomchip::budget;

namespace {

scenario::DecoherenceConfig rates(double a, double b, double c) {
  scenario::DecoherenceConfig d;
  d.surface_spin_flip = a;
  d.trap_light_scattering = b;
  d.ac_stark_inhomogeneity = c;
  return d;
}

}  // namespace

TEST_CASE("coherence time from the listed rates") {
  const auto b = decoherence_budget(rates(0.5, 1.0, 1.0), {});
  CHECK(b.total_rate == 2.5);
  CHECK(b.coherence_time == 0.4);
  CHECK_FALSE(b.advisory.has_value());
  CHECK(b.rate("surface_spin_flip") == 0.5);
  CHECK_THROWS_AS(b.rate("cosmic_rays"), ValidationError);
}

TEST_CASE("trap scattering filled in from the trap") {
  auto cfg = rates(0.5, 0.0, 1.0);
  cfg.trap_light_scattering.reset();
  traps::DipoleTrapResult trap;
  trap.photon_scattering_rate = 0.25;
  const auto b = decoherence_budget(cfg, trap);
  CHECK(b.total_rate == doctest::Approx(1.75));
  CHECK(b.entries[1].computed);
}

TEST_CASE("all-zero rates are an advisory, not an error") {
  const auto b = decoherence_budget(rates(0.0, 0.0, 0.0), {});
  CHECK(std::isinf(b.coherence_time));
  CHECK(b.advisory.has_value());
}

TEST_CASE("extra entries only shorten the coherence time") {
  auto cfg = rates(0.5, 1.0, 1.0);
  double prev = decoherence_budget(cfg, {}).coherence_time;
  for (double extra : {1e-9, 0.01, 3.0}) {
    cfg.extra.push_back({"extra", extra});
    const double t = decoherence_budget(cfg, {}).coherence_time;
    CHECK(t < prev);
    prev = t;
  }
  cfg.extra.push_back({"bad", -1.0});
  CHECK_THROWS_WITH_AS(decoherence_budget(cfg, {}), doctest::Contains("decoherence.bad"), ValidationError);
}

TEST_CASE("gate to coherence ratios") {
  const auto b = decoherence_budget(rates(0.5, 1.0, 1.0), {});
  const double phase = std::log10(gate_to_coherence_ratio(b, 1e-6));
  CHECK(phase == doctest::Approx(5.6).epsilon(0.01));
  CHECK(phase >= 5.0);
  CHECK(phase <= 6.0);
  CHECK(std::log10(gate_to_coherence_ratio(b, 25e-9)) == doctest::Approx(7.2).epsilon(0.01));
  CHECK(gate_to_coherence_ratio(b, b.coherence_time) == 1.0);
  CHECK_THROWS_AS(gate_to_coherence_ratio(b, 0.0), ValidationError);
}
