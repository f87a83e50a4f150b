#include <doctest.h>

#include <cmath>

#include "atomchip/scenario.hpp"
#include "atomchip/sweep.hpp"

using namespace atomchip;
using namespace atomchip::sweep;

TEST_CASE("sweep grids") {
  SweepSpec lin{"dipole_trap.power_each", 10.0, 30.0, 3, Scale::linear, "trap.depth"};
  CHECK(lin.values() == std::vector<double>{10.0, 20.0, 30.0});
  SweepSpec lg{"dipole_trap.power_each", 1.0, 100.0, 3, Scale::log, "trap.depth"};
  const auto v = lg.values();
  CHECK(v[1] == doctest::Approx(10.0).epsilon(1e-14));
  CHECK(v.back() == 100.0);

  SweepSpec bad = lin;
  bad.points = 1;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = lg;
  bad.min = 0.0;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  CHECK_THROWS_AS(scale_from_string("cubic"), ValidationError);
}

TEST_CASE("two-point sweep gives two rows") {
  const auto r = run_sweep(scenario::default_config_json(),
                           {"magnetic_trap.temperature", 1.0, 4.0, 2, Scale::linear, "cloud.sigma_radial"});
  REQUIRE(r.points.size() == 2);
  CHECK(r.points[1].objective == doctest::Approx(2.0 * r.points[0].objective).epsilon(1e-8));
  CHECK(r.parameter_unit == "uK");
  const auto csv = to_csv(r);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
}

TEST_CASE("trap power sweep follows the square-root law") {
  const auto r = run_sweep(scenario::default_config_json(),
                           {"dipole_trap.power_each", 20.0, 320.0, 5, Scale::log, "trap.radial_freq_contrast0"}, 2);
  CHECK(r.loglog_slope == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(gnuplot_script(r, "sweep.csv").find("logscale") != std::string::npos);
}

TEST_CASE("results do not depend on the number of threads") {
  const SweepSpec spec{"probe.n_scattered_per_atom", 10.0, 1000.0, 7, Scale::log, "detection.snr_absorption"};
  const auto one = to_csv(run_sweep(scenario::default_config_json(), spec, 1));
  const auto four = to_csv(run_sweep(scenario::default_config_json(), spec, 4));
  const auto many = to_csv(run_sweep(scenario::default_config_json(), spec, 16));
  CHECK(one == four);
  CHECK(one == many);
}

TEST_CASE("sweep errors") {
  const auto doc = scenario::default_config_json();
  CHECK_THROWS_AS(run_sweep(doc, {"dipole_trap.power_each", 1.0, 2.0, 2, Scale::linear, "no.claim"}),
                  ValidationError);
  CHECK_THROWS_WITH(run_sweep(doc, {"dipole_trap.volume", 1.0, 2.0, 2, Scale::linear, "trap.depth"}),
                    doctest::Contains("dipole_trap.volume"));
  CHECK_THROWS_AS(run_sweep(doc, {"dipole_trap.power_each", 1.0, 2.0, 2, Scale::linear, "trap.depth"}, 0),
                  ValidationError);
}
