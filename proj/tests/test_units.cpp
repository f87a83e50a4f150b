#include <doctest.h>

#include <cstdlib>
#include <random>

#include "atomchip/units.hpp"
#include "test_support.hpp"

using namespace atomchip;
using atomchip::test::rel_close;

namespace {

nlohmann::json rb87_record() { return nlohmann::json::parse(bundled_species_record()); }

}  // namespace

TEST_CASE("bundled Rb-87 record") {
  const AtomSpecies rb = load_species(rb87_record());
  const auto& d2 = rb.transition("D2");
  CHECK(d2.wavelength == doctest::Approx(7.80241e-7).epsilon(1e-6));
  CHECK(d2.gamma.hz() == doctest::Approx(6.07e6).epsilon(0.01));
  CHECK(d2.i_sat_cycling == doctest::Approx(16.7).epsilon(0.01));
  // 87 atomic mass units
  CHECK(rb.mass / 1.66053906660e-27 == doctest::Approx(86.909).epsilon(1e-4));
  CHECK(rb.hyperfine_splitting.hz() == doctest::Approx(6.8347e9).epsilon(1e-4));
  CHECK_THROWS_AS(rb.transition("D3"), ValidationError);
}

TEST_CASE("species file on disk matches the compiled-in copy") {
  const char* dir = std::getenv("ATOMCHIP_TEST_DATA");
  if (dir == nullptr) return;
  CHECK(load_species_file(std::filesystem::path(dir) / "species" / "rb87.json") ==
        load_species(rb87_record()));
}

TEST_CASE("missing fields are named") {
  for (const char* field : {"mass", "transitions", "hyperfine_splitting"}) {
    auto rec = rb87_record();
    rec.erase(field);
    try {
      load_species(rec);
      FAIL("accepted a record without " << field);
    } catch (const ValidationError& e) {
      CHECK(std::string(e.what()).find(field) != std::string::npos);
    }
  }
  auto rec = rb87_record();
  rec["transitions"][0].erase("gamma");
  CHECK_THROWS_WITH_AS(load_species(rec), doctest::Contains("gamma"), ValidationError);
}

TEST_CASE("bad unit tags") {
  auto rec = rb87_record();
  rec["mass"]["unit"] = "MHz";
  CHECK_THROWS_WITH_AS(load_species(rec), doctest::Contains("mass"), ValidationError);
  rec = rb87_record();
  rec["transitions"][0]["wavelength"]["unit"] = "furlong";
  CHECK_THROWS_WITH_AS(load_species(rec), doctest::Contains("furlong"), ValidationError);
  rec = rb87_record();
  rec["mass"]["value"] = -1.0;
  CHECK_THROWS_AS(load_species(rec), ValidationError);
}

TEST_CASE("gamma tagged in Hz is stored as angular") {
  auto rec = rb87_record();
  rec["transitions"][0]["gamma"] = {{"value", 6.07e6}, {"unit", "Hz"}};
  const auto rb = load_species(rec);
  CHECK(rb.transition("D2").gamma.angular() == doctest::Approx(kTwoPi * 6.07e6).epsilon(1e-15));
}

TEST_CASE("frequency round trip Hz -> rad/s -> Hz") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 10000; ++i) {
    const double hz = test::log_uniform(rng, 1e-3, 1e16) * (i % 2 ? 1.0 : -1.0);
    const double back = Frequency::from_angular(Frequency::from_hz(hz).angular()).hz();
    REQUIRE(rel_close(back, hz, 1e-12));
  }
  CHECK(units::to_si(1.0, "rad/s", units::Dimension::frequency, "f") == doctest::Approx(1.0));
  CHECK(units::to_si(1.0, "kHz", units::Dimension::frequency, "f") ==
        doctest::Approx(kTwoPi * 1e3));
  // rates carry no 2 pi
  CHECK(units::to_si(3.0, "1/s", units::Dimension::rate, "r") == 3.0);
}

TEST_CASE("conversion audit: Hz in, Hz out") {
  auto rec = rb87_record();
  rec["hyperfine_splitting"] = {{"value", 6834682610.90429}, {"unit", "Hz"}};
  rec["transitions"][0]["gamma"] = {{"value", 6066600.0}, {"unit", "Hz"}};
  rec["transitions"][1]["gamma"] = {{"value", 5750000.0}, {"unit", "Hz"}};
  const auto out = species_to_json(load_species(rec));
  CHECK(out["hyperfine_splitting"]["unit"] == "Hz");
  CHECK(out["hyperfine_splitting"]["value"].get<double>() ==
        doctest::Approx(6834682610.90429).epsilon(1e-14));
  CHECK(out["transitions"][0]["gamma"]["value"].get<double>() ==
        doctest::Approx(6066600.0).epsilon(1e-14));
  CHECK(out["transitions"][1]["gamma"]["value"].get<double>() ==
        doctest::Approx(5750000.0).epsilon(1e-14));
  CHECK(load_species(out) == load_species(rec));
}

TEST_CASE("quantity parsing errors name the path") {
  const nlohmann::json obj = {{"w", {{"value", 2.2}, {"unit", "um"}}}, {"bare", 2.2}};
  CHECK(units::read_quantity(obj, "w", units::Dimension::length, "chip.w") ==
        doctest::Approx(2.2e-6));
  CHECK_THROWS_WITH_AS(units::read_quantity(obj, "bare", units::Dimension::length, "chip.bare"),
                       doctest::Contains("chip.bare"), ValidationError);
  CHECK_THROWS_WITH_AS(units::read_quantity(obj, "w", units::Dimension::time, "chip.w"),
                       doctest::Contains("chip.w"), ValidationError);
}
