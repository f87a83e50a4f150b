// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>

#include "atomchip/detection.hpp"
#include "atomchip/gates.hpp"
#include "atomchip/optimize.hpp"
#include "atomchip/report.hpp"
#include "atomchip/rydberg.hpp"
#include "atomchip/traps.hpp"

using namespace atomchip;

namespace {

int failures = 0;

void verdict(int id, const std::string& name, bool ok, const std::string& detail) {
  std::printf("[%s] %2d %-22s %s\n", ok ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
  if (!ok) ++failures;
}

bool within(double v, double target, double rel) { return std::abs(v - target) <= rel * std::abs(target); }
bool in_range(double v, double lo, double hi) { return v >= lo && v <= hi; }

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

}  // namespace

int main() {
  const auto cfg = scenario::default_config();
  const auto species = cfg.load_species();

  const auto t0 = std::chrono::steady_clock::now();
  const auto rep = report::assemble_report(cfg);
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  auto val = [&](const char* id) { return rep.row(id).value.value_or(std::nan("")); };

  {  // 1
    const double len = val("cloud.length_1e2"), sig = val("cloud.sigma_radial"),
                 dens = val("cloud.peak_linear_density");
    verdict(1, "thermal cloud",
            within(len, 220.0, 0.05) && within(sig, 2.2, 0.05) && within(dens, 360.0, 0.05),
            fmt("length %.4g um, sigma %.4g um, density %.4g /um (targets 220, 2.2, 360 +-5%%)", len, sig, dens));
  }
  {  // 2
    const auto c0 = traps::dipole_trap(cfg.dipole_trap_spec(0.0), species);
    const auto c1 = traps::dipole_trap(cfg.dipole_trap_spec(1.0), species);
    const bool ok = cfg.dipole_trap.model == traps::PolarizabilityModel::d1_d2_full &&
                    within(c0.axial.hz(), 300.0, 0.35) && within(c0.radial.hz(), 6.6e3, 0.35) &&
                    within(c1.axial.hz(), 120e3, 0.35) && within(c1.radial.hz(), 9e3, 0.35) &&
                    c0.photon_scattering_rate <= 1.0 && c1.photon_scattering_rate <= 1.0;
    verdict(2, "dipole trap", ok,
            fmt("(%.3g, %.3g) kHz at contrast 0, (%.3g, %.3g) kHz at contrast 1, scattering %.3g /s",
                c0.axial.hz() / 1e3, c0.radial.hz() / 1e3, c1.axial.hz() / 1e3, c1.radial.hz() / 1e3,
                c1.photon_scattering_rate));
  }
  {  // 3
    const double n = val("trap.loaded_atoms");
    verdict(3, "loading", in_range(n, 750.0, 3000.0), fmt("%.1f atoms (band 750-3000)", n));
  }
  {  // 4
    const double snr = val("detection.snr_absorption");
    const auto& d2 = species.transition("D2");
    const detection::ProbeSetup probe{detection::effective_area(cfg.chip.mode_field_radius),
                                      detection::scattering_cross_section(species, d2, cfg.species.isat_convention),
                                      100.0, 0.2};
    const double gain = detection::cavity_enhancement(probe, 0.9).snr_single_atom /
                        detection::atom_number_uncertainty(probe).snr_single_atom;
    const double zr = val("detection.rayleigh_length");
    const double counts = detection::fluorescence_readout(0.01, 0.5, 6000.0).counts;
    const double frac = detection::solid_angle_fraction(35e-3, 100e-3);
    const bool ok = in_range(snr, 0.7, 1.3) && within(gain, 1.0 / std::sqrt(0.1), 1e-12) &&
                    in_range(zr, 19.0, 21.0) && counts == 30.0 && in_range(frac, 0.006, 0.011);
    verdict(4, "detection", ok,
            fmt("SNR %.3g, R=0.9 gain %.6g, z_R %.4g um, counts %.6g, collection %.3g%%", snr, gain, zr, counts,
                100.0 * frac));
  }
  {  // 5
    std::mt19937_64 rng(20240601);
    auto lu = [&](double lo, double hi) {
      return std::exp(std::uniform_real_distribution<double>(std::log(lo), std::log(hi))(rng));
    };
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
      const detection::ProbeSetup p{lu(2e-12, 5e-11), lu(1e-13, 5e-13), lu(20.0, 2000.0), lu(0.05, 1.0)};
      const double closed = detection::atom_number_uncertainty(p).sigma_n_atoms;
      const auto mc = detection::simulate_absorption_readout(p, 0.0, 1000000, 1000 + i);
      worst = std::max(worst, std::abs(mc.sigma_estimate / closed - 1.0));
    }
    verdict(5, "shot-noise oracle", worst <= 0.03,
            fmt("worst relative deviation %.3g%% over 10 random sets, 1e6 trials each (limit 3%%)", 100.0 * worst));
  }
  {  // 6
    const double shift = val("rydberg.blockade_shift_cz");
    const double oracle = 90.0 * std::pow(100.0 / 40.0, 11.0) * std::pow(2.0 / 10.0, 6.0);
    verdict(6, "blockade consistency", shift >= 50.0 && within(shift, oracle, 1e-6),
            fmt("%.5g MHz at n=100, 10 um (bound 50 MHz, expected %.5g)", shift, oracle));
  }
  {  // 7
    const rydberg::CollectiveQubit q{cfg.hadamard.atoms, cfg.hadamard.extent, 0.0};
    const auto model = rydberg::RydbergScalingModel::calibrated(cfg.rydberg.anchor_n, cfg.rydberg.anchor_shift,
                                                                cfg.rydberg.anchor_distance,
                                                                cfg.rydberg.anchor_lifetime);
    const auto level = rydberg::rydberg_level(model, cfg.hadamard.n);
    const auto sim = gates::simulate_hadamard(q, cfg.hadamard.single_rabi,
                                              rydberg::blockade_shift(level, cfg.hadamard.extent), level);
    verdict(7, "Hadamard timing",
            in_range(sim.completion_time, 20e-9, 28e-9) &&
                sim.final_double_excitation <= 1.5 * sim.perturbative_estimate,
            fmt("pi/2 completion %.4g ns, double excitation %.3g (limit %.3g)", sim.completion_time * 1e9,
                sim.final_double_excitation, 1.5 * sim.perturbative_estimate));
  }
  {  // 8
    const double dur = val("gates.phase_gate_duration");
    const double shift = val("gates.light_shift");
    const double photons = val("gates.phase_gate_photons");
    verdict(8, "phase gate",
            in_range(dur, 1.0, 1.1) && in_range(shift, 0.12, 0.48) && in_range(photons, 0.0005, 0.0045),
            fmt("duration %.4g us, shift %.4g MHz, photons %.4g per gate", dur, shift, photons));
  }
  {  // 9
    const double slope = val("gates.cz_scaling_exponent");
    const double spot = gates::minimum_gate_error(Frequency::from_angular(1e4), 1.0);
    const bool ok = std::abs(slope + 2.0 / 3.0) <= 0.1 && within(spot, 3.0 / std::pow(1e4, 2.0 / 3.0), 1e-14) &&
                    within(spot, 6.46e-3, 1e-3);
    verdict(9, "error-law scaling", ok,
            fmt("fitted slope %.4g over B tau 1e3-1e6 (target -2/3 +-0.1), 3(B tau)^-2/3 at 1e4 = %.4g", slope, spot));
  }
  {  // 10
    const double tc = val("budget.coherence_time");
    const double ratio = val("budget.phase_gate_ratio_log10");
    verdict(10, "decoherence", tc == 1.0 / 2.5 && in_range(ratio, 5.0, 6.0),
            fmt("coherence %.9g s, phase-gate ratio log10 %.4g (band 5-6)", tc, ratio));
  }
  {  // 11
    const auto again = report::assemble_report(cfg);
    const bool same = report::to_text(again) == report::to_text(rep) &&
                      report::to_json(again) == report::to_json(rep) && report::to_csv(again) == report::to_csv(rep);
    verdict(11, "determinism", same && elapsed < 60.0 && rep.passed(),
            fmt("repeat run %s, full pipeline %.3g s (limit 60 s), %zu rows, %zu failing", same ? "identical" : "differs",
                elapsed, rep.rows.size(), rep.count(report::Status::fail)));
  }

  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
