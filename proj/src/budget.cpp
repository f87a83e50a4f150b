#include "atomchip/budget.hpp"

#include <limits>

namespace atomchip::budget {

double DecoherenceBudget::rate(std::string_view name) const {
  for (const auto& e : entries)
    if (e.name == name) return e.rate;
  throw ValidationError("decoherence", "no rate named '" + std::string(name) + "'");
}

DecoherenceBudget decoherence_budget(const scenario::DecoherenceConfig& in,
                                     const traps::DipoleTrapResult& trap) {
  DecoherenceBudget b;
  b.entries.push_back({"surface_spin_flip", in.surface_spin_flip, false});
  if (in.trap_light_scattering) {
    b.entries.push_back({"trap_light_scattering", *in.trap_light_scattering, false});
  } else {
    b.entries.push_back({"trap_light_scattering", trap.photon_scattering_rate, true});
  }
  b.entries.push_back({"ac_stark_inhomogeneity", in.ac_stark_inhomogeneity, false});
  for (const auto& e : in.extra) b.entries.push_back({e.name, e.rate, false});

  for (const auto& e : b.entries) {
    if (!(e.rate >= 0.0)) throw ValidationError("decoherence." + e.name, "must be non-negative");
    b.total_rate += e.rate;
  }
  if (b.total_rate > 0.0) {
    b.coherence_time = 1.0 / b.total_rate;
  } else {
    b.coherence_time = std::numeric_limits<double>::infinity();
    b.advisory = "all decoherence rates are zero; coherence time is unbounded";
  }
  return b;
}

double gate_to_coherence_ratio(const DecoherenceBudget& budget, double gate_duration) {
  if (!(gate_duration > 0.0)) throw ValidationError("gate_duration", "must be positive");
  return budget.coherence_time / gate_duration;
}

}  // namespace atomchip::budget
