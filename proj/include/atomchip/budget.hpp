#pragma once

// Decoherence bookkeeping for the stored qubit.

#include <optional>
#include <string>
#include <vector>

#include "atomchip/scenario.hpp"
#include "atomchip/traps.hpp"

namespace atomchip::budget {

struct RateEntry {
  std::string name;
  double rate = 0.0;  // 1/s
  bool computed = false;  // filled in from the trap model rather than given
};

struct DecoherenceBudget {
  std::vector<RateEntry> entries;
  double total_rate = 0.0;
  double coherence_time = 0.0;  // s; infinite when every rate is zero
  std::optional<std::string> advisory;

  /// Throws ValidationError when no entry has this name.
  double rate(std::string_view name) const;
};

/// Sums the configured rates. A missing trap_light_scattering entry is taken
/// from the trap's photon scattering rate.
DecoherenceBudget decoherence_budget(const scenario::DecoherenceConfig& entries,
                                     const traps::DipoleTrapResult& trap);

/// coherence_time / gate_duration.
double gate_to_coherence_ratio(const DecoherenceBudget& budget, double gate_duration);

}  // namespace atomchip::budget
