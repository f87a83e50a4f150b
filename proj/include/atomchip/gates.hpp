#pragma once

// Gate budgets and a time-domain simulator for collectively encoded qubits.
//
// Each ensemble is truncated to its symmetric states: g0 (logical 0, every
// atom in F=1), g1 (logical 1, one shared F=2 excitation), r (one shared
// Rydberg excitation) and optionally rr (two Rydberg excitations, shifted by
// the blockade). Spontaneous decay from Rydberg states enters as an
// anti-Hermitian term, so lost norm is the accumulated decay error.

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "atomchip/rydberg.hpp"
#include "atomchip/units.hpp"

namespace atomchip::gates {

enum class Level : std::uint8_t { g0 = 0, g1 = 1, r = 2, rr = 3 };

std::string_view to_string(Level l);

struct EnsembleBasis {
  int levels = 3;
  // r <-> rr coupling relative to the driven ground <-> r coupling.
  double double_excitation_coupling = std::numbers::sqrt2;

  static EnsembleBasis three_level() { return {}; }
  /// Four levels; the r <-> rr matrix element of a symmetric N-atom ensemble
  /// is sqrt(2 (N - 1) / N) times the collective ground <-> r one.
  static EnsembleBasis with_double_excitation(int atoms);

  bool operator==(const EnsembleBasis&) const = default;
};

class StateSpace {
 public:
  explicit StateSpace(std::vector<EnsembleBasis> ensembles);

  std::size_t dimension() const { return dimension_; }
  std::size_t ensemble_count() const { return ensembles_.size(); }
  const EnsembleBasis& basis(std::size_t e) const { return ensembles_.at(e); }

  std::size_t index(std::span<const Level> levels) const;
  std::vector<Level> levels(std::size_t index) const;
  /// Total Rydberg excitations in a basis state (rr counts two).
  int rydberg_excitations(std::size_t index) const;

  bool operator==(const StateSpace&) const = default;

 private:
  std::vector<EnsembleBasis> ensembles_;
  std::size_t dimension_ = 1;
};

struct EnsembleState {
  StateSpace space;
  Eigen::VectorXcd amplitudes;

  static EnsembleState basis_state(const StateSpace& space, std::span<const Level> levels);

  /// Squared norm; 1 minus this is the decay error accumulated so far.
  double norm() const { return amplitudes.squaredNorm(); }
  std::complex<double> amplitude(std::span<const Level> levels) const;
  double population(std::span<const Level> levels) const;
  /// Population in basis states holding at least `min_excitations` Rydberg atoms.
  double rydberg_population(int min_excitations = 1) const;
};

struct PulseSegment {
  Frequency rabi;  // collective where applicable
  Frequency detuning;
  double phase = 0.0;     // rad
  double duration = 0.0;  // s
  std::vector<std::size_t> targets;
  Level ground = Level::g1;  // ground level the Rydberg drive couples to

  void validate() const;
};

struct SimulationOptions {
  // dt = 1 / (steps_per_period * f_max), with f_max an upper bound on every
  // frequency in the dynamics (twice the Hamiltonian's max-row-sum norm, or
  // the decay rate if larger), as ordinary frequency.
  double steps_per_period = 1000.0;
  std::int64_t max_steps = 100'000'000;
};

inline constexpr double kMinStepsPerPeriod = 20.0;

/// Thrown when the fixed step is too coarse or the sequence needs too many steps.
class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline Frequency infinite_blockade() {
  return Frequency::from_angular(std::numeric_limits<double>::infinity());
}

using StepObserver = std::function<void(double time, const EnsembleState& state)>;

/// Fixed-step RK4 evolution under the segment Hamiltonians. With an infinite
/// blockade, states with two or more Rydberg excitations are never populated.
EnsembleState simulate_pulse_sequence(const EnsembleState& initial,
                                      std::span<const PulseSegment> sequence,
                                      const rydberg::RydbergLevel& level, Frequency blockade,
                                      const SimulationOptions& options = {});

/// As above, calling `observer` after every step. Slower: no step batching.
EnsembleState simulate_pulse_sequence(const EnsembleState& initial,
                                      std::span<const PulseSegment> sequence,
                                      const rydberg::RydbergLevel& level, Frequency blockade,
                                      const SimulationOptions& options,
                                      const StepObserver& observer);

/// The matrix the sequence applies to any input state.
Eigen::MatrixXcd sequence_propagator(const StateSpace& space,
                                     std::span<const PulseSegment> sequence,
                                     const rydberg::RydbergLevel& level, Frequency blockade,
                                     const SimulationOptions& options = {});

/// The fixed step used for a sequence, and the step count it implies.
struct StepPlan {
  double max_dt = 0.0;
  std::int64_t total_steps = 0;
};

StepPlan plan_steps(std::span<const PulseSegment> sequence, const StateSpace& space,
                    const rydberg::RydbergLevel& level, Frequency blockade,
                    const SimulationOptions& options);

// ---- single-qubit gates ----------------------------------------------------

struct LightShift {
  Frequency f2_shift;
  Frequency f1_shift;
  Frequency differential;  // F=2 minus F=1
  Frequency single_photon_rabi;
};

/// Ground hyperfine light shifts from a far-detuned beam in the waveguide
/// mode. detuning_from_f2 is laser minus the F=2 -> F'=3 resonance; the
/// F=1 resonance sits one ground splitting higher. Rejects |detuning| < 10
/// Gamma for either level.
LightShift differential_light_shift(double power, Frequency detuning_from_f2,
                                    double mode_field_radius, const AtomSpecies& species);

struct PhaseGateBudget {
  double duration = 0.0;                    // s
  double scattered_photons_per_atom = 0.0;  // averaged over both hyperfine levels
};

PhaseGateBudget phase_gate_budget(double target_phase, Frequency shift,
                                  Frequency detuning_from_f2, const AtomSpecies& species);

/// One collectively enhanced segment from logical 0 to the shared Rydberg
/// excitation, long enough for a pi/2 rotation.
PulseSegment build_hadamard_pulse(const rydberg::CollectiveQubit& qubit, Frequency single_rabi);

struct HadamardSimulation {
  double nominal_duration = 0.0;
  double completion_time = 0.0;  // first time half the population has left g0
  double final_double_excitation = 0.0;
  double peak_double_excitation = 0.0;
  double perturbative_estimate = 0.0;  // (Omega_N / 2B)^2
  double final_norm = 1.0;
};

HadamardSimulation simulate_hadamard(const rydberg::CollectiveQubit& qubit,
                                     Frequency single_rabi, Frequency blockade,
                                     const rydberg::RydbergLevel& level,
                                     const SimulationOptions& options = {});

/// Mean pi/2 rotation error when the true atom number is Gaussian-distributed
/// around the nominal one (relative_spread = sigma_N / N) while the pulse is
/// timed for the nominal number.
double hadamard_number_spread_error(const rydberg::CollectiveQubit& qubit,
                                    Frequency single_rabi, double relative_spread, int samples,
                                    std::uint64_t seed);

// ---- controlled phase --------------------------------------------------------

struct ErrorBreakdown {
  double rydberg_decay = 0.0;
  double leftover_rydberg_population = 0.0;
  double blockade_leakage = 0.0;
};

struct GateFidelityReport {
  double gate_error = 0.0;
  ErrorBreakdown breakdown;
  double gate_duration = 0.0;
  Frequency rabi;
  Frequency blockade;
  double rydberg_lifetime = 0.0;
  std::string protocol = "pi-2pi-pi";
  // Diagonal amplitudes <jk|U|jk> for |00>, |01>, |10>, |11> (control, target).
  std::array<std::complex<double>, 4> logical_amplitudes{};
  std::array<double, 2> local_phases{};  // optimal Z phases on control, target
  std::array<double, 5> input_errors{};  // 00, 01, 10, 11, ++
};

/// pi(control) - 2pi(target) - pi(control) pulses coupling g1 <-> r.
std::vector<PulseSegment> cz_pulse_sequence(Frequency rabi);
double cz_duration(Frequency rabi);
Frequency cz_rabi_for_duration(double duration);

GateFidelityReport simulate_cz(Frequency rabi, Frequency blockade, double rydberg_lifetime,
                               const SimulationOptions& options = {});

/// The qubits' logical |1> holds one F=2 atom, so the Rydberg drive is not
/// collectively enhanced.
GateFidelityReport simulate_cz_gate(const rydberg::CollectiveQubit& control,
                                    const rydberg::CollectiveQubit& target,
                                    const rydberg::RydbergLevel& level, Frequency single_rabi,
                                    double distance, const SimulationOptions& options = {});

/// 3 (B tau)^(-2/3) with B the angular blockade shift.
double minimum_gate_error(Frequency blockade, double lifetime);

}  // namespace atomchip::gates
