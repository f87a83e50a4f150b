#include "atomchip/gates.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace atomchip::gates {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using cplx = std::complex<double>;

std::string_view to_string(Level l) {
  switch (l) {
    case Level::g0: return "g0";
    case Level::g1: return "g1";
    case Level::r: return "r";
    case Level::rr: return "rr";
  }
  return "?";
}

EnsembleBasis EnsembleBasis::with_double_excitation(int atoms) {
  if (atoms < 2) throw ValidationError("atoms", "double excitation needs at least two atoms");
  const double n = atoms;
  return {4, std::sqrt(2.0 * (n - 1.0) / n)};
}

StateSpace::StateSpace(std::vector<EnsembleBasis> ensembles) : ensembles_(std::move(ensembles)) {
  if (ensembles_.empty()) throw ValidationError("basis", "at least one ensemble is required");
  for (const auto& b : ensembles_) {
    if (b.levels != 3 && b.levels != 4)
      throw ValidationError("basis", "each ensemble has 3 or 4 levels");
    dimension_ *= static_cast<std::size_t>(b.levels);
  }
}

std::size_t StateSpace::index(std::span<const Level> levels) const {
  if (levels.size() != ensembles_.size())
    throw ValidationError("levels", "one level per ensemble is required");
  std::size_t idx = 0;
  for (std::size_t e = 0; e < ensembles_.size(); ++e) {
    const auto l = static_cast<int>(levels[e]);
    if (l >= ensembles_[e].levels) throw ValidationError("levels", "level not in basis");
    idx = idx * static_cast<std::size_t>(ensembles_[e].levels) + static_cast<std::size_t>(l);
  }
  return idx;
}

std::vector<Level> StateSpace::levels(std::size_t index) const {
  std::vector<Level> out(ensembles_.size());
  for (std::size_t e = ensembles_.size(); e-- > 0;) {
    const auto d = static_cast<std::size_t>(ensembles_[e].levels);
    out[e] = static_cast<Level>(index % d);
    index /= d;
  }
  return out;
}

int StateSpace::rydberg_excitations(std::size_t index) const {
  int k = 0;
  for (Level l : levels(index)) k += l == Level::r ? 1 : (l == Level::rr ? 2 : 0);
  return k;
}

EnsembleState EnsembleState::basis_state(const StateSpace& space, std::span<const Level> levels) {
  EnsembleState s{space, VectorXcd::Zero(static_cast<Eigen::Index>(space.dimension()))};
  s.amplitudes(static_cast<Eigen::Index>(space.index(levels))) = 1.0;
  return s;
}

cplx EnsembleState::amplitude(std::span<const Level> levels) const {
  return amplitudes(static_cast<Eigen::Index>(space.index(levels)));
}

double EnsembleState::population(std::span<const Level> levels) const {
  return std::norm(amplitude(levels));
}

double EnsembleState::rydberg_population(int min_excitations) const {
  double p = 0.0;
  for (std::size_t i = 0; i < space.dimension(); ++i) {
    if (space.rydberg_excitations(i) >= min_excitations)
      p += std::norm(amplitudes(static_cast<Eigen::Index>(i)));
  }
  return p;
}

void PulseSegment::validate() const {
  if (!(duration > 0.0)) throw ValidationError("segment.duration", "must be positive");
  if (targets.empty()) throw ValidationError("segment.targets", "at least one target");
  if (ground != Level::g0 && ground != Level::g1)
    throw ValidationError("segment.ground", "drive must start from g0 or g1");
}

namespace {

double decay_rate(const rydberg::RydbergLevel& level) {
  return std::isfinite(level.lifetime) ? 1.0 / level.lifetime : 0.0;
}

void check_targets(const StateSpace& space, const PulseSegment& seg) {
  seg.validate();
  for (auto t : seg.targets) {
    if (t >= space.ensemble_count())
      throw ValidationError("segment.targets", "target ensemble out of range");
  }
}

MatrixXcd hamiltonian(const StateSpace& space, const PulseSegment& seg, double gamma_r,
                      Frequency blockade) {
  const auto n = static_cast<Eigen::Index>(space.dimension());
  const bool hard_blockade = std::isinf(blockade.angular());
  MatrixXcd h = MatrixXcd::Zero(n, n);
  const cplx drive = 0.5 * seg.rabi.angular() * std::polar(1.0, seg.phase);
  const double delta = seg.detuning.angular();

  auto couple = [&](std::size_t from, std::size_t to, cplx amp) {
    if (hard_blockade && space.rydberg_excitations(to) >= 2) return;
    const auto i = static_cast<Eigen::Index>(from);
    const auto j = static_cast<Eigen::Index>(to);
    h(j, i) += amp;
    h(i, j) += std::conj(amp);
  };

  for (std::size_t i = 0; i < space.dimension(); ++i) {
    const auto lv = space.levels(i);
    const int k = space.rydberg_excitations(i);
    cplx diag = cplx(0.0, -0.5 * gamma_r * k);
    if (k >= 2 && !hard_blockade) diag += blockade.angular() * (k * (k - 1) / 2);
    for (auto e : seg.targets) {
      if (lv[e] == Level::r) diag += delta;
      if (lv[e] == Level::rr) diag += 2.0 * delta;
    }
    h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) += diag;

    for (auto e : seg.targets) {
      auto up = lv;
      if (lv[e] == seg.ground) {
        up[e] = Level::r;
        couple(i, space.index(up), drive);
      } else if (lv[e] == Level::r && space.basis(e).levels == 4) {
        up[e] = Level::rr;
        couple(i, space.index(up), space.basis(e).double_excitation_coupling * drive);
      }
    }
  }
  return h;
}

// One classical RK4 step for d psi/dt = -i H psi with constant H is the
// degree-4 Taylor polynomial of exp(-i H dt).
MatrixXcd rk4_step_matrix(const MatrixXcd& h, double dt) {
  const auto n = h.rows();
  const MatrixXcd a = cplx(0.0, -dt) * h;
  const MatrixXcd id = MatrixXcd::Identity(n, n);
  return id + a * (id + a / 2.0 * (id + a / 3.0 * (id + a / 4.0)));
}

MatrixXcd matrix_power(MatrixXcd base, std::int64_t exponent) {
  MatrixXcd result = MatrixXcd::Identity(base.rows(), base.cols());
  while (exponent > 0) {
    if (exponent & 1) result = base * result;
    exponent >>= 1;
    if (exponent > 0) base = base * base;
  }
  return result;
}

struct SegmentPlan {
  MatrixXcd step;
  std::int64_t steps = 0;
  double dt = 0.0;
};

std::vector<SegmentPlan> plan_segments(const StateSpace& space,
                                       std::span<const PulseSegment> sequence,
                                       const rydberg::RydbergLevel& level, Frequency blockade,
                                       const SimulationOptions& options) {
  const StepPlan plan = plan_steps(sequence, space, level, blockade, options);
  const double gamma_r = decay_rate(level);
  std::vector<SegmentPlan> out;
  out.reserve(sequence.size());
  for (const auto& seg : sequence) {
    SegmentPlan sp;
    sp.steps = std::max<std::int64_t>(
        1, static_cast<std::int64_t>(std::ceil(seg.duration / plan.max_dt - 1e-9)));
    sp.dt = seg.duration / static_cast<double>(sp.steps);
    sp.step = rk4_step_matrix(hamiltonian(space, seg, gamma_r, blockade), sp.dt);
    out.push_back(std::move(sp));
  }
  return out;
}

}  // namespace

StepPlan plan_steps(std::span<const PulseSegment> sequence, const StateSpace& space,
                    const rydberg::RydbergLevel& level, Frequency blockade,
                    const SimulationOptions& options) {
  if (!(options.steps_per_period >= kMinStepsPerPeriod)) {
    throw SimulationError("time step too coarse for RK4 accuracy: use a smaller dt "
                          "(steps_per_period >= " +
                          std::to_string(static_cast<int>(kMinStepsPerPeriod)) + ")");
  }
  // Eigenvalues of H lie within its max-row-sum norm, so no frequency in the
  // dynamics exceeds twice that.
  const double gamma_r = decay_rate(level);
  double w_max = gamma_r;
  for (const auto& seg : sequence) {
    check_targets(space, seg);
    const MatrixXcd h = hamiltonian(space, seg, gamma_r, blockade);
    w_max = std::max(w_max, 2.0 * h.cwiseAbs().rowwise().sum().maxCoeff());
  }

  StepPlan plan;
  double total = 0.0;
  for (const auto& seg : sequence) total += seg.duration;
  plan.max_dt = w_max > 0.0 ? kTwoPi / (options.steps_per_period * w_max) : total;

  double steps = 0.0;
  for (const auto& seg : sequence) steps += std::ceil(seg.duration / plan.max_dt - 1e-9);
  if (steps > static_cast<double>(options.max_steps)) {
    throw SimulationError("sequence needs " + std::to_string(static_cast<long long>(steps)) +
                          " RK4 steps, above the limit of " + std::to_string(options.max_steps));
  }
  plan.total_steps = static_cast<std::int64_t>(steps);
  return plan;
}

MatrixXcd sequence_propagator(const StateSpace& space, std::span<const PulseSegment> sequence,
                              const rydberg::RydbergLevel& level, Frequency blockade,
                              const SimulationOptions& options) {
  const auto n = static_cast<Eigen::Index>(space.dimension());
  MatrixXcd u = MatrixXcd::Identity(n, n);
  for (const auto& sp : plan_segments(space, sequence, level, blockade, options)) {
    u = matrix_power(sp.step, sp.steps) * u;
  }
  return u;
}

EnsembleState simulate_pulse_sequence(const EnsembleState& initial,
                                      std::span<const PulseSegment> sequence,
                                      const rydberg::RydbergLevel& level, Frequency blockade,
                                      const SimulationOptions& options) {
  EnsembleState out = initial;
  out.amplitudes =
      sequence_propagator(initial.space, sequence, level, blockade, options) * initial.amplitudes;
  return out;
}

EnsembleState simulate_pulse_sequence(const EnsembleState& initial,
                                      std::span<const PulseSegment> sequence,
                                      const rydberg::RydbergLevel& level, Frequency blockade,
                                      const SimulationOptions& options,
                                      const StepObserver& observer) {
  EnsembleState state = initial;
  double t = 0.0;
  for (const auto& sp : plan_segments(initial.space, sequence, level, blockade, options)) {
    for (std::int64_t s = 0; s < sp.steps; ++s) {
      state.amplitudes = sp.step * state.amplitudes;
      t += sp.dt;
      if (observer) observer(t, state);
    }
  }
  return state;
}

// ---- single-qubit gates ----------------------------------------------------

LightShift differential_light_shift(double power, Frequency detuning_from_f2,
                                    double mode_field_radius, const AtomSpecies& species) {
  if (!(power >= 0.0)) throw ValidationError("power", "must be non-negative");
  if (!(mode_field_radius > 0.0)) throw ValidationError("mode_field_radius", "must be positive");
  const auto& d2 = species.transition("D2");
  const double gamma = d2.gamma.angular();
  const double d_f2 = detuning_from_f2.angular();
  const double d_f1 = d_f2 - species.hyperfine_splitting.angular();
  if (std::abs(d_f2) < 10.0 * gamma || std::abs(d_f1) < 10.0 * gamma) {
    throw ValidationError("detuning", "near-resonant light (|detuning| < 10 Gamma)");
  }
  const double intensity = 2.0 * power / (std::numbers::pi * mode_field_radius * mode_field_radius);
  const double rabi_sq = gamma * gamma * intensity / (2.0 * d2.i_sat(IsatConvention::cycling));

  LightShift ls;
  ls.single_photon_rabi = Frequency::from_angular(std::sqrt(rabi_sq));
  ls.f2_shift = Frequency::from_angular(rabi_sq / (4.0 * d_f2));
  ls.f1_shift = Frequency::from_angular(rabi_sq / (4.0 * d_f1));
  ls.differential = ls.f2_shift - ls.f1_shift;
  return ls;
}

PhaseGateBudget phase_gate_budget(double target_phase, Frequency shift,
                                  Frequency detuning_from_f2, const AtomSpecies& species) {
  const double s = std::abs(shift.angular());
  if (!(s > 0.0)) throw ValidationError("shift", "must be non-zero");
  if (target_phase == 0.0) return {};
  const double phase = std::abs(target_phase);
  const double d_f2 = detuning_from_f2.angular();
  const double d_f1 = d_f2 - species.hyperfine_splitting.angular();
  if (d_f2 == 0.0 || d_f1 == 0.0) throw ValidationError("detuning", "resonant light");

  PhaseGateBudget b;
  b.duration = phase / s;
  // Recover Omega^2 / 4 from the differential shift, then scatter at
  // Gamma (Omega/2)^2 / delta^2 from each hyperfine level.
  const double quarter_rabi_sq = s / std::abs(1.0 / d_f2 - 1.0 / d_f1);
  const double gamma = species.transition("D2").gamma.angular();
  const double rate_f2 = gamma * quarter_rabi_sq / (d_f2 * d_f2);
  const double rate_f1 = gamma * quarter_rabi_sq / (d_f1 * d_f1);
  b.scattered_photons_per_atom = 0.5 * (rate_f1 + rate_f2) * b.duration;
  return b;
}

PulseSegment build_hadamard_pulse(const rydberg::CollectiveQubit& qubit, Frequency single_rabi) {
  qubit.validate();
  if (!(single_rabi.angular() > 0.0)) throw ValidationError("single_rabi", "must be positive");
  PulseSegment seg;
  seg.rabi = rydberg::collective_rabi(single_rabi, qubit.atom_count);
  seg.duration = (std::numbers::pi / 2.0) / seg.rabi.angular();
  seg.targets = {0};
  seg.ground = Level::g0;
  return seg;
}

HadamardSimulation simulate_hadamard(const rydberg::CollectiveQubit& qubit,
                                     Frequency single_rabi, Frequency blockade,
                                     const rydberg::RydbergLevel& level,
                                     const SimulationOptions& options) {
  const PulseSegment pulse = build_hadamard_pulse(qubit, single_rabi);
  const StateSpace space(
      {qubit.atom_count >= 2 ? EnsembleBasis::with_double_excitation(qubit.atom_count)
                             : EnsembleBasis::three_level()});
  const std::array start{Level::g0};
  const auto initial = EnsembleState::basis_state(space, start);

  HadamardSimulation out;
  out.nominal_duration = pulse.duration;
  out.perturbative_estimate =
      std::isinf(blockade.angular())
          ? 0.0
          : std::pow(pulse.rabi.angular() / (2.0 * blockade.angular()), 2);

  // Run past the nominal end so the half-transfer crossing is always found.
  PulseSegment extended = pulse;
  extended.duration = 1.5 * pulse.duration;
  double prev_t = 0.0, prev_p = 0.0;
  bool crossed = false;
  const auto final_state = simulate_pulse_sequence(
      initial, std::span(&extended, 1), level, blockade, options,
      [&](double t, const EnsembleState& s) {
        const double left = s.rydberg_population(1);
        if (!crossed && left >= 0.5) {
          out.completion_time = prev_t + (0.5 - prev_p) / (left - prev_p) * (t - prev_t);
          crossed = true;
        }
        if (t <= pulse.duration * (1.0 + 1e-12)) {
          const double dbl = s.rydberg_population(2);
          out.peak_double_excitation = std::max(out.peak_double_excitation, dbl);
          out.final_double_excitation = dbl;
          out.final_norm = s.norm();
        }
        prev_t = t;
        prev_p = left;
      });
  (void)final_state;
  if (!crossed) throw SimulationError("pi/2 transfer never reached half population");
  return out;
}

double hadamard_number_spread_error(const rydberg::CollectiveQubit& qubit,
                                    Frequency single_rabi, double relative_spread, int samples,
                                    std::uint64_t seed) {
  if (!(relative_spread >= 0.0)) throw ValidationError("relative_spread", "must be non-negative");
  if (samples < 1) throw ValidationError("samples", "must be positive");
  const PulseSegment nominal = build_hadamard_pulse(qubit, single_rabi);
  const StateSpace space({EnsembleBasis::three_level()});
  const std::array g0{Level::g0};
  const std::array r{Level::r};
  const auto initial = EnsembleState::basis_state(space, g0);
  const rydberg::RydbergLevel stable{0, std::numeric_limits<double>::infinity(), 0.0};

  VectorXcd ideal = VectorXcd::Zero(3);
  ideal(static_cast<Eigen::Index>(space.index(g0))) = std::sqrt(0.5);
  ideal(static_cast<Eigen::Index>(space.index(r))) = cplx(0.0, -std::sqrt(0.5));

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> atoms(qubit.atom_count, relative_spread * qubit.atom_count);
  double total = 0.0;
  for (int i = 0; i < samples; ++i) {
    const int n = std::max(1, static_cast<int>(std::lround(atoms(rng))));
    PulseSegment seg = nominal;
    seg.rabi = rydberg::collective_rabi(single_rabi, n);
    const auto out = simulate_pulse_sequence(initial, std::span(&seg, 1), stable,
                                             infinite_blockade());
    total += std::max(0.0, 1.0 - std::norm(ideal.dot(out.amplitudes)));
  }
  return total / samples;
}

// ---- controlled phase --------------------------------------------------------

std::vector<PulseSegment> cz_pulse_sequence(Frequency rabi) {
  if (!(rabi.angular() > 0.0)) throw ValidationError("rabi", "must be positive");
  const double pi_time = std::numbers::pi / rabi.angular();
  PulseSegment control{rabi, Frequency{}, 0.0, pi_time, {0}, Level::g1};
  PulseSegment target{rabi, Frequency{}, 0.0, 2.0 * pi_time, {1}, Level::g1};
  return {control, target, control};
}

double cz_duration(Frequency rabi) { return 4.0 * std::numbers::pi / rabi.angular(); }

Frequency cz_rabi_for_duration(double duration) {
  if (!(duration > 0.0)) throw ValidationError("duration", "must be positive");
  return Frequency::from_angular(4.0 * std::numbers::pi / duration);
}

namespace {

// Maximises |<CZ_local(a, b)|++ evolved>|^2 over the control/target Z phases
// by alternating exact single-angle maximisations.
std::pair<double, std::array<double, 2>> best_local_phase_fidelity(
    const std::array<cplx, 4>& c, std::array<double, 2> start) {
  double a = start[0], b = start[1];
  auto fidelity = [&](double aa, double bb) {
    const cplx s = c[0] + std::polar(1.0, -bb) * c[1] + std::polar(1.0, -aa) * c[2] -
                   std::polar(1.0, -(aa + bb)) * c[3];
    return std::norm(s) / 4.0;
  };
  double f = fidelity(a, b);
  for (int it = 0; it < 200; ++it) {
    {
      const cplx x = c[0] + std::polar(1.0, -b) * c[1];
      const cplx y = c[2] - std::polar(1.0, -b) * c[3];
      if (std::abs(y) > 0.0 && std::abs(x) > 0.0) a = std::arg(y) - std::arg(x);
    }
    {
      const cplx x = c[0] + std::polar(1.0, -a) * c[2];
      const cplx y = c[1] - std::polar(1.0, -a) * c[3];
      if (std::abs(y) > 0.0 && std::abs(x) > 0.0) b = std::arg(y) - std::arg(x);
    }
    const double next = fidelity(a, b);
    const bool done = next - f < 1e-16;
    f = std::max(f, next);
    if (done) break;
  }
  return {f, {std::remainder(a, kTwoPi), std::remainder(b, kTwoPi)}};
}

}  // namespace

GateFidelityReport simulate_cz(Frequency rabi, Frequency blockade, double rydberg_lifetime,
                               const SimulationOptions& options) {
  if (!(rydberg_lifetime > 0.0)) throw ValidationError("lifetime", "must be positive");
  if (!(blockade.angular() >= 0.0)) throw ValidationError("blockade", "must be non-negative");
  const auto sequence = cz_pulse_sequence(rabi);
  const StateSpace space({EnsembleBasis::three_level(), EnsembleBasis::three_level()});
  const rydberg::RydbergLevel level{0, rydberg_lifetime, 0.0};
  const MatrixXcd u = sequence_propagator(space, sequence, level, blockade, options);

  const std::array<std::array<Level, 2>, 4> logical{{{Level::g0, Level::g0},
                                                     {Level::g0, Level::g1},
                                                     {Level::g1, Level::g0},
                                                     {Level::g1, Level::g1}}};
  std::array<Eigen::Index, 4> idx{};
  for (std::size_t k = 0; k < 4; ++k)
    idx[k] = static_cast<Eigen::Index>(space.index(logical[k]));

  GateFidelityReport rep;
  rep.gate_duration = cz_duration(rabi);
  rep.rabi = rabi;
  rep.blockade = blockade;
  rep.rydberg_lifetime = rydberg_lifetime;

  const bool decays = std::isfinite(rydberg_lifetime);
  double decay = 0.0, leftover = 0.0;
  auto tally = [&](const VectorXcd& out) {
    if (decays) decay += std::max(0.0, 1.0 - out.squaredNorm());
    for (std::size_t i = 0; i < space.dimension(); ++i)
      if (space.rydberg_excitations(i) > 0) leftover += std::norm(out(static_cast<Eigen::Index>(i)));
  };

  double fidelity_sum = 0.0;
  for (std::size_t k = 0; k < 4; ++k) {
    const VectorXcd out = u.col(idx[k]);
    rep.logical_amplitudes[k] = out(idx[k]);
    const double f = std::norm(out(idx[k]));
    rep.input_errors[k] = 1.0 - f;
    fidelity_sum += f;
    tally(out);
  }

  VectorXcd plus = VectorXcd::Zero(u.rows());
  for (auto i : idx) plus(i) = 0.5;
  const VectorXcd out = u * plus;
  tally(out);
  const std::array<cplx, 4> c{out(idx[0]), out(idx[1]), out(idx[2]), out(idx[3])};
  const auto& a = rep.logical_amplitudes;
  const std::array<double, 2> guess{std::arg(a[2] / a[0]), std::arg(a[1] / a[0])};
  const auto [f_plus, phases] = best_local_phase_fidelity(c, guess);
  rep.local_phases = phases;
  rep.input_errors[4] = 1.0 - f_plus;
  fidelity_sum += f_plus;

  rep.gate_error = std::max(0.0, 1.0 - fidelity_sum / 5.0);
  rep.breakdown.rydberg_decay = decay / 5.0;
  rep.breakdown.leftover_rydberg_population = leftover / 5.0;
  rep.breakdown.blockade_leakage =
      std::max(0.0, rep.gate_error - rep.breakdown.rydberg_decay -
                        rep.breakdown.leftover_rydberg_population);
  return rep;
}

GateFidelityReport simulate_cz_gate(const rydberg::CollectiveQubit& control,
                                    const rydberg::CollectiveQubit& target,
                                    const rydberg::RydbergLevel& level, Frequency single_rabi,
                                    double distance, const SimulationOptions& options) {
  control.validate();
  target.validate();
  const Frequency b = rydberg::blockade_shift(level, distance);
  return simulate_cz(single_rabi, b, level.lifetime, options);
}

double minimum_gate_error(Frequency blockade, double lifetime) {
  if (!(blockade.angular() > 0.0)) throw ValidationError("blockade", "must be positive");
  if (!(lifetime > 0.0)) throw ValidationError("lifetime", "must be positive");
  return 3.0 * std::pow(blockade.angular() * lifetime, -2.0 / 3.0);
}

}  // namespace atomchip::gates
