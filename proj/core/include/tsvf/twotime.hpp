#pragma once

// Two-time decoherence of a single measurement record.
//
// A microscopic particle alpha|1> + beta|2> is read by a pointer (|I>, |II>)
// whose reading is amplified into N environment qubits:
//
//     alpha |1>|I>|eps_1>^N + beta |2>|II>|eps_2>^N,
//     eps_1 = |0>,  eps_2 = c|0> + sqrt(1 - c^2)|1>,  <eps_1|eps_2>^N = c^N.
//
// A final boundary <phi|<I|<eps_1| selects one branch. Later, n < N
// environment qubits collapse: in branch i qubit j becomes C_i^(j) with
// |<C_1^(j)|eps_1>| = gamma1_j and |<C_2^(j)|eps_1>| = gamma2_j. The
// robustness ratio Pr(right)/Pr(wrong) measures how well the boundary still
// reconstructs reading I, and is exponential in the untouched core N - n.
//
// The free Hamiltonian is zero and decoherence is one instantaneous step.
// Exponentials are evaluated in the log domain, so N may reach 10^9.

#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "tsvf/hilbert.hpp"
#include "tsvf/rng.hpp"

namespace tsvf {

/// How collapse overlaps enter the robustness ratio.
enum class RatioForm {
  kSquared,  // prod gamma1^2 / (|c^(N-n)|^2 prod gamma2^2): a ratio of probabilities
  kLiteral,  // prod gamma1 / (|c^(N-n)|^2 prod gamma2)
};

enum class Reading { kI, kII };

inline constexpr double kDefaultRobustnessThreshold = 1e6;

struct RobustnessModel {
  // Equal superposition by default, so both readings occur.
  Complex alpha{std::numbers::sqrt2 / 2.0, 0.0};
  Complex beta{std::numbers::sqrt2 / 2.0, 0.0};
  std::uint64_t env_n = 1;
  double overlap_c = 0.0;
  std::uint64_t collapse_n = 0;
  /// Length collapse_n, or a single value broadcast to every collapsed qubit.
  std::vector<double> gamma1{1.0};
  std::vector<double> gamma2{0.5};
  RatioForm form = RatioForm::kSquared;
  /// Microstate <phi| of the final boundary. Defaults to the forward
  /// microstate of the selected branch.
  std::optional<StateVector> final_micro;

  /// Throws InvariantError (amplitudes, N, c, n, gamma ranges) or
  /// OrthogonalCollapseForbidden (some gamma1 == 0).
  void validate() const;

  [[nodiscard]] double gamma1_at(std::uint64_t j) const;
  [[nodiscard]] double gamma2_at(std::uint64_t j) const;
};

using Qubit = Eigen::Vector2cd;

/// Run-length encoded product of identical environment qubits.
struct EnvironmentFactor {
  Qubit qubit;
  std::uint64_t count;
};

struct BranchState {
  Reading label;
  Complex amplitude;
  StateVector particle;  // |1> = (1, 0), |2> = (0, 1)
  Reading pointer;       // |I>, |II> orthonormal
  std::vector<EnvironmentFactor> environment;
};

/// Per-qubit environment states.
Qubit env_record_1();
Qubit env_record_2(double c);

/// Branches after the measurement and its amplification; zero-amplitude
/// branches are omitted.
std::vector<BranchState> forward_chain(const RobustnessModel& model);

/// log |<a|b>| for two environments over the same number of qubits; -inf when
/// orthogonal.
double log_environment_overlap(std::span<const EnvironmentFactor> a,
                               std::span<const EnvironmentFactor> b);

struct FinalBoundary {
  Reading reading = Reading::kI;
  std::optional<StateVector> micro;  // overrides RobustnessModel::final_micro
};

struct Selection {
  double p_right;  // |<boundary|branch with the selected reading>|^2
  double p_wrong;  // same for the other branch
  /// Probability that backward evolution reconstructs the selected reading.
  [[nodiscard]] double reconstruction() const { return p_right / (p_right + p_wrong); }
};

/// Weights of the two branches under <phi|<reading|<eps_reading|, before any
/// environment collapse (requires collapse_n == 0). Throws
/// NoConsistentHistory when the boundary is orthogonal to the forward state.
Selection select_by_final(const RobustnessModel& model, const FinalBoundary& boundary = {});

/// Samples final boundaries <I|<eps_1| with probability |alpha|^2 and
/// <II|<eps_2| otherwise, one per universe (universe u draws from
/// master.stream(u)), and counts which reading each boundary reconstructs.
struct UniverseCount {
  std::uint64_t universes;
  std::uint64_t reading_i;
  [[nodiscard]] double frequency_i() const {
    return static_cast<double>(reading_i) / static_cast<double>(universes);
  }
};
UniverseCount sample_universes(const RobustnessModel& model, std::uint64_t universes,
                               const SeededRng& master);

struct CollapsedDescription {
  std::vector<std::uint64_t> collapsed_qubits;  // sorted indices in [0, N)
  std::vector<BranchState> branches;
  double log_remaining_overlap;  // log |<eps_1(N-n)|eps_2(N-n)>|
  [[nodiscard]] double remaining_overlap() const;
};

/// Collapses n environment qubits chosen uniformly by `rng`.
CollapsedDescription collapse_environment(const RobustnessModel& model, SeededRng& rng);

/// log Pr(right)/Pr(wrong); +inf when c == 0 or some gamma2 == 0.
double log_robustness_ratio(const RobustnessModel& model);
double robustness_ratio(const RobustnessModel& model);
bool is_classically_robust(const RobustnessModel& model,
                           double threshold = kDefaultRobustnessThreshold);

/// Full particle (x) pointer (x) N-qubit state on 2^(N+2) amplitudes.
/// Throws TooLargeForOracle when N > 12.
StateVector forward_state_vector(const RobustnessModel& model);

/// Oracle for robustness_ratio: builds the full state, projects the first n
/// environment qubits of branch i onto C_i (renormalizing each branch) and
/// compares the weights each pointer branch gives to the boundary <eps_1|^N.
/// With n == 0 the boundary also fixes the bare pointer <I|, so the wrong
/// branch is excluded exactly and the ratio is +inf. The particle is left
/// unconstrained. Always computes the squared form. N <= 12.
double brute_force_ratio(const RobustnessModel& model);

/// N(t) = N0 exp(-t / T).
double core_decay(double n0, double lifetime, double t);

/// Smallest N > n with robustness_ratio >= ratio_target, from the closed form
/// and then checked by direct evaluation at N and N - 1. Requires 0 < c < 1.
std::uint64_t classical_threshold(std::uint64_t n, double c, std::span<const double> gamma1,
                                  std::span<const double> gamma2, double ratio_target,
                                  RatioForm form = RatioForm::kSquared);

}  // namespace tsvf
