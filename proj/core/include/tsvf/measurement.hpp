#pragma once

// Projective measurement, post-selection, weak values and weak-measurement
// trials on pre- and post-selected ensembles.

#include <cstdint>
#include <optional>
#include <vector>

#include "tsvf/hilbert.hpp"
#include "tsvf/pointer.hpp"
#include "tsvf/rng.hpp"

namespace tsvf {

/// Pre/post overlap below which weak_value refuses to divide.
inline constexpr double kDefaultMinOverlap = 1e-12;

/// Pre-selected |psi> together with post-selected <phi|.
///
/// Both states are stored normalized. `backward` holds the ket |phi>; the
/// bra is its conjugate.
class TwoState {
 public:
  /// Throws DimensionError on a dimension mismatch and NearOrthogonalPrePost
  /// when <phi|psi> is exactly zero.
  TwoState(const StateVector& forward, const StateVector& backward);

  [[nodiscard]] const StateVector& forward() const { return forward_; }
  [[nodiscard]] const StateVector& backward() const { return backward_; }
  /// <phi|psi>.
  [[nodiscard]] Complex overlap() const { return overlap_; }
  [[nodiscard]] Index dim() const { return forward_.dim(); }

 private:
  StateVector forward_;
  StateVector backward_;
  Complex overlap_;
};

struct MeasurementRecord {
  double outcome;
  StateVector collapsed;
  double probability;
};

/// Born weights ||P_i psi||^2 per eigenspace of A, aligned with
/// spectral_decomposition(A).
std::vector<double> born_weights(const StateVector& psi, const HermitianOperator& a);

/// Projective measurement of A: outcome a_i with probability ||P_i psi||^2,
/// state collapsed to P_i psi / ||P_i psi||.
MeasurementRecord strong_measure(const StateVector& psi, const HermitianOperator& a,
                                 SeededRng& rng);

/// Projective test for |phi>: succeeds with probability |<phi|psi>|^2.
bool post_select(const StateVector& psi, const StateVector& phi, SeededRng& rng);

/// <phi|A|psi> / <phi|psi>. May lie outside the spectrum of A.
///
/// Throws NearOrthogonalPrePost when |<phi|psi>| <= min_overlap.
Complex weak_value(const TwoState& ts, const HermitianOperator& a,
                   double min_overlap = kDefaultMinOverlap);

/// One weak-measurement trial: couple the forward state to a pointer,
/// post-select the backward state on the exactly coupled joint state, read
/// the pointer. nullopt when post-selection fails.
std::optional<double> weak_trial(const TwoState& ts, const HermitianOperator& a, double g,
                                 double sigma, SeededRng& rng);

struct WeakEstimate {
  double mean;             // mean accepted reading q
  double std_error;        // sample stddev / sqrt(accepted)
  double acceptance_rate;  // accepted / trials
  std::uint64_t trials;
  std::uint64_t accepted;
};

/// Runs `trials` weak trials. Trial i draws from master.stream(i), so the
/// result depends on (master seed, trials) only, not on `threads`
/// (0 = hardware concurrency). Throws NoAcceptedTrials when nothing passes.
WeakEstimate weak_estimate(const TwoState& ts, const HermitianOperator& a, double g,
                           double sigma, std::uint64_t trials, const SeededRng& master,
                           unsigned threads = 1);

/// Keeps running trials (same per-trial streams as weak_estimate) until
/// `accepted_target` readings pass post-selection or `max_trials` is hit.
WeakEstimate weak_estimate_accepted(const TwoState& ts, const HermitianOperator& a, double g,
                                    double sigma, std::uint64_t accepted_target,
                                    const SeededRng& master, std::uint64_t max_trials,
                                    unsigned threads = 1);

/// Raw per-trial readings in trial order (nullopt = rejected).
std::vector<std::optional<double>> weak_readings(const TwoState& ts, const HermitianOperator& a,
                                                 double g, double sigma, std::uint64_t trials,
                                                 const SeededRng& master, unsigned threads = 1);

}  // namespace tsvf
