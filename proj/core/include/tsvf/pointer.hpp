#pragma once

// Von Neumann measuring device with a Gaussian pointer.
//
// The coupling H = g(t) A (x) P_d is applied as an instantaneous impulse with
// integrated strength g, so the joint state after coupling is exactly
//
//     sum_i alpha_i |a_i> (x) phi(q - g a_i),
//     phi(q) = (2 pi sigma^2)^(-1/4) exp(-q^2 / (4 sigma^2)).
//
// The pointer is kept analytic as a Gaussian mixture; grids appear only in
// the inverse-CDF sampler.

#include <optional>
#include <vector>

#include "tsvf/hilbert.hpp"

namespace tsvf {

class SeededRng;

/// Pointer wavefunction phi(q - mean). |phi|^2 is N(mean, sigma^2).
struct GaussianPointer {
  double sigma;
  double mean;

  /// phi(q - mean), real and positive.
  [[nodiscard]] double amplitude(double q) const;
  /// |phi(q - mean)|^2.
  [[nodiscard]] double density(double q) const;
};

/// <phi(q - a)|phi(q - b)> for two pointers of the same width.
double pointer_overlap(const GaussianPointer& a, const GaussianPointer& b);

/// One eigenvalue branch of the coupled state: alpha * |branch> (x) pointer.
///
/// For a degenerate eigenvalue, `branch` is the normalized projection of the
/// input state onto the eigenspace and `alpha` its (real) norm. Otherwise
/// `branch` is the eigenvector and alpha = <a_i|psi>. In both cases
/// alpha * branch = P_i psi.
struct PointerBranch {
  double eigenvalue;
  Complex alpha;
  StateVector branch;
  GaussianPointer pointer;
};

/// System-pointer state after the impulsive coupling.
struct JointPointerState {
  std::vector<PointerBranch> terms;
  double coupling;  // g
  double sigma;

  [[nodiscard]] Index system_dim() const { return terms.front().branch.dim(); }
  /// sum |alpha_i|^2; 1 for a normalized input.
  [[nodiscard]] double total_weight() const;
};

/// Couple `psi` to a fresh pointer centred at 0. Branches with |alpha|^2
/// below 1e-28 are dropped; degenerate eigenvalues (within 1e-10) merge.
JointPointerState couple(const StateVector& psi, const HermitianOperator& a, double g,
                         double sigma);

/// Pointer reading distribution, optionally conditioned on a post-selection.
///
/// Unconditioned: f(q) = sum_i |alpha_i|^2 N(q; g a_i, sigma^2), an
/// incoherent mixture. Post-selected on |post>: the unnormalized density is
/// |sum_i c_i phi(q - g a_i)|^2 with c_i = alpha_i <post|branch_i>, which
/// interferes; its integral is the post-selection success probability.
class ReadoutDensity {
 public:
  /// Throws PostSelectionImpossible when the success probability is below
  /// 1e-300, DimensionError when post.dim() differs from the system.
  ReadoutDensity(const JointPointerState& joint, const std::optional<StateVector>& post);

  /// Normalized density at q.
  [[nodiscard]] double operator()(double q) const;
  /// Post-selection probability (1 without post-selection).
  [[nodiscard]] double success_probability() const { return success_; }
  /// Mean of the normalized density, closed form.
  [[nodiscard]] double mean() const;
  /// Variance of the normalized density, closed form.
  [[nodiscard]] double variance() const;

  [[nodiscard]] bool post_selected() const { return coherent_; }
  [[nodiscard]] double sigma() const { return sigma_; }
  [[nodiscard]] const std::vector<double>& centres() const { return centres_; }
  /// Half-width of the sampling window around 0: 10 sigma + g max|a_i|.
  [[nodiscard]] double support_half_width() const { return half_width_; }

 private:
  // Unnormalized density: sum_ij conj(c_i) c_j phi_i(q) phi_j(q).
  [[nodiscard]] double raw(double q) const;

  bool coherent_;
  double sigma_;
  double half_width_;
  std::vector<double> centres_;
  std::vector<Complex> coeffs_;  // c_i (coherent) or sqrt weights (incoherent)
  double success_;
};

/// Convenience wrapper returning (density, success probability).
ReadoutDensity readout_density(const JointPointerState& joint,
                               const std::optional<StateVector>& post = std::nullopt);

/// Inverse-CDF sampler for a ReadoutDensity on a 2^14-point grid.
///
/// Build once and reuse for many trials; each draw first decides
/// post-selection success as Bernoulli(success_probability) and then samples
/// q from the normalized density.
class ReadingSampler {
 public:
  static constexpr Index kGridPoints = Index{1} << 14;

  explicit ReadingSampler(ReadoutDensity density);

  /// nullopt when post-selection fails.
  [[nodiscard]] std::optional<double> sample(SeededRng& rng) const;
  /// Reading q for a given uniform u in [0, 1), ignoring post-selection.
  [[nodiscard]] double quantile(double u) const;

  [[nodiscard]] const ReadoutDensity& density() const { return density_; }

 private:
  ReadoutDensity density_;
  std::vector<double> grid_;
  std::vector<double> cdf_;
};

/// One Monte Carlo reading of the pointer. nullopt signals a failed
/// post-selection.
std::optional<double> sample_reading(const JointPointerState& joint,
                                     const std::optional<StateVector>& post, SeededRng& rng);

/// Index into joint.terms of the pointer centre nearest to q.
///
/// Requires every pair of centres to be more than 6 sigma apart, otherwise
/// throws NotInStrongRegime. The misclassification probability is then below
/// erfc(3 / sqrt(2)).
std::size_t classify_strong(double q, const JointPointerState& joint);

}  // namespace tsvf
