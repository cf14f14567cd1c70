#pragma once

// Deterministic operators of a single state and average operators over
// product-state ensembles.

#include <cstdint>
#include <optional>
#include <vector>

#include "tsvf/hilbert.hpp"
#include "tsvf/rng.hpp"

namespace tsvf {

/// Largest Hilbert dimension the brute-force oracles will build (2^14).
inline constexpr Index kOracleMaxDim = Index{1} << 14;

/// A|psi> = abar |psi> + delta |perp>, with <psi|perp> = 0.
struct Decomposition {
  double abar;
  double delta;
  std::optional<StateVector> perp;  // absent when delta <= 1e-12
};

struct EnsembleGroup {
  StateVector state;
  std::uint64_t count;
};

/// N_1 copies of chi_1, ..., N_m copies of chi_m, all of one dimension.
class EnsembleSpec {
 public:
  /// Throws InvariantError for an empty group list or zero counts, DimensionError
  /// for mixed dimensions. States are normalized on entry.
  explicit EnsembleSpec(std::vector<EnsembleGroup> groups);
  static EnsembleSpec identical(const StateVector& state, std::uint64_t count);

  [[nodiscard]] const std::vector<EnsembleGroup>& groups() const { return groups_; }
  [[nodiscard]] std::uint64_t total() const { return total_; }
  [[nodiscard]] Index dim() const { return groups_.front().state.dim(); }

 private:
  std::vector<EnsembleGroup> groups_;
  std::uint64_t total_ = 0;
};

struct AverageResidual {
  double abar;      // <Psi| (1/N) sum_i A_i |Psi>
  double residual;  // || ((1/N) sum_i A_i - abar) |Psi> ||
};

/// True iff ||A psi - <A> psi|| <= tol.
bool is_deterministic(const HermitianOperator& a, const StateVector& psi, double tol);

/// (d-1)^2 + 1 linearly independent operators, each having psi as an
/// eigenvector: |psi><psi| followed by the Hermitian basis
/// {|e_k><e_k|, |e_k><e_l| + h.c., i|e_k><e_l| + h.c.} of the orthogonal
/// complement. Requires d >= 2 (DimensionError otherwise).
std::vector<HermitianOperator> deterministic_basis(const StateVector& psi);

/// || [A, B] psi ||.
double commute_on_state(const HermitianOperator& a, const HermitianOperator& b,
                        const StateVector& psi);

Decomposition decompose(const HermitianOperator& a, const StateVector& psi);

/// Closed form: abar = sum N_i <A>_i / N and
/// residual = sqrt(sum N_i Delta_i^2) / N.
AverageResidual average_operator_residual(const HermitianOperator& a, const EnsembleSpec& spec);

/// Same quantities from the explicit product state on d^N amplitudes, with
/// each A_i applied to its own tensor factor. Throws TooLargeForOracle when
/// d^N > 2^14.
AverageResidual brute_force_average(const HermitianOperator& a, const EnsembleSpec& spec);

/// Scale of [S_x, S_y] = i S_z / N for average spin-1/2 operators
/// S_a = (1/N) sum_i sigma_a^i / 2: the largest |eigenvalue| of S_z / N,
/// i.e. 1 / (2N).
double average_spin_commutator(std::uint64_t n);

struct SpinCommutatorCheck {
  double defect;  // max entrywise |[S_x, S_y] - i S_z / N|
  double scale;   // max entrywise |[S_x, S_y]|
};

/// Builds the three average spin operators on 2^N amplitudes (sparse) and
/// checks the commutator identity. 1 <= N <= 12, else TooLargeForOracle.
SpinCommutatorCheck brute_force_spin_commutator(int n);

struct FluctuationResult {
  double abar_mean;      // trial mean of the ensemble average
  double residual_mean;  // trial mean of the residual norm
};

/// Every copy is normalize(psi + delta_i) with delta_i amplitudes of
/// magnitude U[0, noise_scale] and phase U[0, 2 pi). Trial t draws from
/// master.stream(t).
FluctuationResult fluctuation_robustness(const HermitianOperator& a, const StateVector& psi,
                                         double noise_scale, std::uint64_t n,
                                         std::uint64_t trials, const SeededRng& master,
                                         unsigned threads = 1);

}  // namespace tsvf
