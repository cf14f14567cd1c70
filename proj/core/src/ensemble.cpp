#include "tsvf/ensemble.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Sparse>

#include "parallel.hpp"
#include "site_ops.hpp"
#include "tsvf/errors.hpp"

namespace tsvf {

namespace {

constexpr double kPerpThreshold = 1e-12;

void require_same_dim(Index a, Index b, const char* what) {
  if (a != b) {
    throw DimensionError(std::string(what) + ": dimension mismatch " + std::to_string(a) +
                         " vs " + std::to_string(b));
  }
}

using SparseMatrix = Eigen::SparseMatrix<Complex>;

// (1 / (2N)) sum_i sigma^i on N qubits, site 0 most significant.
SparseMatrix average_spin(const Matrix& pauli, int n) {
  const Index dim = Index{1} << n;
  const double scale = 1.0 / (2.0 * n);
  std::vector<Eigen::Triplet<Complex>> triplets;
  triplets.reserve(static_cast<std::size_t>(dim) * static_cast<std::size_t>(n) * 2);
  for (Index b = 0; b < dim; ++b) {
    for (int site = 0; site < n; ++site) {
      const int shift = n - 1 - site;
      const Index bit = (b >> shift) & 1;
      for (Index r = 0; r < 2; ++r) {
        const Complex v = pauli(r, bit);
        if (v == Complex(0.0, 0.0)) continue;
        const Index row = (b & ~(Index{1} << shift)) | (r << shift);
        triplets.emplace_back(row, b, scale * v);
      }
    }
  }
  SparseMatrix m(dim, dim);
  m.setFromTriplets(triplets.begin(), triplets.end());
  return m;
}

double max_abs_coeff(const SparseMatrix& m) {
  double best = 0.0;
  for (Index k = 0; k < m.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) best = std::max(best, std::abs(it.value()));
  }
  return best;
}

}  // namespace

EnsembleSpec::EnsembleSpec(std::vector<EnsembleGroup> groups) {
  if (groups.empty()) throw InvariantError("EnsembleSpec: no groups");
  const Index d = groups.front().state.dim();
  for (EnsembleGroup& g : groups) {
    require_same_dim(d, g.state.dim(), "EnsembleSpec");
    if (g.count < 1) throw InvariantError("EnsembleSpec: group count must be >= 1");
    groups_.push_back({g.state.normalized(), g.count});
    total_ += g.count;
  }
}

EnsembleSpec EnsembleSpec::identical(const StateVector& state, std::uint64_t count) {
  return EnsembleSpec({{state, count}});
}

bool is_deterministic(const HermitianOperator& a, const StateVector& psi, double tol) {
  return decompose(a, psi).delta <= tol;
}

std::vector<HermitianOperator> deterministic_basis(const StateVector& psi) {
  const Index d = psi.dim();
  if (d < 2) throw DimensionError("deterministic_basis: need dim >= 2");
  const StateVector unit = psi.normalized();

  // Orthonormal basis of the complement: eigenvalue-1 eigenvectors of 1 - |psi><psi|.
  const Matrix complement = Matrix::Identity(d, d) - unit.amps() * unit.amps().adjoint();
  const EigenSystem es = eig_hermitian(complement);
  std::vector<Vector> e;
  for (std::size_t k = 0; k < es.values.size(); ++k) {
    if (es.values[k] > 0.5) e.push_back(es.vectors[k].amps());
  }

  const Complex i(0.0, 1.0);
  std::vector<HermitianOperator> out;
  out.reserve(static_cast<std::size_t>((d - 1) * (d - 1) + 1));
  out.push_back(HermitianOperator::projector(unit));
  for (std::size_t k = 0; k < e.size(); ++k) {
    out.emplace_back(e[k] * e[k].adjoint());
    for (std::size_t l = k + 1; l < e.size(); ++l) {
      const Matrix kl = e[k] * e[l].adjoint();
      out.emplace_back(kl + kl.adjoint());
      out.emplace_back(i * kl - i * kl.adjoint());
    }
  }
  return out;
}

double commute_on_state(const HermitianOperator& a, const HermitianOperator& b,
                        const StateVector& psi) {
  require_same_dim(a.dim(), b.dim(), "commute_on_state");
  require_same_dim(a.dim(), psi.dim(), "commute_on_state");
  const Vector& v = psi.amps();
  return (a.matrix() * (b.matrix() * v) - b.matrix() * (a.matrix() * v)).norm();
}

Decomposition decompose(const HermitianOperator& a, const StateVector& psi) {
  require_same_dim(a.dim(), psi.dim(), "decompose");
  const StateVector unit = psi.normalized();
  const Vector a_psi = a.apply(unit);
  const double abar = unit.amps().dot(a_psi).real();
  const Vector rest = a_psi - abar * unit.amps();
  const double delta = rest.norm();
  Decomposition out{abar, delta, std::nullopt};
  if (delta > kPerpThreshold) out.perp = StateVector(rest / delta);
  return out;
}

AverageResidual average_operator_residual(const HermitianOperator& a, const EnsembleSpec& spec) {
  require_same_dim(a.dim(), spec.dim(), "average_operator_residual");
  double weighted_mean = 0.0;
  double weighted_var = 0.0;
  for (const EnsembleGroup& g : spec.groups()) {
    const Decomposition dec = decompose(a, g.state);
    const double n = static_cast<double>(g.count);
    weighted_mean += n * dec.abar;
    weighted_var += n * dec.delta * dec.delta;
  }
  const double total = static_cast<double>(spec.total());
  return {weighted_mean / total, std::sqrt(weighted_var) / total};
}

AverageResidual brute_force_average(const HermitianOperator& a, const EnsembleSpec& spec) {
  require_same_dim(a.dim(), spec.dim(), "brute_force_average");
  const Index d = spec.dim();
  const auto sites = static_cast<Index>(spec.total());
  double full_dim = std::pow(static_cast<double>(d), static_cast<double>(sites));
  if (full_dim > static_cast<double>(kOracleMaxDim)) {
    throw TooLargeForOracle("brute_force_average: d^N = " + std::to_string(full_dim) +
                            " exceeds 2^14");
  }

  std::optional<StateVector> product;
  for (const EnsembleGroup& g : spec.groups()) {
    for (std::uint64_t c = 0; c < g.count; ++c) {
      product = product ? tensor(*product, g.state) : g.state;
    }
  }
  const Vector& psi = product->amps();

  Vector avg = Vector::Zero(psi.size());
  for (Index s = 0; s < sites; ++s) avg += detail::apply_site(a.matrix(), psi, d, sites, s);
  avg /= static_cast<double>(sites);

  const double abar = psi.dot(avg).real();
  return {abar, (avg - abar * psi).norm()};
}

double average_spin_commutator(std::uint64_t n) {
  if (n < 1) throw InvariantError("average_spin_commutator: N must be >= 1");
  return 1.0 / (2.0 * static_cast<double>(n));
}

SpinCommutatorCheck brute_force_spin_commutator(int n) {
  if (n < 1) throw InvariantError("brute_force_spin_commutator: N must be >= 1");
  if (n > 12) throw TooLargeForOracle("brute_force_spin_commutator: N > 12");
  const SparseMatrix sx = average_spin(HermitianOperator::pauli_x().matrix(), n);
  const SparseMatrix sy = average_spin(HermitianOperator::pauli_y().matrix(), n);
  const SparseMatrix sz = average_spin(HermitianOperator::pauli_z().matrix(), n);

  const SparseMatrix comm = SparseMatrix(sx * sy) - SparseMatrix(sy * sx);
  const SparseMatrix expected = sz * Complex(0.0, 1.0 / n);
  const SparseMatrix diff = comm - expected;
  return {max_abs_coeff(diff), max_abs_coeff(comm)};
}

FluctuationResult fluctuation_robustness(const HermitianOperator& a, const StateVector& psi,
                                         double noise_scale, std::uint64_t n,
                                         std::uint64_t trials, const SeededRng& master,
                                         unsigned threads) {
  require_same_dim(a.dim(), psi.dim(), "fluctuation_robustness");
  if (!(noise_scale >= 0.0)) throw InvariantError("fluctuation_robustness: noise_scale < 0");
  if (n < 1 || trials < 1) throw InvariantError("fluctuation_robustness: N, trials must be >= 1");

  const StateVector unit = psi.normalized();
  std::vector<AverageResidual> per_trial(trials);
  detail::parallel_for(0, trials, threads, [&](std::uint64_t t) {
    if (noise_scale == 0.0) {
      per_trial[t] = average_operator_residual(a, EnsembleSpec::identical(unit, n));
      return;
    }
    SeededRng rng = master.stream(t);
    std::vector<EnsembleGroup> copies;
    copies.reserve(n);
    for (std::uint64_t c = 0; c < n; ++c) {
      Vector v = unit.amps();
      for (Index k = 0; k < v.size(); ++k) {
        const double magnitude = noise_scale * rng.uniform();
        const double phase = 2.0 * std::numbers::pi * rng.uniform();
        v[k] += std::polar(magnitude, phase);
      }
      copies.push_back({StateVector(std::move(v)), 1});
    }
    per_trial[t] = average_operator_residual(a, EnsembleSpec(std::move(copies)));
  });

  FluctuationResult out{0.0, 0.0};
  for (const AverageResidual& r : per_trial) {
    out.abar_mean += r.abar;
    out.residual_mean += r.residual;
  }
  out.abar_mean /= static_cast<double>(trials);
  out.residual_mean /= static_cast<double>(trials);
  return out;
}

}  // namespace tsvf
