#pragma once

// Dense finite-dimensional Hilbert-space algebra.
//
// Conventions used throughout the library:
//   * hbar = 1. Spin operators carry their explicit 1/2 (S = sigma / 2).
//   * Tensor products are row-major: in tensor(a, b) the index of `a` varies
//     slowest, so amplitude (i, j) lives at i * b.dim() + j. Multi-factor
//     products follow the same rule left to right.
//   * Eigenvectors returned by eig_hermitian have their first non-negligible
//     component real and positive.

#include <complex>
#include <initializer_list>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace tsvf {

class SeededRng;

using Complex = std::complex<double>;
using Index = Eigen::Index;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

/// Tolerance for exact algebraic identities.
inline constexpr double kExactTol = 1e-12;
/// Tolerance for eigensolver outputs.
inline constexpr double kEigenTol = 1e-10;

/// Pure state: complex amplitudes of dimension >= 1.
///
/// The constructor does not normalize; callers that need a unit vector use
/// normalized(). Every factory below returns unit vectors.
class StateVector {
 public:
  explicit StateVector(Vector amps);
  StateVector(std::initializer_list<Complex> amps);

  /// Computational basis vector |k> in dimension `dim`.
  static StateVector basis(Index dim, Index k);
  /// Haar-like random unit vector (normalized complex Gaussian entries).
  static StateVector random(Index dim, SeededRng& rng);

  [[nodiscard]] Index dim() const { return amps_.size(); }
  [[nodiscard]] const Vector& amps() const { return amps_; }
  [[nodiscard]] Complex operator[](Index k) const { return amps_[k]; }

  [[nodiscard]] double norm() const { return amps_.norm(); }
  [[nodiscard]] bool is_normalized(double tol = kExactTol) const;
  /// Unit vector along this one; throws InvariantError for the zero vector.
  [[nodiscard]] StateVector normalized() const;

 private:
  Vector amps_;
};

/// Observable: a matrix equal to its conjugate transpose within 1e-12.
class HermitianOperator {
 public:
  /// Throws InvariantError if `m` is not square or not Hermitian within `tol`.
  /// Stored entries are the exactly Hermitian part (m + m^dagger) / 2.
  explicit HermitianOperator(const Matrix& m, double tol = kExactTol);

  static HermitianOperator identity(Index dim);
  static HermitianOperator pauli_x();
  static HermitianOperator pauli_y();
  static HermitianOperator pauli_z();
  /// |psi><psi| for the normalized direction of psi.
  static HermitianOperator projector(const StateVector& psi);
  static HermitianOperator random(Index dim, SeededRng& rng);

  [[nodiscard]] Index dim() const { return m_.rows(); }
  [[nodiscard]] const Matrix& matrix() const { return m_; }

  /// A|psi>, unnormalized.
  [[nodiscard]] Vector apply(const StateVector& psi) const;
  /// <psi|A|psi> (psi assumed normalized). Real by hermiticity.
  [[nodiscard]] double expectation(const StateVector& psi) const;

  friend HermitianOperator operator+(const HermitianOperator& a, const HermitianOperator& b);
  friend HermitianOperator operator*(double s, const HermitianOperator& a);

 private:
  Matrix m_;
};

/// Mixed state: Hermitian, unit trace, positive semidefinite.
class DensityMatrix {
 public:
  /// Throws InvariantError when hermiticity (1e-12), trace (1e-12) or
  /// positivity (eigenvalues >= -1e-10) fails.
  explicit DensityMatrix(const Matrix& m);

  static DensityMatrix from_pure(const StateVector& psi);

  [[nodiscard]] Index dim() const { return m_.rows(); }
  [[nodiscard]] const Matrix& matrix() const { return m_; }
  [[nodiscard]] double trace() const { return m_.trace().real(); }

 private:
  Matrix m_;
};

struct EigenSystem {
  std::vector<double> values;          // ascending
  std::vector<StateVector> vectors;    // orthonormal, vectors[i] <-> values[i]
};

/// One eigenvalue with its full eigenspace.
struct Eigenspace {
  double value;
  std::vector<StateVector> basis;
  Matrix projector;
};

/// Kronecker product of state vectors (row-major, see header comment).
StateVector tensor(const StateVector& a, const StateVector& b);
/// Kronecker product of matrices, same ordering as tensor().
Matrix kron(const Matrix& a, const Matrix& b);

/// <a|b>: conjugate-linear in a. Throws DimensionError on mismatch.
Complex inner(const StateVector& a, const StateVector& b);

EigenSystem eig_hermitian(const HermitianOperator& a);
/// Validating overload: throws InvariantError if `m` is not Hermitian.
EigenSystem eig_hermitian(const Matrix& m);

/// Eigenspaces of `a`, eigenvalues closer than `degeneracy_tol` merged.
std::vector<Eigenspace> spectral_decomposition(const HermitianOperator& a,
                                               double degeneracy_tol = kEigenTol);

/// Reduced density matrix on the subsystems listed in `keep`.
///
/// `dims` gives the subsystem dimensions in tensor order; their product must
/// equal rho.dim(). `keep` lists distinct subsystem indices; the result is
/// ordered by increasing subsystem index regardless of the order in `keep`.
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const Index> dims,
                            std::span<const Index> keep);
/// Same as partial_trace(DensityMatrix::from_pure(psi), ...) without forming
/// the full density matrix.
DensityMatrix partial_trace(const StateVector& psi, std::span<const Index> dims,
                            std::span<const Index> keep);

}  // namespace tsvf
