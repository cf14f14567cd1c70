#include "tsvf/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>

#include "tsvf/errors.hpp"
#include "tsvf/rng.hpp"

namespace tsvf {

namespace {

double hermiticity_defect(const Matrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    throw InvariantError(std::string(what) + ": matrix must be square with dim >= 1, got " +
                         std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

void require_same_dim(Index a, Index b, const char* what) {
  if (a != b) {
    throw DimensionError(std::string(what) + ": dimension mismatch " + std::to_string(a) +
                         " vs " + std::to_string(b));
  }
}

// Rotate the global phase so the first component above 1e-8 (relative) is real positive.
Vector fix_phase(Vector v) {
  const double scale = v.cwiseAbs().maxCoeff();
  for (Index k = 0; k < v.size(); ++k) {
    if (std::abs(v[k]) > 1e-8 * scale) {
      v *= std::conj(v[k]) / std::abs(v[k]);
      v[k] = std::abs(v[k]);
      break;
    }
  }
  return v;
}

}  // namespace

// ---------------------------------------------------------------------------
// StateVector

StateVector::StateVector(Vector amps) : amps_(std::move(amps)) {
  if (amps_.size() < 1) throw DimensionError("StateVector: dim must be >= 1");
}

StateVector::StateVector(std::initializer_list<Complex> amps)
    : StateVector(Vector::Map(amps.begin(), static_cast<Index>(amps.size()))) {}

StateVector StateVector::basis(Index dim, Index k) {
  if (dim < 1 || k < 0 || k >= dim) {
    throw DimensionError("StateVector::basis: index " + std::to_string(k) +
                         " out of range for dim " + std::to_string(dim));
  }
  Vector v = Vector::Zero(dim);
  v[k] = 1.0;
  return StateVector(std::move(v));
}

StateVector StateVector::random(Index dim, SeededRng& rng) {
  if (dim < 1) throw DimensionError("StateVector::random: dim must be >= 1");
  Vector v(dim);
  for (Index k = 0; k < dim; ++k) {
    const double re = rng.normal();
    const double im = rng.normal();
    v[k] = Complex(re, im);
  }
  return StateVector(std::move(v)).normalized();
}

bool StateVector::is_normalized(double tol) const {
  return std::abs(amps_.squaredNorm() - 1.0) <= tol;
}

StateVector StateVector::normalized() const {
  const double n = amps_.norm();
  if (n == 0.0) throw InvariantError("StateVector::normalized: zero vector");
  return StateVector(amps_ / n);
}

// ---------------------------------------------------------------------------
// HermitianOperator

HermitianOperator::HermitianOperator(const Matrix& m, double tol) {
  require_square(m, "HermitianOperator");
  const double defect = hermiticity_defect(m);
  if (defect > tol) {
    throw InvariantError("HermitianOperator: matrix is not Hermitian (max |A - A^dagger| = " +
                         std::to_string(defect) + ")");
  }
  m_ = 0.5 * (m + m.adjoint());
}

HermitianOperator HermitianOperator::identity(Index dim) {
  return HermitianOperator(Matrix::Identity(dim, dim));
}

HermitianOperator HermitianOperator::pauli_x() {
  Matrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return HermitianOperator(m);
}

HermitianOperator HermitianOperator::pauli_y() {
  const Complex i(0.0, 1.0);
  Matrix m(2, 2);
  m << 0.0, -i, i, 0.0;
  return HermitianOperator(m);
}

HermitianOperator HermitianOperator::pauli_z() {
  Matrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return HermitianOperator(m);
}

HermitianOperator HermitianOperator::projector(const StateVector& psi) {
  const Vector v = psi.normalized().amps();
  return HermitianOperator(v * v.adjoint());
}

HermitianOperator HermitianOperator::random(Index dim, SeededRng& rng) {
  Matrix m(dim, dim);
  for (Index r = 0; r < dim; ++r) {
    for (Index c = 0; c < dim; ++c) {
      const double re = rng.normal();
      const double im = rng.normal();
      m(r, c) = Complex(re, im);
    }
  }
  return HermitianOperator(0.5 * (m + m.adjoint()));
}

Vector HermitianOperator::apply(const StateVector& psi) const {
  require_same_dim(dim(), psi.dim(), "HermitianOperator::apply");
  return m_ * psi.amps();
}

double HermitianOperator::expectation(const StateVector& psi) const {
  return psi.amps().dot(apply(psi)).real();
}

HermitianOperator operator+(const HermitianOperator& a, const HermitianOperator& b) {
  require_same_dim(a.dim(), b.dim(), "HermitianOperator::operator+");
  return HermitianOperator(a.m_ + b.m_);
}

HermitianOperator operator*(double s, const HermitianOperator& a) {
  return HermitianOperator(s * a.m_);
}

// ---------------------------------------------------------------------------
// DensityMatrix

DensityMatrix::DensityMatrix(const Matrix& m) {
  require_square(m, "DensityMatrix");
  const double defect = hermiticity_defect(m);
  if (defect > kExactTol) {
    throw InvariantError("DensityMatrix: not Hermitian (defect " + std::to_string(defect) + ")");
  }
  const Complex tr = m.trace();
  if (std::abs(tr - 1.0) > kExactTol) {
    throw InvariantError("DensityMatrix: trace " + std::to_string(tr.real()) + " != 1");
  }
  m_ = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m_, Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < -kEigenTol) {
    throw InvariantError("DensityMatrix: negative eigenvalue " +
                         std::to_string(solver.eigenvalues().minCoeff()));
  }
}

DensityMatrix DensityMatrix::from_pure(const StateVector& psi) {
  const Vector v = psi.normalized().amps();
  return DensityMatrix(v * v.adjoint());
}

// ---------------------------------------------------------------------------
// Free functions

StateVector tensor(const StateVector& a, const StateVector& b) {
  Vector out(a.dim() * b.dim());
  for (Index i = 0; i < a.dim(); ++i) {
    out.segment(i * b.dim(), b.dim()) = a[i] * b.amps();
  }
  return StateVector(std::move(out));
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index r = 0; r < a.rows(); ++r) {
    for (Index c = 0; c < a.cols(); ++c) {
      out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
    }
  }
  return out;
}

Complex inner(const StateVector& a, const StateVector& b) {
  require_same_dim(a.dim(), b.dim(), "inner");
  return a.amps().dot(b.amps());
}

EigenSystem eig_hermitian(const HermitianOperator& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.matrix());
  if (solver.info() != Eigen::Success) {
    throw InvariantError("eig_hermitian: eigensolver did not converge");
  }
  EigenSystem out;
  out.values.reserve(static_cast<std::size_t>(a.dim()));
  out.vectors.reserve(static_cast<std::size_t>(a.dim()));
  for (Index k = 0; k < a.dim(); ++k) {
    out.values.push_back(solver.eigenvalues()[k]);
    out.vectors.emplace_back(fix_phase(solver.eigenvectors().col(k)));
  }
  return out;
}

EigenSystem eig_hermitian(const Matrix& m) { return eig_hermitian(HermitianOperator(m)); }

std::vector<Eigenspace> spectral_decomposition(const HermitianOperator& a,
                                               double degeneracy_tol) {
  EigenSystem es = eig_hermitian(a);
  std::vector<Eigenspace> spaces;
  for (std::size_t k = 0; k < es.values.size(); ++k) {
    const double v = es.values[k];
    // Chained comparison against the previous eigenvalue in ascending order.
    if (spaces.empty() ||
        std::abs(v - es.values[k - 1]) > degeneracy_tol * std::max(1.0, std::abs(v))) {
      spaces.push_back(Eigenspace{v, {}, Matrix::Zero(a.dim(), a.dim())});
    }
    Eigenspace& space = spaces.back();
    space.basis.push_back(es.vectors[k]);
    space.projector += es.vectors[k].amps() * es.vectors[k].amps().adjoint();
  }
  // Report each merged eigenvalue as the Rayleigh quotient mean of its members.
  for (Eigenspace& space : spaces) {
    double sum = 0.0;
    for (const StateVector& v : space.basis) sum += a.expectation(v);
    space.value = sum / static_cast<double>(space.basis.size());
  }
  return spaces;
}

namespace {

struct SubsystemLayout {
  Index kept_dim = 1;
  Index traced_dim = 1;
  // full_index[t * kept_dim + k] = index into the full space.
  std::vector<Index> full_index;
};

SubsystemLayout make_layout(Index total_dim, std::span<const Index> dims,
                            std::span<const Index> keep) {
  if (dims.empty()) throw DimensionError("partial_trace: empty subsystem list");
  Index product = 1;
  for (Index d : dims) {
    if (d < 1) throw DimensionError("partial_trace: subsystem dimension must be >= 1");
    product *= d;
  }
  if (product != total_dim) {
    throw DimensionError("partial_trace: product of dims " + std::to_string(product) +
                         " != state dimension " + std::to_string(total_dim));
  }
  const auto n = static_cast<Index>(dims.size());
  std::vector<bool> kept(static_cast<std::size_t>(n), false);
  for (Index k : keep) {
    if (k < 0 || k >= n) throw DimensionError("partial_trace: keep index out of range");
    if (kept[static_cast<std::size_t>(k)]) {
      throw DimensionError("partial_trace: duplicate keep index");
    }
    kept[static_cast<std::size_t>(k)] = true;
  }

  SubsystemLayout layout;
  for (Index s = 0; s < n; ++s) {
    (kept[static_cast<std::size_t>(s)] ? layout.kept_dim : layout.traced_dim) *=
        dims[static_cast<std::size_t>(s)];
  }
  layout.full_index.resize(static_cast<std::size_t>(total_dim));
  std::vector<Index> digits(static_cast<std::size_t>(n), 0);
  for (Index full = 0; full < total_dim; ++full) {
    Index k = 0;
    Index t = 0;
    for (Index s = 0; s < n; ++s) {
      const auto su = static_cast<std::size_t>(s);
      if (kept[su]) {
        k = k * dims[su] + digits[su];
      } else {
        t = t * dims[su] + digits[su];
      }
    }
    layout.full_index[static_cast<std::size_t>(t * layout.kept_dim + k)] = full;
    // Increment the mixed-radix counter, last subsystem fastest.
    for (Index s = n - 1; s >= 0; --s) {
      const auto su = static_cast<std::size_t>(s);
      if (++digits[su] < dims[su]) break;
      digits[su] = 0;
    }
  }
  return layout;
}

}  // namespace

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const Index> dims,
                            std::span<const Index> keep) {
  const SubsystemLayout layout = make_layout(rho.dim(), dims, keep);
  const Index kd = layout.kept_dim;
  Matrix out = Matrix::Zero(kd, kd);
  for (Index t = 0; t < layout.traced_dim; ++t) {
    const Index* row = layout.full_index.data() + t * kd;
    for (Index a = 0; a < kd; ++a) {
      for (Index b = 0; b < kd; ++b) out(a, b) += rho.matrix()(row[a], row[b]);
    }
  }
  return DensityMatrix(out);
}

DensityMatrix partial_trace(const StateVector& psi, std::span<const Index> dims,
                            std::span<const Index> keep) {
  const SubsystemLayout layout = make_layout(psi.dim(), dims, keep);
  const Vector amps = psi.normalized().amps();
  Matrix reshaped(layout.kept_dim, layout.traced_dim);
  for (Index t = 0; t < layout.traced_dim; ++t) {
    for (Index k = 0; k < layout.kept_dim; ++k) {
      reshaped(k, t) = amps[layout.full_index[static_cast<std::size_t>(t * layout.kept_dim + k)]];
    }
  }
  return DensityMatrix(reshaped * reshaped.adjoint());
}

}  // namespace tsvf
