#pragma once

// Independent reference computations for the tests. Nothing here calls into
// the library's algorithms; only the plain Eigen types are shared.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using cd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline Mat pauli_x() { Mat m(2, 2); m << 0, 1, 1, 0; return m; }
inline Mat pauli_y() { Mat m(2, 2); m << 0, cd(0, -1), cd(0, 1), 0; return m; }
inline Mat pauli_z() { Mat m(2, 2); m << 1, 0, 0, -1; return m; }

// Kronecker product written out index by index (a's index slowest).
inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      for (Eigen::Index k = 0; k < b.rows(); ++k)
        for (Eigen::Index l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

inline Vec kron(const Vec& a, const Vec& b) {
  Vec out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i)
    for (Eigen::Index k = 0; k < b.size(); ++k) out(i * b.size() + k) = a(i) * b(k);
  return out;
}

// a on one site of an n-site register, identity elsewhere.
inline Mat site_operator(const Mat& a, int n, int site) {
  const Eigen::Index d = a.rows();
  Mat out = Mat::Identity(1, 1);
  for (int s = 0; s < n; ++s) out = kron(out, s == site ? a : Mat(Mat::Identity(d, d)));
  return out;
}

// (1/n) sum_i a_i on n sites.
inline Mat average_operator(const Mat& a, int n) {
  Mat sum = Mat::Zero(static_cast<Eigen::Index>(std::pow(a.rows(), n)),
                      static_cast<Eigen::Index>(std::pow(a.rows(), n)));
  for (int s = 0; s < n; ++s) sum += site_operator(a, n, s);
  return sum / static_cast<double>(n);
}

// <phi|a|psi> / <phi|psi> by explicit sums.
inline cd weak_value(const Vec& psi, const Vec& phi, const Mat& a) {
  cd num = 0, den = 0;
  for (Eigen::Index i = 0; i < psi.size(); ++i) {
    den += std::conj(phi(i)) * psi(i);
    for (Eigen::Index j = 0; j < psi.size(); ++j) num += std::conj(phi(i)) * a(i, j) * psi(j);
  }
  return num / den;
}

// Composite Simpson rule on [lo, hi] with an even number of intervals.
inline double simpson(const std::function<double(double)>& f, double lo, double hi,
                      int intervals = 200000) {
  const double h = (hi - lo) / intervals;
  double s = f(lo) + f(hi);
  for (int k = 1; k < intervals; ++k) s += f(lo + k * h) * (k % 2 == 1 ? 4.0 : 2.0);
  return s * h / 3.0;
}

inline double gaussian_amplitude(double q, double mean, double sigma) {
  return std::pow(2.0 * std::numbers::pi * sigma * sigma, -0.25) *
         std::exp(-(q - mean) * (q - mean) / (4.0 * sigma * sigma));
}

// Unnormalized post-selected pointer density for a qubit observable diagonal
// in the computational basis with eigenvalues (e0, e1).
inline double post_selected_density(double q, const Vec& psi, const Vec& post, double e0,
                                    double e1, double g, double sigma) {
  const cd c0 = std::conj(post(0)) * psi(0);
  const cd c1 = std::conj(post(1)) * psi(1);
  const cd amp = c0 * gaussian_amplitude(q, g * e0, sigma) + c1 * gaussian_amplitude(q, g * e1, sigma);
  return std::norm(amp);
}

// Mean and success probability of that density by quadrature.
struct Moments {
  double success;
  double mean;
};

inline Moments post_selected_moments(const Vec& psi, const Vec& post, double e0, double e1,
                                     double g, double sigma) {
  const double lo = -12.0 * sigma - g * 2.0;
  const double hi = 12.0 * sigma + g * 2.0;
  auto f = [&](double q) { return post_selected_density(q, psi, post, e0, e1, g, sigma); };
  const double z = simpson(f, lo, hi);
  const double m = simpson([&](double q) { return q * f(q); }, lo, hi);
  return {z, m / z};
}

// Central finite difference.
inline double derivative(const std::function<double(double)>& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

// Three-sigma binomial band half-width.
inline double binomial_band(double p, double trials) {
  return 3.0 * std::sqrt(p * (1.0 - p) / trials);
}

}  // namespace oracle
