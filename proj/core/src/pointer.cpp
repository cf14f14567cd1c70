#include "tsvf/pointer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "tsvf/errors.hpp"
#include "tsvf/rng.hpp"

namespace tsvf {

namespace {

constexpr double kMinBranchWeight = 1e-28;
constexpr double kMinSuccess = 1e-300;

// exp(-(a - b)^2 / (8 sigma^2)): overlap of two shifted pointer amplitudes.
double overlap_factor(double a, double b, double sigma) {
  const double d = a - b;
  return std::exp(-d * d / (8.0 * sigma * sigma));
}

}  // namespace

double GaussianPointer::amplitude(double q) const {
  const double x = q - mean;
  return std::pow(2.0 * std::numbers::pi * sigma * sigma, -0.25) *
         std::exp(-x * x / (4.0 * sigma * sigma));
}

double GaussianPointer::density(double q) const {
  const double a = amplitude(q);
  return a * a;
}

double pointer_overlap(const GaussianPointer& a, const GaussianPointer& b) {
  if (a.sigma != b.sigma) {
    // General widths: <phi_a|phi_b> for real Gaussians.
    const double s2 = a.sigma * a.sigma + b.sigma * b.sigma;
    const double d = a.mean - b.mean;
    return std::sqrt(2.0 * a.sigma * b.sigma / s2) * std::exp(-d * d / (4.0 * s2));
  }
  return overlap_factor(a.mean, b.mean, a.sigma);
}

double JointPointerState::total_weight() const {
  double w = 0.0;
  for (const PointerBranch& t : terms) w += std::norm(t.alpha);
  return w;
}

JointPointerState couple(const StateVector& psi, const HermitianOperator& a, double g,
                         double sigma) {
  if (psi.dim() != a.dim()) {
    throw DimensionError("couple: state dim " + std::to_string(psi.dim()) +
                         " != operator dim " + std::to_string(a.dim()));
  }
  if (!(sigma > 0.0)) throw InvariantError("couple: sigma must be > 0");

  JointPointerState joint{{}, g, sigma};
  for (const Eigenspace& space : spectral_decomposition(a)) {
    const Vector projected = space.projector * psi.amps();
    const double weight = projected.squaredNorm();
    if (weight < kMinBranchWeight) continue;

    GaussianPointer pointer{sigma, g * space.value};
    if (space.basis.size() == 1) {
      const StateVector& v = space.basis.front();
      joint.terms.push_back({space.value, inner(v, psi), v, pointer});
    } else {
      const double norm = std::sqrt(weight);
      joint.terms.push_back({space.value, Complex(norm, 0.0), StateVector(projected / norm), pointer});
    }
  }
  if (joint.terms.empty()) throw InvariantError("couple: input state has zero norm");
  return joint;
}

// ---------------------------------------------------------------------------
// ReadoutDensity

ReadoutDensity::ReadoutDensity(const JointPointerState& joint,
                               const std::optional<StateVector>& post)
    : coherent_(post.has_value()), sigma_(joint.sigma) {
  double max_abs = 0.0;
  for (const PointerBranch& t : joint.terms) max_abs = std::max(max_abs, std::abs(t.eigenvalue));
  half_width_ = 10.0 * sigma_ + std::abs(joint.coupling) * max_abs;

  if (coherent_) {
    if (post->dim() != joint.system_dim()) {
      throw DimensionError("readout_density: post-selection dim " + std::to_string(post->dim()) +
                           " != system dim " + std::to_string(joint.system_dim()));
    }
    const StateVector phi = post->normalized();
    for (const PointerBranch& t : joint.terms) {
      centres_.push_back(t.pointer.mean);
      coeffs_.push_back(t.alpha * inner(phi, t.branch));
    }
    success_ = 0.0;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
      for (std::size_t j = 0; j < coeffs_.size(); ++j) {
        success_ += (std::conj(coeffs_[i]) * coeffs_[j]).real() *
                    overlap_factor(centres_[i], centres_[j], sigma_);
      }
    }
    if (!(success_ >= kMinSuccess)) {
      throw PostSelectionImpossible(
          "readout_density: post-selected state is orthogonal to every pointer branch");
    }
  } else {
    double total = 0.0;
    for (const PointerBranch& t : joint.terms) {
      centres_.push_back(t.pointer.mean);
      coeffs_.emplace_back(std::abs(t.alpha), 0.0);
      total += std::norm(t.alpha);
    }
    // Renormalize so an unnormalized input still yields a density.
    for (Complex& c : coeffs_) c /= std::sqrt(total);
    success_ = 1.0;
  }
}

double ReadoutDensity::raw(double q) const {
  if (coherent_) {
    Complex amp(0.0, 0.0);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
      amp += coeffs_[i] * GaussianPointer{sigma_, centres_[i]}.amplitude(q);
    }
    return std::norm(amp);
  }
  double f = 0.0;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    f += std::norm(coeffs_[i]) * GaussianPointer{sigma_, centres_[i]}.density(q);
  }
  return f;
}

double ReadoutDensity::operator()(double q) const { return raw(q) / success_; }

double ReadoutDensity::mean() const {
  double m = 0.0;
  if (coherent_) {
    // phi_a(q) phi_b(q) = overlap(a, b) * N(q; (a + b) / 2, sigma^2).
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
      for (std::size_t j = 0; j < coeffs_.size(); ++j) {
        m += (std::conj(coeffs_[i]) * coeffs_[j]).real() *
             overlap_factor(centres_[i], centres_[j], sigma_) * 0.5 * (centres_[i] + centres_[j]);
      }
    }
    return m / success_;
  }
  for (std::size_t i = 0; i < coeffs_.size(); ++i) m += std::norm(coeffs_[i]) * centres_[i];
  return m;
}

double ReadoutDensity::variance() const {
  double second = 0.0;
  const double s2 = sigma_ * sigma_;
  if (coherent_) {
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
      for (std::size_t j = 0; j < coeffs_.size(); ++j) {
        const double mid = 0.5 * (centres_[i] + centres_[j]);
        second += (std::conj(coeffs_[i]) * coeffs_[j]).real() *
                  overlap_factor(centres_[i], centres_[j], sigma_) * (mid * mid + s2);
      }
    }
    second /= success_;
  } else {
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
      second += std::norm(coeffs_[i]) * (centres_[i] * centres_[i] + s2);
    }
  }
  const double m = mean();
  return second - m * m;
}

ReadoutDensity readout_density(const JointPointerState& joint,
                               const std::optional<StateVector>& post) {
  return ReadoutDensity(joint, post);
}

// ---------------------------------------------------------------------------
// ReadingSampler

ReadingSampler::ReadingSampler(ReadoutDensity density) : density_(std::move(density)) {
  const auto n = static_cast<std::size_t>(kGridPoints);
  const double h = density_.support_half_width();
  const double step = 2.0 * h / static_cast<double>(n - 1);
  grid_.resize(n);
  cdf_.resize(n);
  double prev = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    grid_[k] = -h + step * static_cast<double>(k);
    const double f = density_(grid_[k]);
    cdf_[k] = k == 0 ? 0.0 : cdf_[k - 1] + 0.5 * step * (prev + f);
    prev = f;
  }
  const double total = cdf_.back();
  for (double& c : cdf_) c /= total;
}

double ReadingSampler::quantile(double u) const {
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  if (it == cdf_.begin()) return grid_.front();
  if (it == cdf_.end()) return grid_.back();
  const auto k = static_cast<std::size_t>(it - cdf_.begin());
  const double lo = cdf_[k - 1];
  const double hi = cdf_[k];
  const double t = hi > lo ? (u - lo) / (hi - lo) : 0.5;
  return grid_[k - 1] + t * (grid_[k] - grid_[k - 1]);
}

std::optional<double> ReadingSampler::sample(SeededRng& rng) const {
  if (!rng.bernoulli(density_.success_probability())) return std::nullopt;
  return quantile(rng.uniform());
}

std::optional<double> sample_reading(const JointPointerState& joint,
                                     const std::optional<StateVector>& post, SeededRng& rng) {
  return ReadingSampler(ReadoutDensity(joint, post)).sample(rng);
}

std::size_t classify_strong(double q, const JointPointerState& joint) {
  const auto& terms = joint.terms;
  double min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < terms.size(); ++i) {
    for (std::size_t j = i + 1; j < terms.size(); ++j) {
      min_gap = std::min(min_gap, std::abs(terms[i].pointer.mean - terms[j].pointer.mean));
    }
  }
  if (!(min_gap > 6.0 * joint.sigma)) {
    throw NotInStrongRegime("classify_strong: pointer centres " + std::to_string(min_gap) +
                            " apart, need > 6 sigma = " + std::to_string(6.0 * joint.sigma));
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < terms.size(); ++i) {
    if (std::abs(q - terms[i].pointer.mean) < std::abs(q - terms[best].pointer.mean)) best = i;
  }
  return best;
}

}  // namespace tsvf
