#include "tsvf/measurement.hpp"

#include <cmath>
#include <string>

#include "parallel.hpp"
#include "tsvf/errors.hpp"

namespace tsvf {

namespace {

void require_same_dim(Index a, Index b, const char* what) {
  if (a != b) {
    throw DimensionError(std::string(what) + ": dimension mismatch " + std::to_string(a) +
                         " vs " + std::to_string(b));
  }
}

ReadingSampler make_sampler(const TwoState& ts, const HermitianOperator& a, double g,
                            double sigma) {
  if (!(g > 0.0) || !(sigma > 0.0)) {
    throw InvariantError("weak measurement: g and sigma must be > 0");
  }
  require_same_dim(ts.dim(), a.dim(), "weak measurement");
  return ReadingSampler(ReadoutDensity(couple(ts.forward(), a, g, sigma), ts.backward()));
}

// Welford accumulator, fed in trial order.
struct RunningStats {
  std::uint64_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++count;
    const double delta = x - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (x - mean);
  }
};

WeakEstimate finish(const RunningStats& stats, std::uint64_t trials) {
  if (stats.count == 0) {
    throw NoAcceptedTrials("weak_estimate: no trial passed post-selection out of " +
                           std::to_string(trials));
  }
  const double n = static_cast<double>(stats.count);
  const double variance = stats.count > 1 ? stats.m2 / (n - 1.0) : 0.0;
  return WeakEstimate{stats.mean, std::sqrt(variance / n),
                      n / static_cast<double>(trials), trials, stats.count};
}

constexpr std::uint64_t kChunk = std::uint64_t{1} << 16;

}  // namespace

TwoState::TwoState(const StateVector& forward, const StateVector& backward)
    : forward_(forward.normalized()), backward_(backward.normalized()), overlap_(0.0, 0.0) {
  require_same_dim(forward.dim(), backward.dim(), "TwoState");
  overlap_ = inner(backward_, forward_);
  if (overlap_ == Complex(0.0, 0.0)) {
    throw NearOrthogonalPrePost("TwoState: pre- and post-selected states are orthogonal");
  }
}

std::vector<double> born_weights(const StateVector& psi, const HermitianOperator& a) {
  require_same_dim(psi.dim(), a.dim(), "born_weights");
  const StateVector unit = psi.normalized();
  std::vector<double> weights;
  for (const Eigenspace& space : spectral_decomposition(a)) {
    weights.push_back((space.projector * unit.amps()).squaredNorm());
  }
  return weights;
}

MeasurementRecord strong_measure(const StateVector& psi, const HermitianOperator& a,
                                 SeededRng& rng) {
  require_same_dim(psi.dim(), a.dim(), "strong_measure");
  const StateVector unit = psi.normalized();
  const std::vector<Eigenspace> spaces = spectral_decomposition(a);

  std::vector<Vector> projected;
  std::vector<double> weights;
  for (const Eigenspace& space : spaces) {
    projected.push_back(space.projector * unit.amps());
    weights.push_back(projected.back().squaredNorm());
  }

  const double u = rng.uniform();
  double cumulative = 0.0;
  std::size_t pick = 0;
  // Last eigenspace with non-zero weight absorbs rounding in the cumulative sum.
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    pick = i;
    cumulative += weights[i];
    if (u < cumulative) break;
  }
  const double p = weights[pick];
  return MeasurementRecord{spaces[pick].value, StateVector(projected[pick] / std::sqrt(p)), p};
}

bool post_select(const StateVector& psi, const StateVector& phi, SeededRng& rng) {
  require_same_dim(psi.dim(), phi.dim(), "post_select");
  return rng.bernoulli(std::norm(inner(phi.normalized(), psi.normalized())));
}

Complex weak_value(const TwoState& ts, const HermitianOperator& a, double min_overlap) {
  require_same_dim(ts.dim(), a.dim(), "weak_value");
  if (std::abs(ts.overlap()) <= min_overlap) {
    throw NearOrthogonalPrePost("weak_value: |<phi|psi>| = " +
                                std::to_string(std::abs(ts.overlap())) + " <= " +
                                std::to_string(min_overlap));
  }
  const Complex numerator = ts.backward().amps().dot(a.apply(ts.forward()));
  return numerator / ts.overlap();
}

std::optional<double> weak_trial(const TwoState& ts, const HermitianOperator& a, double g,
                                 double sigma, SeededRng& rng) {
  return make_sampler(ts, a, g, sigma).sample(rng);
}

std::vector<std::optional<double>> weak_readings(const TwoState& ts, const HermitianOperator& a,
                                                 double g, double sigma, std::uint64_t trials,
                                                 const SeededRng& master, unsigned threads) {
  const ReadingSampler sampler = make_sampler(ts, a, g, sigma);
  std::vector<std::optional<double>> out(trials);
  detail::parallel_for(0, trials, threads, [&](std::uint64_t i) {
    SeededRng rng = master.stream(i);
    out[i] = sampler.sample(rng);
  });
  return out;
}

WeakEstimate weak_estimate(const TwoState& ts, const HermitianOperator& a, double g,
                           double sigma, std::uint64_t trials, const SeededRng& master,
                           unsigned threads) {
  if (trials < 1) throw InvariantError("weak_estimate: trials must be >= 1");
  const ReadingSampler sampler = make_sampler(ts, a, g, sigma);
  RunningStats stats;
  std::vector<std::optional<double>> chunk;
  for (std::uint64_t begin = 0; begin < trials; begin += kChunk) {
    const std::uint64_t end = std::min(trials, begin + kChunk);
    chunk.assign(end - begin, std::nullopt);
    detail::parallel_for(begin, end, threads, [&](std::uint64_t i) {
      SeededRng rng = master.stream(i);
      chunk[i - begin] = sampler.sample(rng);
    });
    for (const auto& q : chunk) {
      if (q) stats.add(*q);
    }
  }
  return finish(stats, trials);
}

WeakEstimate weak_estimate_accepted(const TwoState& ts, const HermitianOperator& a, double g,
                                    double sigma, std::uint64_t accepted_target,
                                    const SeededRng& master, std::uint64_t max_trials,
                                    unsigned threads) {
  if (accepted_target < 1) throw InvariantError("weak_estimate_accepted: target must be >= 1");
  const ReadingSampler sampler = make_sampler(ts, a, g, sigma);
  RunningStats stats;
  std::uint64_t trials = 0;
  std::vector<std::optional<double>> chunk;
  for (std::uint64_t begin = 0; begin < max_trials && stats.count < accepted_target;
       begin += kChunk) {
    const std::uint64_t end = std::min(max_trials, begin + kChunk);
    chunk.assign(end - begin, std::nullopt);
    detail::parallel_for(begin, end, threads, [&](std::uint64_t i) {
      SeededRng rng = master.stream(i);
      chunk[i - begin] = sampler.sample(rng);
    });
    for (const auto& q : chunk) {
      ++trials;
      if (q) stats.add(*q);
      if (stats.count == accepted_target) break;
    }
  }
  return finish(stats, trials);
}

}  // namespace tsvf
