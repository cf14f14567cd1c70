#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace tsvf {

/// Seeded xoshiro256++ stream.
///
/// Satisfies UniformRandomBitGenerator, so it can drive <random>
/// distributions, but the library draws through uniform()/bernoulli() so that
/// output is bit-identical across standard library implementations.
///
/// Monte Carlo loops never share a stream between trials: trial i draws from
/// stream(i), a stream derived from (seed, i) alone. Results therefore do not
/// depend on scheduling or thread count.
class SeededRng {
 public:
  using result_type = std::uint64_t;

  explicit SeededRng(std::uint64_t seed);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();

  /// True with probability p (p clamped to [0, 1]).
  bool bernoulli(double p);

  /// Standard normal via Box-Muller; consumes two uniforms per call.
  double normal();

  /// Independent stream for trial `index`, a pure function of (seed(), index).
  [[nodiscard]] SeededRng stream(std::uint64_t index) const;

  [[nodiscard]] std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::array<std::uint64_t, 4> state_{};
};

/// splitmix64 finalizer; used for seed derivation.
std::uint64_t mix_seed(std::uint64_t x);

}  // namespace tsvf
