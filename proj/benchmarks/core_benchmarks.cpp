#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "tsvf/ensemble.hpp"
#include "tsvf/measurement.hpp"
#include "tsvf/pointer.hpp"
#include "tsvf/twotime.hpp"

using namespace tsvf;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

void BM_EigHermitian(benchmark::State& state) {
  SeededRng rng(1);
  const HermitianOperator a = HermitianOperator::random(state.range(0), rng);
  for (auto _ : state) benchmark::DoNotOptimize(eig_hermitian(a));
}
BENCHMARK(BM_EigHermitian)->Arg(2)->Arg(8)->Arg(32);

void BM_SamplerBuild(benchmark::State& state) {
  const JointPointerState j = couple(StateVector{kInvSqrt2, kInvSqrt2}, HermitianOperator::pauli_z(), 0.01, 1.0);
  const StateVector post{std::cos(std::numbers::pi / 8), -std::sin(std::numbers::pi / 8)};
  for (auto _ : state) benchmark::DoNotOptimize(ReadingSampler(readout_density(j, post)));
}
BENCHMARK(BM_SamplerBuild);

void BM_SamplerDraw(benchmark::State& state) {
  const JointPointerState j = couple(StateVector{kInvSqrt2, kInvSqrt2}, HermitianOperator::pauli_z(), 0.01, 1.0);
  const ReadingSampler sampler(readout_density(j));
  SeededRng rng(2);
  for (auto _ : state) benchmark::DoNotOptimize(sampler.sample(rng));
}
BENCHMARK(BM_SamplerDraw);

void BM_WeakEstimate(benchmark::State& state) {
  const TwoState ts(StateVector{kInvSqrt2, kInvSqrt2},
                    StateVector{std::cos(std::numbers::pi / 8), -std::sin(std::numbers::pi / 8)});
  const auto trials = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(weak_estimate(ts, HermitianOperator::pauli_z(), 0.01, 1.0, trials, SeededRng(3)));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_WeakEstimate)->Arg(100000);

void BM_BruteForceAverage(benchmark::State& state) {
  const EnsembleSpec spec = EnsembleSpec::identical(StateVector{kInvSqrt2, kInvSqrt2},
                                                    static_cast<std::uint64_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(brute_force_average(HermitianOperator::pauli_z(), spec));
}
BENCHMARK(BM_BruteForceAverage)->Arg(4)->Arg(10)->Arg(14);

void BM_BruteForceRatio(benchmark::State& state) {
  RobustnessModel m;
  m.env_n = static_cast<std::uint64_t>(state.range(0));
  m.collapse_n = 2;
  m.overlap_c = 0.9;
  m.gamma1 = {0.5};
  m.gamma2 = {0.5};
  for (auto _ : state) benchmark::DoNotOptimize(brute_force_ratio(m));
}
BENCHMARK(BM_BruteForceRatio)->Arg(8)->Arg(12);

void BM_SpinCommutator(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(brute_force_spin_commutator(static_cast<int>(state.range(0))));
}
BENCHMARK(BM_SpinCommutator)->Arg(6)->Arg(10);

}  // namespace

BENCHMARK_MAIN();
