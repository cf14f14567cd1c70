#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "tsvf/errors.hpp"
#include "tsvf/pointer.hpp"
#include "tsvf/rng.hpp"

using namespace tsvf;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
StateVector plus() { return StateVector{kInvSqrt2, kInvSqrt2}; }
StateVector anomalous_post() {
  return StateVector{std::cos(std::numbers::pi / 8), -std::sin(std::numbers::pi / 8)};
}

const PointerBranch& branch_with(const JointPointerState& j, double eigenvalue) {
  for (const PointerBranch& t : j.terms) {
    if (std::abs(t.eigenvalue - eigenvalue) < 1e-9) return t;
  }
  throw std::runtime_error("no branch");
}

}  // namespace

TEST(GaussianPointer, AmplitudeSquaredIsNormalDensity) {
  const GaussianPointer p{0.7, 0.3};
  for (double q : {-1.0, 0.0, 0.3, 2.0}) {
    EXPECT_NEAR(p.amplitude(q), oracle::gaussian_amplitude(q, 0.3, 0.7), 1e-15);
    EXPECT_NEAR(p.density(q), p.amplitude(q) * p.amplitude(q), 1e-15);
  }
  const double total = oracle::simpson([&](double q) { return p.density(q); }, -10, 10);
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(GaussianPointer, OverlapMatchesQuadrature) {
  const GaussianPointer a{0.5, -0.2};
  const GaussianPointer b{0.5, 0.6};
  const double numeric =
      oracle::simpson([&](double q) { return a.amplitude(q) * b.amplitude(q); }, -10, 10);
  EXPECT_NEAR(pointer_overlap(a, b), numeric, 1e-12);
}

TEST(Couple, EigenstateGivesSingleShiftedTerm) {
  const JointPointerState j = couple(StateVector::basis(2, 0), HermitianOperator::pauli_z(), 1.0, 0.1);
  ASSERT_EQ(j.terms.size(), 1u);
  EXPECT_NEAR(j.terms[0].eigenvalue, 1.0, 1e-12);
  EXPECT_NEAR(std::abs(j.terms[0].alpha), 1.0, 1e-12);
  EXPECT_NEAR(j.terms[0].pointer.mean, 1.0, 1e-12);
  EXPECT_EQ(j.terms[0].pointer.sigma, 0.1);
}

TEST(Couple, SuperpositionGivesTwoBranches) {
  const JointPointerState j = couple(plus(), HermitianOperator::pauli_z(), 1.0, 0.3);
  ASSERT_EQ(j.terms.size(), 2u);
  for (double a : {-1.0, 1.0}) {
    const PointerBranch& t = branch_with(j, a);
    EXPECT_NEAR(std::abs(t.alpha), kInvSqrt2, 1e-12);
    EXPECT_NEAR(t.pointer.mean, a, 1e-12);
  }
}

TEST(Couple, DegenerateEigenvaluesMerge) {
  Matrix d = Matrix::Zero(3, 3);
  d.diagonal() << 1.0, 1.0, -1.0;
  const JointPointerState j = couple(StateVector{1.0, 1.0, 1.0}.normalized(), HermitianOperator(d), 1.0, 1.0);
  ASSERT_EQ(j.terms.size(), 2u);
  EXPECT_NEAR(std::norm(branch_with(j, 1.0).alpha), 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(std::norm(branch_with(j, -1.0).alpha), 1.0 / 3.0, 1e-12);
}

TEST(Couple, RandomWeightsSumToOne) {
  SeededRng rng(101);
  for (int k = 0; k < 100; ++k) {
    const StateVector psi = StateVector::random(4, rng);
    const HermitianOperator a = HermitianOperator::random(4, rng);
    const JointPointerState j = couple(psi, a, 0.5, 1.0);
    double total = 0.0;
    for (const PointerBranch& t : j.terms) {
      total += std::norm(t.alpha);
      EXPECT_NEAR(t.pointer.mean, 0.5 * t.eigenvalue, 1e-12);
      // alpha * branch reproduces the eigen-projection of psi
      EXPECT_LE((a.matrix() * t.branch.amps() - t.eigenvalue * t.branch.amps()).norm(), 1e-9);
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
    EXPECT_NEAR(j.total_weight(), 1.0, 1e-12);
  }
}

TEST(Couple, Preconditions) {
  EXPECT_THROW((void)couple(StateVector::basis(3, 0), HermitianOperator::pauli_z(), 1.0, 1.0),
               DimensionError);
  EXPECT_THROW((void)couple(StateVector::basis(2, 0), HermitianOperator::pauli_z(), 1.0, 0.0),
               InvariantError);
}

TEST(ReadoutDensity, UnpostedEigenstateIsSingleGaussian) {
  const JointPointerState j = couple(StateVector::basis(2, 0), HermitianOperator::pauli_z(), 0.4, 0.2);
  const ReadoutDensity f = readout_density(j);
  EXPECT_FALSE(f.post_selected());
  EXPECT_EQ(f.success_probability(), 1.0);
  for (double q : {-0.3, 0.1, 0.4, 0.9}) {
    EXPECT_NEAR(f(q), std::pow(oracle::gaussian_amplitude(q, 0.4, 0.2), 2), 1e-12);
  }
  EXPECT_NEAR(f.mean(), 0.4, 1e-12);
  EXPECT_NEAR(f.variance(), 0.04, 1e-12);
}

TEST(ReadoutDensity, UnpostedMeanIsExpectation) {
  SeededRng rng(7);
  for (int k = 0; k < 20; ++k) {
    const StateVector psi = StateVector::random(3, rng);
    const HermitianOperator a = HermitianOperator::random(3, rng);
    const double g = 0.3;
    const ReadoutDensity f = readout_density(couple(psi, a, g, 1.0));
    const double expect = psi.amps().dot(a.matrix() * psi.amps()).real();
    EXPECT_NEAR(f.mean(), g * expect, 1e-12);
  }
}

TEST(ReadoutDensity, SymmetricPostSelectionHasZeroMean) {
  const ReadoutDensity f =
      readout_density(couple(plus(), HermitianOperator::pauli_z(), 0.01, 1.0), plus());
  EXPECT_NEAR(f.mean(), 0.0, 1e-12);
}

TEST(ReadoutDensity, AnomalousMeanMatchesQuadratureAndWeakValue) {
  const double g = 0.01;
  const double sigma = 1.0;
  const ReadoutDensity f =
      readout_density(couple(plus(), HermitianOperator::pauli_z(), g, sigma), anomalous_post());
  const oracle::Moments m =
      oracle::post_selected_moments(plus().amps(), anomalous_post().amps(), 1.0, -1.0, g, sigma);
  EXPECT_NEAR(f.success_probability(), m.success, 1e-10);
  EXPECT_NEAR(f.mean(), m.mean, 1e-10);
  const double weak = std::tan(3.0 * std::numbers::pi / 8.0);
  EXPECT_NEAR(f.mean() / g, weak, 0.01 * weak);
}

TEST(ReadoutDensity, NormalizedDensityIntegratesToOne) {
  const double g = 0.5;
  for (bool posted : {false, true}) {
    const JointPointerState j = couple(plus(), HermitianOperator::pauli_z(), g, 1.0);
    const ReadoutDensity f =
        posted ? readout_density(j, anomalous_post()) : readout_density(j);
    const double w = f.support_half_width();
    EXPECT_NEAR(oracle::simpson([&](double q) { return f(q); }, -w, w), 1.0, 1e-9);
    const double var = oracle::simpson(
        [&](double q) { return (q - f.mean()) * (q - f.mean()) * f(q); }, -w, w);
    EXPECT_NEAR(f.variance(), var, 1e-9);
  }
}

TEST(ReadoutDensity, WeakLimitApproachesWeakValue) {
  const double weak = std::tan(3.0 * std::numbers::pi / 8.0);
  double previous = 1e300;
  for (double ratio : {0.1, 0.03, 0.01}) {
    const ReadoutDensity f =
        readout_density(couple(plus(), HermitianOperator::pauli_z(), ratio, 1.0), anomalous_post());
    const double err = std::abs(f.mean() / ratio - weak);
    EXPECT_LT(err, previous);
    previous = err;
  }
  EXPECT_LT(previous, 1e-3);
}

TEST(ReadoutDensity, OrthogonalPostSelectionImpossible) {
  const JointPointerState j = couple(StateVector::basis(2, 0), HermitianOperator::pauli_z(), 1.0, 1.0);
  EXPECT_THROW((void)readout_density(j, StateVector::basis(2, 1)), PostSelectionImpossible);
  EXPECT_THROW((void)readout_density(j, StateVector::basis(3, 1)), DimensionError);
}

TEST(SampleReading, NarrowEigenstatePointer) {
  const JointPointerState j = couple(StateVector::basis(2, 0), HermitianOperator::pauli_z(), 5.0, 0.1);
  const ReadingSampler sampler(readout_density(j));
  const SeededRng master(3);
  for (std::uint64_t i = 0; i < 100000; ++i) {
    SeededRng rng = master.stream(i);
    const auto q = i < 100 ? sample_reading(j, std::nullopt, rng) : sampler.sample(rng);
    ASSERT_TRUE(q.has_value());
    EXPECT_GT(*q, 4.5);
    EXPECT_LT(*q, 5.5);
  }
}

TEST(SampleReading, WeakUnpostedMeanIsZero) {
  const ReadingSampler sampler(readout_density(couple(plus(), HermitianOperator::pauli_z(), 0.1, 1.0)));
  const SeededRng master(19);
  const int n = 1000000;
  double sum = 0.0;
  double sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    SeededRng rng = master.stream(static_cast<std::uint64_t>(i));
    const double q = *sampler.sample(rng);
    sum += q;
    sum2 += q * q;
  }
  const double mean = sum / n;
  const double stderr_mean = std::sqrt((sum2 / n - mean * mean) / n);
  EXPECT_LE(std::abs(mean), 4.0 * stderr_mean);
}

TEST(SampleReading, DeterministicUnderSeed) {
  const JointPointerState j = couple(plus(), HermitianOperator::pauli_z(), 0.2, 1.0);
  SeededRng a(42);
  SeededRng b(42);
  for (int i = 0; i < 200; ++i) {
    EXPECT_EQ(sample_reading(j, anomalous_post(), a), sample_reading(j, anomalous_post(), b));
  }
}

TEST(SampleReading, QuantileInvertsCdf) {
  const ReadingSampler sampler(readout_density(couple(plus(), HermitianOperator::pauli_z(), 1.0, 0.3)));
  for (double u : {0.1, 0.25, 0.5, 0.75, 0.9}) {
    const double q = sampler.quantile(u);
    const double lo = -sampler.density().support_half_width();
    const double mass = oracle::simpson([&](double x) { return sampler.density()(x); }, lo, q, 20000);
    EXPECT_NEAR(mass, u, 1e-4);
  }
}

TEST(ClassifyStrong, NearestMean) {
  const JointPointerState j = couple(plus(), HermitianOperator::pauli_z(), 1.0, 0.05);
  EXPECT_NEAR(j.terms[classify_strong(0.98, j)].eigenvalue, 1.0, 1e-12);
  EXPECT_NEAR(j.terms[classify_strong(-1.1, j)].eigenvalue, -1.0, 1e-12);
}

TEST(ClassifyStrong, WeakRegimeRejected) {
  const JointPointerState j = couple(plus(), HermitianOperator::pauli_z(), 1.0, 0.5);
  EXPECT_THROW((void)classify_strong(0.0, j), NotInStrongRegime);
}

TEST(ClassifyStrong, MonteCarloFrequency) {
  const JointPointerState j = couple(plus(), HermitianOperator::pauli_z(), 1.0, 0.05);
  const ReadingSampler sampler(readout_density(j));
  const SeededRng master(8);
  const int n = 100000;
  int up = 0;
  for (int i = 0; i < n; ++i) {
    SeededRng rng = master.stream(static_cast<std::uint64_t>(i));
    const double q = *sampler.sample(rng);
    if (j.terms[classify_strong(q, j)].eigenvalue > 0) ++up;
  }
  EXPECT_NEAR(static_cast<double>(up) / n, 0.5, oracle::binomial_band(0.5, n));
}
