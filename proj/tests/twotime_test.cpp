#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <limits>

#include "oracles.hpp"
#include "tsvf/errors.hpp"
#include "tsvf/twotime.hpp"

using namespace tsvf;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

RobustnessModel model(std::uint64_t env_n, std::uint64_t n, double c, double gamma1 = 0.5,
                      double gamma2 = 0.5) {
  RobustnessModel m;
  m.env_n = env_n;
  m.collapse_n = n;
  m.overlap_c = c;
  m.gamma1 = {gamma1};
  m.gamma2 = {gamma2};
  return m;
}

RobustnessModel split_model(double alpha2, std::uint64_t env_n, double c) {
  RobustnessModel m = model(env_n, 0, c);
  m.alpha = std::sqrt(alpha2);
  m.beta = std::sqrt(1.0 - alpha2);
  return m;
}

}  // namespace

TEST(ForwardChain, TwoBranchesWithProductEnvironments) {
  const RobustnessModel m = split_model(0.36, 20, 0.9);
  const auto branches = forward_chain(m);
  ASSERT_EQ(branches.size(), 2u);
  EXPECT_EQ(branches[0].label, Reading::kI);
  EXPECT_EQ(branches[0].pointer, Reading::kI);
  EXPECT_NEAR(std::abs(branches[0].amplitude), 0.6, 1e-15);
  EXPECT_EQ(branches[1].pointer, Reading::kII);
  const double overlap = std::exp(log_environment_overlap(branches[0].environment, branches[1].environment));
  EXPECT_NEAR(overlap, std::pow(0.9, 20), 1e-14);
  EXPECT_NEAR(overlap, 0.1216, 1e-4);
}

TEST(ForwardChain, SingleBranch) {
  RobustnessModel m = model(5, 0, 0.3);
  m.alpha = 1.0;
  m.beta = 0.0;
  const auto branches = forward_chain(m);
  ASSERT_EQ(branches.size(), 1u);
  EXPECT_EQ(branches[0].label, Reading::kI);
  EXPECT_EQ(forward_chain(model(5, 0, 0.3)).size(), 2u);
}

TEST(ForwardChain, OrthogonalEnvironmentDecoheres) {
  const RobustnessModel m = split_model(0.36, 4, 0.0);
  const auto branches = forward_chain(m);
  EXPECT_EQ(log_environment_overlap(branches[0].environment, branches[1].environment), -kInf);

  const StateVector full = forward_state_vector(m);
  const std::array<Index, 6> dims{2, 2, 2, 2, 2, 2};
  const std::array<Index, 2> keep{0, 1};
  const DensityMatrix rho = partial_trace(full, dims, keep);
  Matrix expect = Matrix::Zero(4, 4);
  expect(0, 0) = 0.36;  // |1>|I>
  expect(3, 3) = 0.64;  // |2>|II>
  EXPECT_LE((rho.matrix() - expect).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(ForwardChain, PartialOverlapLeavesCoherence) {
  const RobustnessModel m = split_model(0.5, 3, 0.5);
  const std::array<Index, 5> dims{2, 2, 2, 2, 2};
  const std::array<Index, 2> keep{0, 1};
  const DensityMatrix rho = partial_trace(forward_state_vector(m), dims, keep);
  EXPECT_NEAR(std::abs(rho.matrix()(0, 3)), 0.5 * std::pow(0.5, 3), 1e-12);
}

TEST(ModelValidation, Rejects) {
  RobustnessModel m = model(5, 5, 0.5);
  EXPECT_THROW(m.validate(), InvariantError);
  m = model(5, 2, 1.0);
  EXPECT_THROW(m.validate(), InvariantError);
  m = model(5, 2, 0.5);
  m.alpha = 0.5;
  EXPECT_THROW(m.validate(), InvariantError);
  m = model(5, 2, 0.5, 0.0);
  EXPECT_THROW(m.validate(), OrthogonalCollapseForbidden);
  m = model(5, 2, 0.5);
  m.gamma1 = {0.5, 0.5, 0.5};
  EXPECT_THROW(m.validate(), InvariantError);
  m = model(5, 2, 0.5, 0.5, 1.0);
  EXPECT_THROW(m.validate(), InvariantError);
}

TEST(SelectByFinal, WrongBranchExcludedExactly) {
  for (double alpha2 : {0.01, 0.36, 0.9, 1.0}) {
    const Selection s = select_by_final(split_model(alpha2, 10, 0.9));
    EXPECT_EQ(s.p_wrong, 0.0);
    EXPECT_NEAR(s.p_right, alpha2, 1e-12);
    EXPECT_EQ(s.reconstruction(), 1.0);
  }
}

TEST(SelectByFinal, EmptyBranchHasNoHistory) {
  RobustnessModel m = model(5, 0, 0.5);
  m.alpha = 0.0;
  m.beta = 1.0;
  EXPECT_THROW((void)select_by_final(m), NoConsistentHistory);
  EXPECT_NO_THROW((void)select_by_final(m, FinalBoundary{Reading::kII, std::nullopt}));
}

TEST(SelectByFinal, MicrostateOverride) {
  const RobustnessModel m = split_model(0.36, 3, 0.5);
  const double h = 1.0 / std::sqrt(2.0);
  const Selection s = select_by_final(m, FinalBoundary{Reading::kI, StateVector{h, h}});
  EXPECT_NEAR(s.p_right, 0.18, 1e-12);
  EXPECT_THROW((void)select_by_final(m, FinalBoundary{Reading::kI, StateVector::basis(2, 1)}),
               NoConsistentHistory);
  EXPECT_THROW((void)select_by_final(model(5, 1, 0.5)), InvariantError);
}

TEST(SampleUniverses, BornFrequency) {
  const UniverseCount u = sample_universes(split_model(0.36, 20, 0.9), 100000, SeededRng(77));
  EXPECT_EQ(u.universes, 100000u);
  EXPECT_NEAR(u.frequency_i(), 0.36, oracle::binomial_band(0.36, 1e5));
}

TEST(CollapseEnvironment, NothingCollapsed) {
  SeededRng rng(1);
  const RobustnessModel m = split_model(0.5, 6, 0.8);
  const CollapsedDescription d = collapse_environment(m, rng);
  EXPECT_TRUE(d.collapsed_qubits.empty());
  EXPECT_NEAR(d.remaining_overlap(), std::pow(0.8, 6), 1e-14);
  const auto before = forward_chain(m);
  ASSERT_EQ(d.branches.size(), 2u);
  EXPECT_NEAR(std::exp(log_environment_overlap(d.branches[0].environment, d.branches[1].environment)),
              std::exp(log_environment_overlap(before[0].environment, before[1].environment)), 1e-14);
}

TEST(CollapseEnvironment, SingleRemainingQubit) {
  SeededRng rng(2);
  RobustnessModel m = split_model(0.5, 10, 0.9);
  m.collapse_n = 9;
  m.gamma1 = {0.7};
  m.gamma2 = {0.3};
  const CollapsedDescription d = collapse_environment(m, rng);
  EXPECT_EQ(d.collapsed_qubits.size(), 9u);
  EXPECT_NEAR(d.remaining_overlap(), 0.9, 1e-14);
  for (std::size_t k = 1; k < d.collapsed_qubits.size(); ++k) {
    EXPECT_LT(d.collapsed_qubits[k - 1], d.collapsed_qubits[k]);
  }
  // collapsed targets carry the requested overlaps with eps_1
  EXPECT_NEAR(std::abs(d.branches[0].environment.front().qubit.dot(env_record_1())), 0.7, 1e-15);
  EXPECT_NEAR(std::abs(d.branches[1].environment.front().qubit.dot(env_record_1())), 0.3, 1e-15);
}

TEST(CollapseEnvironment, OrthogonalCollapseForbidden) {
  SeededRng rng(3);
  EXPECT_THROW((void)collapse_environment(model(10, 2, 0.9, 0.0), rng), OrthogonalCollapseForbidden);
}

TEST(RobustnessRatio, ReferenceValue) {
  const double r = robustness_ratio(model(20, 5, 0.9));
  EXPECT_NEAR(r, std::pow(0.9, -30), 1e-10 * r);
  EXPECT_NEAR(r, 23.59, 0.01);
}

TEST(RobustnessRatio, Divergences) {
  EXPECT_EQ(robustness_ratio(model(20, 5, 0.0)), kInf);
  EXPECT_EQ(robustness_ratio(model(20, 5, 0.9, 0.5, 0.0)), kInf);
  EXPECT_TRUE(is_classically_robust(model(20, 5, 0.9, 0.5, 0.0)));
}

TEST(RobustnessRatio, LargeEnvironmentInLogDomain) {
  const double lr = log_robustness_ratio(model(10000, 100, 0.99));
  EXPECT_NEAR(lr, -2.0 * 9900.0 * std::log(0.99), 1e-9);
  EXPECT_NEAR(lr, 199.0, 0.01);
  const double huge = log_robustness_ratio(model(1000000000, 10, 0.9));
  EXPECT_TRUE(std::isfinite(huge));
  EXPECT_EQ(robustness_ratio(model(1000000000, 10, 0.9)), kInf);
}

TEST(RobustnessRatio, UnequalGammasAndForms) {
  RobustnessModel m = model(12, 3, 0.8);
  m.gamma1 = {0.9, 0.8, 0.7};
  m.gamma2 = {0.2, 0.4, 0.6};
  const double prod1 = 0.9 * 0.8 * 0.7;
  const double prod2 = 0.2 * 0.4 * 0.6;
  const double c_core = std::pow(0.8, 9);
  EXPECT_NEAR(robustness_ratio(m), prod1 * prod1 / (c_core * c_core * prod2 * prod2), 1e-9 * robustness_ratio(m));
  m.form = RatioForm::kLiteral;
  EXPECT_NEAR(robustness_ratio(m), prod1 / (c_core * c_core * prod2), 1e-9 * robustness_ratio(m));
}

TEST(RobustnessRatio, Monotonicity) {
  for (double c : {0.3, 0.6, 0.9}) {
    for (std::uint64_t n = 0; n < 8; ++n) {
      for (std::uint64_t big_n = n + 1; big_n < 15; ++big_n) {
        const double here = log_robustness_ratio(model(big_n, n, c));
        EXPECT_LT(here, log_robustness_ratio(model(big_n + 1, n, c)));
        if (n + 1 < big_n) {
          EXPECT_GT(here, log_robustness_ratio(model(big_n, n + 1, c)));
        }
        EXPECT_GT(here, log_robustness_ratio(model(big_n, n, c + 0.05)));
      }
    }
  }
}

TEST(RobustnessRatio, ExponentialInCore) {
  const double c = 0.9;
  for (std::uint64_t n = 0; n < 19; ++n) {
    const double step = log_robustness_ratio(model(20, n, c)) - log_robustness_ratio(model(20, n + 1, c));
    EXPECT_NEAR(step, -2.0 * std::log(c), 1e-9);
  }
}

TEST(BruteForceRatio, MatchesClosedForm) {
  const double r = brute_force_ratio(model(8, 2, 0.9));
  EXPECT_NEAR(r / std::pow(0.9, -12), 1.0, 1e-9);
  for (std::uint64_t n = 1; n < 8; ++n) {
    for (double c : {0.5, 0.9}) {
      RobustnessModel m = split_model(0.36, 8, c);
      m.collapse_n = n;
      m.gamma1 = {0.8};
      m.gamma2 = {0.3};
      EXPECT_NEAR(brute_force_ratio(m) / robustness_ratio(m), 1.0, 1e-9) << "n=" << n << " c=" << c;
    }
  }
}

TEST(BruteForceRatio, SlopeMatchesClosedForm) {
  const double c = 0.7;
  for (std::uint64_t n = 1; n + 1 < 10; ++n) {
    const double step = std::log(brute_force_ratio(model(10, n, c))) - std::log(brute_force_ratio(model(10, n + 1, c)));
    EXPECT_NEAR(step, -2.0 * std::log(c), 1e-9);
  }
}

TEST(BruteForceRatio, Divergences) {
  EXPECT_EQ(brute_force_ratio(model(8, 0, 0.9)), kInf);
  EXPECT_EQ(brute_force_ratio(model(8, 2, 0.0)), kInf);
  EXPECT_THROW((void)brute_force_ratio(model(13, 2, 0.9)), TooLargeForOracle);
}

TEST(CoreDecay, Values) {
  EXPECT_EQ(core_decay(1e6, 1.0, 0.0), 1e6);
  EXPECT_NEAR(core_decay(1e6, 1.0, 1.0), 367879.44, 0.01);
  EXPECT_NEAR(core_decay(1e6, 2.0, 20.0), 1e6 * std::exp(-10.0), 1e-9);
  EXPECT_THROW((void)core_decay(1e6, 0.0, 1.0), InvariantError);
  EXPECT_THROW((void)core_decay(1e6, 1.0, -1.0), InvariantError);
}

TEST(CoreDecay, DerivativeByFiniteDifferences) {
  const double n0 = 1e6;
  const double lifetime = 1.0;
  double previous = n0;
  for (double t = 0.05; t <= 10.0; t += 0.05) {
    const double now = core_decay(n0, lifetime, t);
    EXPECT_LE(now, previous);
    previous = now;
    const double slope = oracle::derivative([&](double x) { return core_decay(n0, lifetime, x); }, t, 1e-4);
    EXPECT_LT(slope, 0.0);
    EXPECT_NEAR(slope / (-now / lifetime), 1.0, 1e-6);
  }
}

TEST(ClassicalThreshold, ReferenceValue) {
  const std::array<double, 1> g{0.5};
  const std::uint64_t n_star = classical_threshold(0, 0.9, g, g, 1e6);
  EXPECT_EQ(n_star, 66u);
  EXPECT_LT(robustness_ratio(model(65, 0, 0.9)), 1e6);
  EXPECT_GE(robustness_ratio(model(66, 0, 0.9)), 1e6);
}

TEST(ClassicalThreshold, DegenerateTarget) {
  const std::array<double, 1> g{0.5};
  EXPECT_EQ(classical_threshold(4, 0.9, g, g, 1.0), 5u);
}

TEST(ClassicalThreshold, BracketingOnAGrid) {
  for (double c : {0.5, 0.9, 0.99}) {
    for (std::uint64_t n : {0u, 3u, 10u}) {
      const std::array<double, 1> g1{0.8};
      const std::array<double, 1> g2{0.4};
      for (double target : {10.0, 1e6, 1e12}) {
        const std::uint64_t n_star = classical_threshold(n, c, g1, g2, target);
        RobustnessModel m = model(n_star, n, c, 0.8, 0.4);
        EXPECT_GE(log_robustness_ratio(m), std::log(target));
        if (n_star - 1 > n) {
          m.env_n = n_star - 1;
          EXPECT_LT(log_robustness_ratio(m), std::log(target));
        }
      }
    }
  }
}

TEST(ClassicalThreshold, DivergesAsOverlapApproachesOne) {
  const std::array<double, 1> g{0.5};
  std::uint64_t previous = 0;
  for (double c : {0.9, 0.99, 0.999, 0.9999}) {
    const std::uint64_t n_star = classical_threshold(0, c, g, g, 1e6);
    EXPECT_GT(n_star, previous);
    previous = n_star;
  }
  EXPECT_GT(previous, 60000u);
}
