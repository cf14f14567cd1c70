#include "tsvf/twotime.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>

#include "site_ops.hpp"
#include "tsvf/errors.hpp"

namespace tsvf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_gamma_list(const std::vector<double>& gammas, std::uint64_t n, const char* name) {
  if (n == 0) return;
  if (gammas.size() != 1 && gammas.size() != n) {
    throw InvariantError(std::string("RobustnessModel: ") + name + " must have 1 or " +
                         std::to_string(n) + " entries, got " + std::to_string(gammas.size()));
  }
}

double gamma_at(const std::vector<double>& gammas, std::uint64_t j) {
  return gammas.size() == 1 ? gammas.front() : gammas.at(j);
}

Qubit collapse_target(double gamma) { return Qubit(gamma, std::sqrt(1.0 - gamma * gamma)); }

StateVector particle_state(Reading r) { return StateVector::basis(2, r == Reading::kI ? 0 : 1); }

double log_ratio_from(double sum_log_gamma1, double sum_log_gamma2, std::uint64_t core, double c,
                      RatioForm form) {
  if (sum_log_gamma2 == -kInf || c == 0.0) return kInf;
  const double gamma_power = form == RatioForm::kSquared ? 2.0 : 1.0;
  return gamma_power * (sum_log_gamma1 - sum_log_gamma2) -
         2.0 * static_cast<double>(core) * std::log(c);
}

}  // namespace

// ---------------------------------------------------------------------------
// RobustnessModel

void RobustnessModel::validate() const {
  const double norm = std::norm(alpha) + std::norm(beta);
  if (std::abs(norm - 1.0) > kExactTol) {
    throw InvariantError("RobustnessModel: |alpha|^2 + |beta|^2 = " + std::to_string(norm) +
                         " != 1");
  }
  if (env_n < 1) throw InvariantError("RobustnessModel: environment size N must be >= 1");
  if (!(overlap_c >= 0.0 && overlap_c < 1.0)) {
    throw InvariantError("RobustnessModel: overlap c must lie in [0, 1)");
  }
  if (collapse_n >= env_n) {
    throw InvariantError("RobustnessModel: collapsed count n = " + std::to_string(collapse_n) +
                         " must stay below N = " + std::to_string(env_n) +
                         " (a macroscopic core must remain)");
  }
  check_gamma_list(gamma1, collapse_n, "gamma1");
  check_gamma_list(gamma2, collapse_n, "gamma2");
  for (std::uint64_t j = 0; j < collapse_n && j < gamma1.size(); ++j) {
    const double g1 = gamma1[j];
    if (g1 == 0.0) {
      throw OrthogonalCollapseForbidden("RobustnessModel: gamma1[" + std::to_string(j) +
                                        "] = 0; collapse can never reach an orthogonal state");
    }
    if (!(g1 > 0.0 && g1 <= 1.0)) throw InvariantError("RobustnessModel: gamma1 must lie in (0, 1]");
  }
  for (std::uint64_t j = 0; j < collapse_n && j < gamma2.size(); ++j) {
    const double g2 = gamma2[j];
    if (!(g2 >= 0.0 && g2 < 1.0)) throw InvariantError("RobustnessModel: gamma2 must lie in [0, 1)");
  }
  if (final_micro && final_micro->dim() != 2) {
    throw DimensionError("RobustnessModel: final microstate must be a qubit");
  }
}

double RobustnessModel::gamma1_at(std::uint64_t j) const { return gamma_at(gamma1, j); }
double RobustnessModel::gamma2_at(std::uint64_t j) const { return gamma_at(gamma2, j); }

// ---------------------------------------------------------------------------
// Forward chain and selection

Qubit env_record_1() { return Qubit(1.0, 0.0); }
Qubit env_record_2(double c) { return Qubit(c, std::sqrt(1.0 - c * c)); }

std::vector<BranchState> forward_chain(const RobustnessModel& model) {
  model.validate();
  std::vector<BranchState> branches;
  if (model.alpha != Complex(0.0, 0.0)) {
    branches.push_back({Reading::kI, model.alpha, particle_state(Reading::kI), Reading::kI,
                        {{env_record_1(), model.env_n}}});
  }
  if (model.beta != Complex(0.0, 0.0)) {
    branches.push_back({Reading::kII, model.beta, particle_state(Reading::kII), Reading::kII,
                        {{env_record_2(model.overlap_c), model.env_n}}});
  }
  return branches;
}

double log_environment_overlap(std::span<const EnvironmentFactor> a,
                               std::span<const EnvironmentFactor> b) {
  double log_abs = 0.0;
  std::size_t ia = 0;
  std::size_t ib = 0;
  std::uint64_t used_a = 0;
  std::uint64_t used_b = 0;
  while (ia < a.size() && ib < b.size()) {
    const std::uint64_t left_a = a[ia].count - used_a;
    const std::uint64_t left_b = b[ib].count - used_b;
    const std::uint64_t run = std::min(left_a, left_b);
    if (run > 0) {
      const double overlap = std::abs(a[ia].qubit.dot(b[ib].qubit));
      if (overlap == 0.0) return -kInf;
      log_abs += static_cast<double>(run) * std::log(overlap);
    }
    used_a += run;
    used_b += run;
    if (used_a == a[ia].count) {
      ++ia;
      used_a = 0;
    }
    if (used_b == b[ib].count) {
      ++ib;
      used_b = 0;
    }
  }
  auto remaining = [](std::span<const EnvironmentFactor> f, std::size_t i, std::uint64_t used) {
    std::uint64_t total = 0;
    for (; i < f.size(); ++i) total += f[i].count - used, used = 0;
    return total;
  };
  if (remaining(a, ia, used_a) != 0 || remaining(b, ib, used_b) != 0) {
    throw DimensionError("log_environment_overlap: environments differ in size");
  }
  return log_abs;
}

Selection select_by_final(const RobustnessModel& model, const FinalBoundary& boundary) {
  model.validate();
  if (model.collapse_n != 0) {
    throw InvariantError("select_by_final: defined before any environment collapse (n = 0)");
  }
  const StateVector phi = boundary.micro        ? boundary.micro->normalized()
                          : model.final_micro ? model.final_micro->normalized()
                                              : particle_state(boundary.reading);
  if (phi.dim() != 2) throw DimensionError("select_by_final: final microstate must be a qubit");

  const std::vector<EnvironmentFactor> final_env{
      {boundary.reading == Reading::kI ? env_record_1() : env_record_2(model.overlap_c),
       model.env_n}};

  Selection sel{0.0, 0.0};
  for (const BranchState& b : forward_chain(model)) {
    const double pointer_overlap = b.pointer == boundary.reading ? 1.0 : 0.0;
    const double env = std::exp(2.0 * log_environment_overlap(final_env, b.environment));
    const double weight =
        std::norm(b.amplitude) * std::norm(inner(phi, b.particle)) * pointer_overlap * env;
    (b.label == boundary.reading ? sel.p_right : sel.p_wrong) += weight;
  }
  if (sel.p_right + sel.p_wrong == 0.0) {
    throw NoConsistentHistory("select_by_final: final boundary is orthogonal to the forward state");
  }
  return sel;
}

UniverseCount sample_universes(const RobustnessModel& model, std::uint64_t universes,
                               const SeededRng& master) {
  model.validate();
  const double p_i = std::norm(model.alpha);
  std::optional<Reading> from_i;
  std::optional<Reading> from_ii;
  auto reconstructed = [&](Reading r) {
    const Selection s = select_by_final(model, FinalBoundary{r, std::nullopt});
    const Reading other = r == Reading::kI ? Reading::kII : Reading::kI;
    return s.p_right > s.p_wrong ? r : other;
  };
  if (p_i > 0.0) from_i = reconstructed(Reading::kI);
  if (p_i < 1.0) from_ii = reconstructed(Reading::kII);

  UniverseCount out{universes, 0};
  for (std::uint64_t u = 0; u < universes; ++u) {
    SeededRng rng = master.stream(u);
    const Reading chosen = rng.bernoulli(p_i) ? *from_i : *from_ii;
    if (chosen == Reading::kI) ++out.reading_i;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Collapse and robustness

double CollapsedDescription::remaining_overlap() const { return std::exp(log_remaining_overlap); }

CollapsedDescription collapse_environment(const RobustnessModel& model, SeededRng& rng) {
  model.validate();
  const std::uint64_t n = model.collapse_n;
  const std::uint64_t total = model.env_n;

  // Floyd's sampling of n distinct indices out of N.
  std::set<std::uint64_t> chosen;
  for (std::uint64_t j = total - n; j < total; ++j) {
    const auto t = static_cast<std::uint64_t>(rng.uniform() * static_cast<double>(j + 1));
    const std::uint64_t pick = std::min(t, j);
    if (!chosen.insert(pick).second) chosen.insert(j);
  }

  CollapsedDescription out;
  out.collapsed_qubits.assign(chosen.begin(), chosen.end());
  const std::uint64_t core = total - n;
  out.log_remaining_overlap =
      model.overlap_c == 0.0 ? -kInf : static_cast<double>(core) * std::log(model.overlap_c);

  for (BranchState b : forward_chain(model)) {
    std::vector<EnvironmentFactor> env;
    for (std::uint64_t j = 0; j < n; ++j) {
      const double gamma = b.label == Reading::kI ? model.gamma1_at(j) : model.gamma2_at(j);
      env.push_back({collapse_target(gamma), 1});
    }
    env.push_back({b.environment.front().qubit, core});
    b.environment = std::move(env);
    out.branches.push_back(std::move(b));
  }
  return out;
}

double log_robustness_ratio(const RobustnessModel& model) {
  model.validate();
  double sum1 = 0.0;
  double sum2 = 0.0;
  for (std::uint64_t j = 0; j < model.collapse_n; ++j) {
    sum1 += std::log(model.gamma1_at(j));
    const double g2 = model.gamma2_at(j);
    sum2 += g2 == 0.0 ? -kInf : std::log(g2);
  }
  return log_ratio_from(sum1, sum2, model.env_n - model.collapse_n, model.overlap_c, model.form);
}

double robustness_ratio(const RobustnessModel& model) {
  return std::exp(log_robustness_ratio(model));
}

bool is_classically_robust(const RobustnessModel& model, double threshold) {
  return log_robustness_ratio(model) >= std::log(threshold);
}

StateVector forward_state_vector(const RobustnessModel& model) {
  model.validate();
  if (model.env_n + 2 > 14) {
    throw TooLargeForOracle("forward_state_vector: 2^(N+2) exceeds 2^14 for N = " +
                            std::to_string(model.env_n));
  }
  Vector total = Vector::Zero(Index{1} << (model.env_n + 2));
  for (const BranchState& b : forward_chain(model)) {
    StateVector term = tensor(b.particle, particle_state(b.pointer));
    const StateVector qubit{b.environment.front().qubit[0], b.environment.front().qubit[1]};
    for (std::uint64_t j = 0; j < model.env_n; ++j) term = tensor(term, qubit);
    total += b.amplitude * term.amps();
  }
  return StateVector(std::move(total));
}

double brute_force_ratio(const RobustnessModel& model) {
  const StateVector full = forward_state_vector(model);
  const auto sites = static_cast<Index>(model.env_n + 2);
  constexpr Index kPointerSite = 1;
  constexpr Index kFirstEnvSite = 2;

  const Matrix onto_zero = (Matrix(2, 2) << 1.0, 0.0, 0.0, 0.0).finished();
  const Matrix onto_one = (Matrix(2, 2) << 0.0, 0.0, 0.0, 1.0).finished();

  double weight[2] = {0.0, 0.0};
  for (int r = 0; r < 2; ++r) {
    const Reading reading = r == 0 ? Reading::kI : Reading::kII;
    Vector branch = detail::apply_site(r == 0 ? onto_zero : onto_one, full.amps(), 2, sites,
                                       kPointerSite);
    double norm = branch.norm();
    if (norm == 0.0) continue;
    branch /= norm;

    for (std::uint64_t j = 0; j < model.collapse_n; ++j) {
      const double gamma = reading == Reading::kI ? model.gamma1_at(j) : model.gamma2_at(j);
      const Vector c = collapse_target(gamma).cast<Complex>();
      const Matrix projector = c * c.adjoint();
      branch = detail::apply_site(projector, branch, 2, sites, kFirstEnvSite + static_cast<Index>(j));
      norm = branch.norm();
      if (norm == 0.0) break;
      branch /= norm;
    }
    if (norm == 0.0) continue;

    // Final boundary <eps_1|^N, plus <I| on the bare pointer when nothing collapsed.
    if (model.collapse_n == 0) {
      branch = detail::apply_site(onto_zero, branch, 2, sites, kPointerSite);
    }
    for (Index s = kFirstEnvSite; s < sites; ++s) {
      branch = detail::apply_site(onto_zero, branch, 2, sites, s);
    }
    weight[r] = branch.squaredNorm();
  }
  if (weight[1] == 0.0) return kInf;
  return weight[0] / weight[1];
}

double core_decay(double n0, double lifetime, double t) {
  if (!(lifetime > 0.0)) throw InvariantError("core_decay: lifetime T must be > 0");
  if (!(t >= 0.0)) throw InvariantError("core_decay: time t must be >= 0");
  return n0 * std::exp(-t / lifetime);
}

std::uint64_t classical_threshold(std::uint64_t n, double c, std::span<const double> gamma1,
                                  std::span<const double> gamma2, double ratio_target,
                                  RatioForm form) {
  if (!(c > 0.0 && c < 1.0)) throw InvariantError("classical_threshold: c must lie in (0, 1)");
  if (!(ratio_target > 0.0)) throw InvariantError("classical_threshold: target must be > 0");

  RobustnessModel model;
  model.overlap_c = c;
  model.collapse_n = n;
  model.form = form;
  model.gamma1.assign(gamma1.begin(), gamma1.end());
  model.gamma2.assign(gamma2.begin(), gamma2.end());
  if (model.gamma1.empty()) model.gamma1 = {1.0};
  if (model.gamma2.empty()) model.gamma2 = {0.5};

  double sum_log_ratio = 0.0;  // sum ln(gamma2 / gamma1)
  for (std::uint64_t j = 0; j < n; ++j) {
    const double g1 = model.gamma1_at(j);
    const double g2 = model.gamma2_at(j);
    if (g1 == 0.0) throw OrthogonalCollapseForbidden("classical_threshold: gamma1 = 0");
    sum_log_ratio += g2 == 0.0 ? -kInf : std::log(g2 / g1);
  }
  const double gamma_power = form == RatioForm::kSquared ? 2.0 : 1.0;
  const double needed = (std::log(ratio_target) + gamma_power * sum_log_ratio) / (-2.0 * std::log(c));

  std::uint64_t core = 1;
  if (needed > 1.0) core = static_cast<std::uint64_t>(std::ceil(needed));

  const double log_target = std::log(ratio_target);
  auto reaches = [&](std::uint64_t candidate_core) {
    model.env_n = n + candidate_core;
    return log_robustness_ratio(model) >= log_target;
  };
  while (!reaches(core)) ++core;
  while (core > 1 && reaches(core - 1)) --core;
  return n + core;
}

}  // namespace tsvf
