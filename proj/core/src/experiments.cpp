#include "tsvf/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "tsvf/ensemble.hpp"
#include "tsvf/errors.hpp"
#include "tsvf/measurement.hpp"
#include "tsvf/pointer.hpp"
#include "tsvf/twotime.hpp"

namespace tsvf {

namespace {

using json = nlohmann::json;

std::string fmt(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// JSON has no infinity; encode it as a string.
json num(double x) {
  if (std::isfinite(x)) return x;
  return fmt(x);
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

/// Typed, key-checked access to the resolved parameter map.
class Params {
 public:
  explicit Params(const std::map<std::string, std::string>& values) : values_(values) {}

  [[nodiscard]] const std::string& raw(const std::string& key) const { return values_.at(key); }

  [[nodiscard]] double real(const std::string& key) const { return parse_real(key, raw(key)); }

  [[nodiscard]] std::uint64_t count(const std::string& key) const {
    return parse_count(key, raw(key));
  }

  [[nodiscard]] std::vector<std::uint64_t> counts(const std::string& key) const {
    std::vector<std::uint64_t> out;
    for (const std::string& item : split_list(raw(key))) out.push_back(parse_count(key, item));
    return out;
  }

  [[nodiscard]] std::vector<double> reals(const std::string& key) const {
    std::vector<double> out;
    for (const std::string& item : split_list(raw(key))) out.push_back(parse_real(key, item));
    return out;
  }

  [[nodiscard]] RatioForm form(const std::string& key) const {
    const std::string& v = raw(key);
    if (v == "squared") return RatioForm::kSquared;
    if (v == "literal") return RatioForm::kLiteral;
    throw ConfigError("parameter '" + key + "': expected 'squared' or 'literal', got '" + v + "'");
  }

 private:
  static double parse_real(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
      throw ConfigError("parameter '" + key + "': '" + text + "' is not a number");
    }
    return v;
  }

  static std::uint64_t parse_count(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec == std::errc() && ptr == t.data() + t.size() && !t.empty()) return v;
    // Accept integral scientific notation such as 1e6.
    const double d = parse_real(key, text);
    if (d >= 0.0 && d == std::floor(d) && d < 1.8e19) return static_cast<std::uint64_t>(d);
    throw ConfigError("parameter '" + key + "': '" + text + "' is not a non-negative integer");
  }

  const std::map<std::string, std::string>& values_;
};

class CsvWriter {
 public:
  explicit CsvWriter(const ExperimentConfig& resolved) {
    json meta;
    meta["experiment"] = resolved.experiment;
    meta["seed"] = resolved.seed;
    meta["params"] = resolved.params;
    out_ << "# meta " << meta.dump() << '\n';
  }

  void header(std::initializer_list<std::string_view> columns) {
    bool first = true;
    for (std::string_view c : columns) {
      out_ << (first ? "" : ",") << c;
      first = false;
    }
    out_ << '\n';
  }

  template <typename... Cells>
  void row(const Cells&... cells) {
    bool first = true;
    ((out_ << (first ? "" : ",") << cell(cells), first = false), ...);
    out_ << '\n';
  }

  ExperimentOutput finish(const json& summary) {
    const std::string s = summary.dump();
    out_ << "# summary " << s << '\n';
    return {out_.str(), s};
  }

 private:
  static std::string cell(double x) { return fmt(x); }
  static std::string cell(std::uint64_t x) { return std::to_string(x); }
  static std::string cell(int x) { return std::to_string(x); }
  static std::string cell(const std::string& s) { return s; }
  static std::string cell(const char* s) { return s; }

  std::ostringstream out_;
};

/// Least-squares slope of y against x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

// ---------------------------------------------------------------------------
// Experiments

ExperimentOutput run_born(const ExperimentConfig& cfg, const Params& p) {
  const double alpha2 = p.real("alpha2");
  const std::uint64_t trials = p.count("trials");
  require(alpha2 >= 0.0 && alpha2 <= 1.0, "parameter 'alpha2': must lie in [0, 1]");
  require(trials >= 1, "parameter 'trials': must be >= 1");

  const StateVector psi{std::sqrt(alpha2), std::sqrt(1.0 - alpha2)};
  const HermitianOperator sz = HermitianOperator::pauli_z();
  const SeededRng master(cfg.seed);

  CsvWriter csv(cfg);
  csv.header({"trial", "outcome"});
  std::uint64_t plus = 0;
  for (std::uint64_t i = 0; i < trials; ++i) {
    SeededRng rng = master.stream(i);
    const double outcome = strong_measure(psi, sz, rng).outcome;
    if (outcome > 0.0) ++plus;
    csv.row(i, outcome > 0.0 ? 1 : -1);
  }
  const double freq = static_cast<double>(plus) / static_cast<double>(trials);
  const double band = 3.0 * std::sqrt(alpha2 * (1.0 - alpha2) / static_cast<double>(trials));
  return csv.finish({{"trials", trials},
                     {"count_plus", plus},
                     {"frequency_plus", freq},
                     {"expected", alpha2},
                     {"band_3sigma", band},
                     {"within_band", std::abs(freq - alpha2) <= band}});
}

ExperimentOutput run_weakvalue(const ExperimentConfig& cfg, const Params& p) {
  const double theta = p.real("theta");
  const double ratio = p.real("g_over_sigma");
  const double sigma = p.real("sigma");
  const std::uint64_t target = p.count("accepted");
  const std::uint64_t max_trials = p.count("max_trials");
  const std::uint64_t blocks = p.count("blocks");
  require(ratio > 0.0 && sigma > 0.0, "parameters 'g_over_sigma' and 'sigma' must be > 0");
  require(target >= 1, "parameter 'accepted': must be >= 1");
  require(blocks >= 1 && blocks <= target, "parameter 'blocks': must lie in [1, accepted]");
  const double g = ratio * sigma;

  const TwoState ts(StateVector{1.0, 1.0}.normalized(),
                    StateVector{std::cos(theta), -std::sin(theta)});
  const HermitianOperator sz = HermitianOperator::pauli_z();
  const Complex wv = weak_value(ts, sz);
  const ReadingSampler sampler(readout_density(couple(ts.forward(), sz, g, sigma), ts.backward()));
  const SeededRng master(cfg.seed);

  CsvWriter csv(cfg);
  csv.header({"trial", "q"});
  std::uint64_t accepted = 0;
  std::uint64_t trials = 0;
  double mean = 0.0;
  double m2 = 0.0;
  // Accepted readings split into consecutive blocks, one pointer ensemble each.
  std::vector<double> block_sum(blocks, 0.0);
  std::vector<std::uint64_t> block_count(blocks, 0);
  for (; trials < max_trials && accepted < target; ++trials) {
    SeededRng rng = master.stream(trials);
    const auto q = sampler.sample(rng);
    if (!q) continue;
    const std::uint64_t block = accepted * blocks / target;
    block_sum[block] += *q;
    ++block_count[block];
    ++accepted;
    const double delta = *q - mean;
    mean += delta / static_cast<double>(accepted);
    m2 += delta * (*q - mean);
    csv.row(trials, *q);
  }
  if (accepted == 0) throw NoAcceptedTrials("weakvalue: no trial passed post-selection");
  const double var = accepted > 1 ? m2 / static_cast<double>(accepted - 1) : 0.0;
  const double stderr_q = std::sqrt(var / static_cast<double>(accepted));
  const double z = (mean / g - wv.real()) / (stderr_q / g);
  json block_means = json::array();
  for (std::uint64_t b = 0; b < blocks; ++b) {
    block_means.push_back(block_count[b] > 0
                              ? num(block_sum[b] / static_cast<double>(block_count[b]) / g)
                              : json(nullptr));
  }
  return csv.finish({{"block_means_over_g", block_means},{"weak_value_re", wv.real()},
                     {"weak_value_im", wv.imag()},
                     {"analytic_mean_over_g", sampler.density().mean() / g},
                     {"mean_q_over_g", mean / g},
                     {"stderr_over_g", stderr_q / g},
                     {"z_score", z},
                     {"acceptance_rate", static_cast<double>(accepted) / static_cast<double>(trials)},
                     {"success_probability", sampler.density().success_probability()},
                     {"trials", trials},
                     {"accepted", accepted},
                     {"anomalous", std::abs(mean / g) > 1.0}});
}

ExperimentOutput run_convergence(const ExperimentConfig& cfg, const Params& p) {
  const std::vector<std::uint64_t> ns = p.counts("Ns");
  const std::uint64_t brute_n = p.count("brute_N");
  const double noise = p.real("noise");
  const std::uint64_t noise_trials = p.count("noise_trials");
  require(ns.size() >= 2, "parameter 'Ns': need at least two ensemble sizes");
  require(std::all_of(ns.begin(), ns.end(), [](auto n) { return n >= 1; }),
          "parameter 'Ns': sizes must be >= 1");
  require(noise >= 0.0, "parameter 'noise': must be >= 0");
  require(noise_trials >= 1, "parameter 'noise_trials': must be >= 1");

  const StateVector plus = StateVector{1.0, 1.0}.normalized();
  const HermitianOperator sz = HermitianOperator::pauli_z();
  const SeededRng master(cfg.seed);

  CsvWriter csv(cfg);
  csv.header({"N", "residual", "abar"});
  std::vector<double> log_n;
  std::vector<double> log_r;
  for (std::uint64_t n : ns) {
    AverageResidual r{};
    if (noise > 0.0) {
      const FluctuationResult f =
          fluctuation_robustness(sz, plus, noise, n, noise_trials, master.stream(n), cfg.threads);
      r = {f.abar_mean, f.residual_mean};
    } else {
      r = average_operator_residual(sz, EnsembleSpec::identical(plus, n));
    }
    csv.row(n, r.residual, r.abar);
    log_n.push_back(std::log(static_cast<double>(n)));
    log_r.push_back(std::log(r.residual));
  }
  json summary{{"slope", fit_slope(log_n, log_r)}, {"expected_slope", -0.5}};
  if (brute_n >= 1) {
    const EnsembleSpec spec = EnsembleSpec::identical(plus, brute_n);
    const AverageResidual brute = brute_force_average(sz, spec);
    const AverageResidual closed = average_operator_residual(sz, spec);
    summary["brute_N"] = brute_n;
    summary["brute_residual"] = brute.residual;
    summary["closed_residual"] = closed.residual;
    summary["oracle_abs_diff"] = std::abs(brute.residual - closed.residual);
  }
  return csv.finish(summary);
}

ExperimentOutput run_commutator(const ExperimentConfig& cfg, const Params& p) {
  const std::vector<std::uint64_t> ns = p.counts("Ns");
  const std::uint64_t brute_max = p.count("brute_max");
  require(!ns.empty(), "parameter 'Ns': empty list");
  require(brute_max <= 12, "parameter 'brute_max': at most 12");

  CsvWriter csv(cfg);
  csv.header({"N", "closed_scale", "brute_scale", "brute_defect"});
  double worst_defect = 0.0;
  for (std::uint64_t n : ns) {
    require(n >= 1, "parameter 'Ns': sizes must be >= 1");
    const double closed = average_spin_commutator(n);
    if (n <= brute_max) {
      const SpinCommutatorCheck check = brute_force_spin_commutator(static_cast<int>(n));
      worst_defect = std::max(worst_defect, check.defect);
      csv.row(n, closed, check.scale, check.defect);
    } else {
      csv.row(n, closed, std::string(), std::string());
    }
  }
  return csv.finish({{"max_brute_defect", worst_defect},
                     {"largest_N", *std::max_element(ns.begin(), ns.end())},
                     {"scale_at_largest_N",
                      average_spin_commutator(*std::max_element(ns.begin(), ns.end()))}});
}

RobustnessModel model_from(const Params& p, std::uint64_t env_n, std::uint64_t collapse_n) {
  RobustnessModel m;
  m.env_n = env_n;
  m.collapse_n = collapse_n;
  m.overlap_c = p.real("c");
  m.gamma1 = p.reals("gamma1");
  m.gamma2 = p.reals("gamma2");
  m.form = p.form("form");
  return m;
}

ExperimentOutput run_robustness(const ExperimentConfig& cfg, const Params& p) {
  const std::uint64_t env_n = p.count("N");
  std::vector<std::uint64_t> ns = p.counts("ns");
  if (ns.empty()) {
    for (std::uint64_t n = 0; n < env_n; ++n) ns.push_back(n);
  }

  CsvWriter csv(cfg);
  csv.header({"n", "core", "log_ratio", "ratio", "brute_ratio"});
  std::vector<double> cores;
  std::vector<double> logs;
  for (std::uint64_t n : ns) {
    RobustnessModel m = model_from(p, env_n, n);
    try {
      m.validate();
    } catch (const OrthogonalCollapseForbidden&) {
      throw;
    } catch (const Error& e) {
      throw ConfigError(std::string("robustness parameters: ") + e.what());
    }
    const double lr = log_robustness_ratio(m);
    const double r = robustness_ratio(m);
    const std::uint64_t core = env_n - n;
    if (env_n <= 12 && m.form == RatioForm::kSquared) {
      csv.row(n, core, lr, r, brute_force_ratio(m));
    } else {
      csv.row(n, core, lr, r, std::string());
    }
    if (std::isfinite(lr)) {
      cores.push_back(static_cast<double>(core));
      logs.push_back(lr);
    }
  }
  json summary{{"expected_slope", -2.0 * std::log(p.real("c"))}};
  summary["slope"] = cores.size() >= 2 ? num(fit_slope(cores, logs)) : json(nullptr);
  return csv.finish(summary);
}

ExperimentOutput run_threshold(const ExperimentConfig& cfg, const Params& p) {
  const std::uint64_t n = p.count("n");
  const double c = p.real("c");
  const double target = p.real("target");
  const std::vector<double> g1 = p.reals("gamma1");
  const std::vector<double> g2 = p.reals("gamma2");
  const RatioForm form = p.form("form");
  require(c > 0.0 && c < 1.0, "parameter 'c': must lie in (0, 1)");
  require(target > 0.0, "parameter 'target': must be > 0");

  const std::uint64_t threshold = classical_threshold(n, c, g1, g2, target, form);

  CsvWriter csv(cfg);
  csv.header({"N", "log_ratio", "ratio", "meets_target"});
  const std::uint64_t lo = threshold > n + 3 ? threshold - 3 : n + 1;
  for (std::uint64_t env_n = lo; env_n <= threshold + 3; ++env_n) {
    const RobustnessModel m = model_from(p, env_n, n);
    const double lr = log_robustness_ratio(m);
    csv.row(env_n, lr, std::exp(lr), lr >= std::log(target) ? 1 : 0);
  }
  json summary{{"threshold_N", threshold}, {"target", target}};
  summary["ratio_at_threshold"] = num(robustness_ratio(model_from(p, threshold, n)));
  summary["ratio_below_threshold"] =
      threshold - 1 > n ? num(robustness_ratio(model_from(p, threshold - 1, n))) : json(nullptr);
  return csv.finish(summary);
}

ExperimentOutput run_decay(const ExperimentConfig& cfg, const Params& p) {
  const double n0 = p.real("N0");
  const double lifetime = p.real("T");
  const double t_max = p.real("t_max");
  const std::uint64_t steps = p.count("steps");
  require(lifetime > 0.0, "parameter 'T': must be > 0");
  require(t_max >= 0.0, "parameter 't_max': must be >= 0");
  require(steps >= 1, "parameter 'steps': must be >= 1");

  CsvWriter csv(cfg);
  csv.header({"t", "N"});
  bool monotone = true;
  double prev = n0;
  for (std::uint64_t k = 0; k <= steps; ++k) {
    const double t = t_max * static_cast<double>(k) / static_cast<double>(steps);
    const double value = core_decay(n0, lifetime, t);
    monotone = monotone && value <= prev;
    prev = value;
    csv.row(t, value);
  }
  return csv.finish({{"N_at_T", core_decay(n0, lifetime, lifetime)}, {"monotone", monotone}});
}

using Runner = ExperimentOutput (*)(const ExperimentConfig&, const Params&);

struct Registered {
  ExperimentInfo info;
  Runner runner;
};

const std::vector<Registered>& registry() {
  static const std::vector<Registered> entries = {
      {{"born",
        "Born statistics of projective sigma_z measurements on sqrt(alpha2)|0> + "
        "sqrt(1-alpha2)|1>",
        {{"alpha2", "0.36", "probability of outcome +1"},
         {"trials", "100000", "number of measurements"}}},
       run_born},
      {{"weakvalue",
        "Weak measurement of sigma_z on |+>, post-selected on cos(theta)|0> - sin(theta)|1>",
        {{"theta", "0.39269908169872414", "post-selection angle (default pi/8)"},
         {"g_over_sigma", "0.01", "coupling strength in pointer widths"},
         {"sigma", "1", "pointer width"},
         {"accepted", "100000", "accepted trials to collect"},
         {"max_trials", "100000000", "hard cap on attempted trials"},
         {"blocks", "1", "split accepted readings into this many pointer ensembles"}}},
       run_weakvalue},
      {{"convergence",
        "Residual norm of the average sigma_z operator on N copies of |+>",
        {{"Ns", "100,1000,10000,100000", "ensemble sizes"},
         {"brute_N", "4", "size for the brute-force oracle (0 = skip)"},
         {"noise", "0", "per-copy fluctuation magnitude"},
         {"noise_trials", "4", "Monte Carlo trials per size when noise > 0"}}},
       run_convergence},
      {{"commutator",
        "Scale of [S_x, S_y] = i S_z / N for average spin operators",
        {{"Ns", "1,2,3,4,5,6,7,8,9,10,1000000", "ensemble sizes"},
         {"brute_max", "10", "largest N checked by explicit matrices (<= 12)"}}},
       run_commutator},
      {{"robustness",
        "Robustness ratio against collapsed count n",
        {{"c", "0.9", "per-qubit environment overlap"},
         {"N", "20", "environment size"},
         {"ns", "", "collapsed counts (empty = 0..N-1)"},
         {"gamma1", "0.5", "collapse overlaps for the right branch (list or scalar)"},
         {"gamma2", "0.5", "collapse overlaps for the wrong branch (list or scalar)"},
         {"form", "squared", "squared | literal"}}},
       run_robustness},
      {{"threshold",
        "Smallest environment size reaching a robustness target",
        {{"c", "0.9", "per-qubit environment overlap"},
         {"n", "0", "collapsed count"},
         {"gamma1", "0.5", "collapse overlaps for the right branch"},
         {"gamma2", "0.5", "collapse overlaps for the wrong branch"},
         {"target", "1e6", "robustness ratio target"},
         {"form", "squared", "squared | literal"}}},
       run_threshold},
      {{"decay",
        "Exponential decay of the macroscopic core N(t) = N0 exp(-t/T)",
        {{"N0", "1e6", "initial core size"},
         {"T", "1", "lifetime"},
         {"t_max", "10", "end time"},
         {"steps", "100", "number of intervals"}}},
       run_decay},
  };
  return entries;
}

const Registered& lookup(const std::string& name) {
  for (const Registered& r : registry()) {
    if (r.info.name == name) return r;
  }
  std::string known;
  for (const Registered& r : registry()) known += (known.empty() ? "" : ", ") + r.info.name;
  throw ConfigError("unknown experiment '" + name + "' (known: " + known + ")");
}

std::string json_param_value(const std::string& key, const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number() || v.is_boolean()) return v.dump();
  if (v.is_array()) {
    std::string out;
    for (const json& item : v) out += (out.empty() ? "" : ",") + json_param_value(key, item);
    return out;
  }
  throw ConfigError("config file: parameter '" + key + "' has unsupported type");
}

}  // namespace

const std::vector<ExperimentInfo>& experiment_catalog() {
  static const std::vector<ExperimentInfo> catalog = [] {
    std::vector<ExperimentInfo> out;
    for (const Registered& r : registry()) out.push_back(r.info);
    return out;
  }();
  return catalog;
}

void apply_param_assignment(ExperimentConfig& config, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError("malformed parameter '" + std::string(assignment) + "': expected key=value");
  }
  const std::string key = trim(assignment.substr(0, eq));
  if (key.empty()) {
    throw ConfigError("malformed parameter '" + std::string(assignment) + "': empty key");
  }
  config.params[key] = trim(assignment.substr(eq + 1));
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file '" + path + "': " + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config file '" + path + "': expected a JSON object");

  ExperimentConfig cfg;
  for (const auto& [key, value] : doc.items()) {
    if (key == "experiment") {
      if (!value.is_string()) throw ConfigError("config file: 'experiment' must be a string");
      cfg.experiment = value.get<std::string>();
    } else if (key == "seed") {
      if (!value.is_number_unsigned()) {
        throw ConfigError("config file: 'seed' must be an unsigned integer");
      }
      cfg.seed = value.get<std::uint64_t>();
    } else if (key == "params") {
      if (!value.is_object()) throw ConfigError("config file: 'params' must be an object");
      for (const auto& [pk, pv] : value.items()) cfg.params[pk] = json_param_value(pk, pv);
    } else if (key == "out") {
      if (!value.is_string()) throw ConfigError("config file: 'out' must be a string");
      cfg.output_path = value.get<std::string>();
    } else {
      throw ConfigError("config file: unknown key '" + key + "'");
    }
  }
  return cfg;
}

ExperimentConfig resolve_config(const ExperimentConfig& config) {
  if (config.experiment.empty()) throw ConfigError("no experiment given");
  const Registered& entry = lookup(config.experiment);
  for (const auto& [key, value] : config.params) {
    const bool known = std::any_of(entry.info.params.begin(), entry.info.params.end(),
                                   [&](const ParamSpec& s) { return s.name == key; });
    if (!known) {
      std::string names;
      for (const ParamSpec& s : entry.info.params) names += (names.empty() ? "" : ", ") + s.name;
      throw ConfigError("unknown parameter '" + key + "' for experiment '" + config.experiment +
                        "' (accepted: " + names + ")");
    }
  }
  ExperimentConfig resolved = config;
  for (const ParamSpec& s : entry.info.params) resolved.params.try_emplace(s.name, s.default_value);
  return resolved;
}

ExperimentOutput run_experiment(const ExperimentConfig& config) {
  const ExperimentConfig resolved = resolve_config(config);
  const Params params(resolved.params);
  return lookup(resolved.experiment).runner(resolved, params);
}

int run(const ExperimentConfig& config, std::ostream& out, std::ostream& diag) {
  try {
    const ExperimentOutput result = run_experiment(config);
    if (config.output_path.empty()) {
      out << result.csv;
    } else {
      std::ofstream file(config.output_path, std::ios::binary | std::ios::trunc);
      if (!file) throw IoError("cannot open output file '" + config.output_path + "'");
      file << result.csv;
      file.flush();
      if (!file) throw IoError("failed writing output file '" + config.output_path + "'");
      out << result.summary_json << '\n';
    }
    return 0;
  } catch (const ConfigError& e) {
    diag << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    diag << "error: " << e.what() << '\n';
    return 3;
  }
}

void print_catalog(std::ostream& out) {
  for (const ExperimentInfo& info : experiment_catalog()) {
    out << info.name << "\n  " << info.description << '\n';
    for (const ParamSpec& s : info.params) {
      out << "    " << s.name << " (default: " << (s.default_value.empty() ? "<empty>" : s.default_value)
          << ")  " << s.description << '\n';
    }
  }
}

}  // namespace tsvf
