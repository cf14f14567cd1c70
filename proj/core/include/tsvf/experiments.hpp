#pragma once

// Named, seeded experiments behind the tsvf-sim command line.
//
// Every run emits CSV: a `# meta {...}` line holding the resolved
// configuration (experiment, seed, every parameter including defaults), a
// one-line header, the raw rows, and a trailing `# summary {...}` line.
// Output bytes depend only on the resolved configuration, never on the
// worker count or the output path.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace tsvf {

struct ParamSpec {
  std::string name;
  std::string default_value;
  std::string description;
};

struct ExperimentInfo {
  std::string name;
  std::string description;
  std::vector<ParamSpec> params;
};

/// born, weakvalue, convergence, commutator, robustness, threshold, decay.
const std::vector<ExperimentInfo>& experiment_catalog();

struct ExperimentConfig {
  std::string experiment;
  std::uint64_t seed = 0;
  std::map<std::string, std::string> params;
  std::string output_path;  // empty: write CSV to the output stream
  unsigned threads = 0;     // 0: hardware concurrency
};

/// Parses "key=value" into config.params. Throws ConfigError naming the
/// offending text when there is no '=' or the key is empty.
void apply_param_assignment(ExperimentConfig& config, std::string_view assignment);

/// Reads a JSON config file:
///   {"experiment": "born", "seed": 7, "params": {"trials": 1000}, "out": "x.csv"}
/// Unknown top-level keys are rejected. Throws ConfigError or IoError.
ExperimentConfig load_config_file(const std::string& path);

/// Checks the experiment name and parameter keys (strict) and fills in
/// defaults. Value syntax is checked when the experiment runs.
ExperimentConfig resolve_config(const ExperimentConfig& config);

struct ExperimentOutput {
  std::string csv;
  std::string summary_json;
};

/// Runs a resolved or unresolved config and returns the CSV text.
/// Throws ConfigError for bad parameters, other tsvf::Error at runtime.
ExperimentOutput run_experiment(const ExperimentConfig& config);

/// Runs and writes output. Returns 0 on success, 2 on configuration errors,
/// 3 on runtime errors (including an unwritable output path).
int run(const ExperimentConfig& config, std::ostream& out, std::ostream& diag);

/// Writes the `list` listing (experiments with their parameter schemas).
void print_catalog(std::ostream& out);

}  // namespace tsvf
