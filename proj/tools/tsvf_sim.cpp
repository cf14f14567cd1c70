// tsvf-sim: run named, seeded experiments and write CSV.
//
//   tsvf-sim run --experiment born --seed 7 --param alpha2=0.36 [--config f.json] [--out f.csv]
//   tsvf-sim list

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tsvf/errors.hpp"
#include "tsvf/experiments.hpp"

namespace {

unsigned threads_from_env() {
  const char* raw = std::getenv("TSVF_SIM_THREADS");
  if (raw == nullptr || *raw == '\0') return 0;
  try {
    std::size_t used = 0;
    const unsigned long v = std::stoul(raw, &used);
    if (used == std::string(raw).size()) return static_cast<unsigned>(v);
  } catch (const std::exception&) {
  }
  throw tsvf::ConfigError(std::string("TSVF_SIM_THREADS: '") + raw + "' is not a non-negative integer");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-state vector measurement simulations"};
  app.require_subcommand(1);

  std::string experiment;
  std::uint64_t seed = 0;
  std::vector<std::string> params;
  std::string config_path;
  std::string out_path;

  CLI::App* run_cmd = app.add_subcommand("run", "Run one experiment");
  CLI::Option* experiment_opt = run_cmd->add_option("--experiment", experiment, "Experiment name");
  CLI::Option* seed_opt = run_cmd->add_option("--seed", seed, "64-bit seed");
  run_cmd->add_option("--param", params, "Parameter assignment key=value (repeatable)");
  run_cmd->add_option("--config", config_path, "JSON config file; flags override it");
  CLI::Option* out_opt = run_cmd->add_option("--out", out_path, "CSV output path (default stdout)");

  CLI::App* list_cmd = app.add_subcommand("list", "List experiments and their parameters");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  }

  if (list_cmd->parsed()) {
    tsvf::print_catalog(std::cout);
    return 0;
  }

  tsvf::ExperimentConfig config;
  try {
    if (!config_path.empty()) config = tsvf::load_config_file(config_path);
    if (experiment_opt->count() > 0) config.experiment = experiment;
    if (seed_opt->count() > 0) config.seed = seed;
    if (out_opt->count() > 0) config.output_path = out_path;
    for (const std::string& p : params) tsvf::apply_param_assignment(config, p);
    config.threads = threads_from_env();
  } catch (const tsvf::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const tsvf::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return tsvf::run(config, std::cout, std::cerr);
}
