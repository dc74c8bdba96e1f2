// Command-line front end: verification suites, experiment sweeps,
// lower-bound curve tables and geometric-tail tables.
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "pifolab/harness.hpp"

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("config", "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"adversarial finite-sum oracle-complexity testbed"};
  app.require_subcommand(1);

  std::string scope;
  std::uint64_t seed = 20240101;
  std::string json_out;
  CLI::App* verify = app.add_subcommand("verify", "run the invariant verification suites");
  verify->add_option("--scope", scope, "prefix filter, e.g. zero_chain or oracle.prox_foc");
  verify->add_option("--seed", seed, "randomness seed for the sampled checks");
  verify->add_option("--json", json_out, "write a machine-readable report to this path");

  std::string run_config;
  std::string out_dir;
  int workers = 0;
  CLI::App* run = app.add_subcommand("run", "run an experiment sweep from a JSON config");
  run->add_option("--config", run_config, "path to the experiment config")->required();
  run->add_option("--out", out_dir, "output directory (overrides config)");
  run->add_option("--workers", workers, "worker threads (overrides config)");
  run->add_option("--seed", seed, "master seed (overrides config)");

  std::string curve_config, curve_out = "curves.csv";
  CLI::App* curve = app.add_subcommand("curve", "evaluate lower-bound curves over a grid");
  curve->add_option("--config", curve_config, "path to the curve config")->required();
  curve->add_option("--out", curve_out, "output CSV path");

  std::string geo_config, geo_out = "geo.csv";
  CLI::App* geo = app.add_subcommand("geo", "emit geometric-tail tables");
  geo->add_option("--config", geo_config, "path to the geo config")->required();
  geo->add_option("--out", geo_out, "output CSV path");
  geo->add_option("--seed", seed, "Monte Carlo seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*verify) return pifo::cmd_verify(scope, seed, json_out);
    if (*run) {
      pifo::ExperimentConfig cfg = pifo::parse_experiment_config(slurp(run_config));
      if (!out_dir.empty()) cfg.output_dir = out_dir;
      if (workers > 0) cfg.workers = workers;
      if (run->count("--seed")) cfg.master_seed = seed;
      pifo::RunOutput out = pifo::cmd_run(cfg);
      std::cout << out.rows.size() << " rows -> " << out.csv_path << "\n";
      for (const std::string& s : out.skipped) std::cout << "skipped " << s << "\n";
      return 0;
    }
    if (*curve) return pifo::cmd_curve(slurp(curve_config), curve_out);
    if (*geo) return pifo::cmd_geo(slurp(geo_config), geo_out, seed);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
