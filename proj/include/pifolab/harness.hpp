#ifndef PIFOLAB_HARNESS_HPP
#define PIFOLAB_HARNESS_HPP

#include <string>
#include <vector>

#include "pifolab/algorithms.hpp"
#include "pifolab/reference.hpp"

namespace pifo {

/// Experiment configuration (parsed from the JSON config document).
struct ExperimentConfig {
  int version = 1;
  std::string problem_case = "sc";  // sc | c | nc | scsc | csc | cc | ncsc (+ _avg)
  // parameter grids; absent entries use a single placeholder value
  std::vector<int> n_list{2};
  std::vector<double> L_list{1.0};
  std::vector<double> mu_x_list{0.0};
  std::vector<double> mu_y_list{0.0};
  std::vector<double> Rx_list{1.0};
  std::vector<double> Ry_list{1.0};
  std::vector<double> Delta_list{1.0};
  std::vector<double> eps_list{0.01};
  std::vector<AlgorithmSpec> algorithms;
  int seeds = 16;
  std::uint64_t master_seed = 20240101;
  int max_passes = 400;   // query cap in units of n
  int m_override = 0;     // use a fixed construction dimension instead of the theorem's
  int workers = 0;        // 0 -> env PIFOLAB_WORKERS or hardware
  std::string output_dir = ".";
};

ExperimentConfig parse_experiment_config(const std::string& json_text);

struct RunRow {
  std::string problem_case;
  int n = 0;
  double L = 0, mu_x = 0, mu_y = 0, Rx = 0, Ry = 0, eps = 0;
  std::string algorithm;
  std::uint64_t seed = 0;
  long long queries_to_eps = -1;
  double final_gap = 0;
  long long budget_N = 0;
  double gap_at_budget = -1;
};

struct RunOutput {
  std::vector<RunRow> rows;
  std::vector<std::string> skipped;  // grid points rejected by preconditions
  std::string csv_path;
  std::string summary_path;
};

int cmd_verify(const std::string& scope, std::uint64_t seed, const std::string& json_out);
RunOutput cmd_run(const ExperimentConfig& config);
int cmd_curve(const std::string& config_json, const std::string& out_csv);
int cmd_geo(const std::string& config_json, const std::string& out_csv,
            std::uint64_t seed);

/// CSV cell with 17 significant digits (reproducible decimal round trip).
std::string format_g17(double v);

}  // namespace pifo

#endif
