#include "pifolab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "json.hpp"
#include "pifolab/verify.hpp"
#include "pifolab/zero_chain.hpp"

namespace pifo {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_g17(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

int worker_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("PIFOLAB_WORKERS")) {
    const int k = std::atoi(env);
    if (k > 0) return k;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

template <typename T>
void read_list(const json& j, const char* key, std::vector<T>& out) {
  if (!j.contains(key)) return;
  if (j.at(key).is_array())
    out = j.at(key).get<std::vector<T>>();
  else
    out = {j.at(key).get<T>()};
}

struct GridPoint {
  int n;
  double L, mu_x, mu_y, Rx, Ry, Delta, eps;
};

Kind case_kind(const std::string& name) {
  if (name == "sc") return Kind::SC;
  if (name == "c") return Kind::C;
  if (name == "nc") return Kind::NC;
  if (name == "nc_avg") return Kind::NC_AVG;
  if (name == "scsc") return Kind::SCSC;
  if (name == "csc") return Kind::CSC;
  if (name == "cc") return Kind::CC;
  if (name == "ncsc") return Kind::NCSC;
  if (name == "ncsc_avg") return Kind::NCSC_AVG;
  throw std::invalid_argument("unknown experiment case: " + name);
}

FiniteSumInstance build_case(Kind kind, const GridPoint& g, int m) {
  switch (kind) {
    case Kind::SC: return make_sc(g.L, g.mu_x, g.Rx, g.n, m);
    case Kind::C: return make_c(g.L, g.Rx, g.n, m);
    case Kind::NC: return make_nc(g.L, g.mu_x, g.Delta, g.eps, g.n);
    case Kind::NC_AVG: return make_nc_avg(g.L, g.mu_x, g.Delta, g.eps, g.n);
    case Kind::SCSC: return make_scsc(g.L, g.mu_x, g.mu_y, g.Rx, g.Ry, g.n, m);
    case Kind::CSC: return make_csc(g.L, g.mu_y, g.Rx, g.Ry, g.n, m);
    case Kind::CC: return make_cc(g.L, g.Rx, g.Ry, g.n, m);
    case Kind::NCSC: return make_ncsc(g.L, g.mu_x, g.mu_y, g.Delta, g.eps, g.n);
    case Kind::NCSC_AVG: return make_ncsc_avg(g.L, g.mu_x, g.mu_y, g.Delta, g.eps, g.n);
    default: throw std::invalid_argument("build_case: unsupported kind");
  }
}

TheoremParams theorem_params(const GridPoint& g) {
  TheoremParams p;
  p.n = g.n;
  p.L = g.L;
  p.L_prime = g.L;  // average-smooth cases read the grid L as L'
  p.mu_x = g.mu_x;
  p.mu_y = g.mu_y;
  p.Rx = g.Rx;
  p.Ry = g.Ry;
  p.Delta = g.Delta;
  return p;
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& text) {
  json j = json::parse(text);
  ExperimentConfig cfg;
  cfg.version = j.value("version", 1);
  if (cfg.version != 1) throw std::invalid_argument("unsupported config version");
  cfg.problem_case = j.value("case", std::string("sc"));
  if (j.contains("grid")) {
    const json& g = j.at("grid");
    read_list(g, "n", cfg.n_list);
    read_list(g, "L", cfg.L_list);
    read_list(g, "mu_x", cfg.mu_x_list);
    read_list(g, "mu_y", cfg.mu_y_list);
    read_list(g, "Rx", cfg.Rx_list);
    read_list(g, "Ry", cfg.Ry_list);
    read_list(g, "Delta", cfg.Delta_list);
    read_list(g, "eps", cfg.eps_list);
  }
  if (j.contains("algorithms")) {
    for (const json& a : j.at("algorithms")) {
      AlgorithmSpec spec;
      if (a.is_string()) {
        spec.name = a.get<std::string>();
      } else {
        spec.name = a.at("name").get<std::string>();
        spec.step = a.value("step", 0.0);
        spec.prox_gamma = a.value("prox_gamma", 0.0);
        spec.epoch_length = a.value("epoch_length", 0);
      }
      cfg.algorithms.push_back(std::move(spec));
    }
  }
  if (cfg.algorithms.empty()) cfg.algorithms.push_back(AlgorithmSpec{});
  cfg.seeds = j.value("seeds", 16);
  cfg.master_seed = j.value("master_seed", std::uint64_t{20240101});
  cfg.max_passes = j.value("max_passes", 400);
  cfg.m_override = j.value("m_override", 0);
  cfg.workers = j.value("workers", 0);
  cfg.output_dir = j.value("output_dir", std::string("."));
  return cfg;
}

int cmd_verify(const std::string& scope, std::uint64_t seed, const std::string& json_out) {
  std::vector<VerifyResult> results = run_verification(scope, seed);
  int failures = 0;
  for (const VerifyResult& r : results) {
    std::cout << (r.pass ? "PASS " : "FAIL ") << r.name;
    if (!r.message.empty()) std::cout << " - " << r.message;
    std::cout << "\n";
    if (!r.pass) ++failures;
  }
  std::cout << results.size() << " checks, " << failures << " failures\n";
  if (!json_out.empty()) {
    json j = json::array();
    for (const VerifyResult& r : results)
      j.push_back({{"name", r.name}, {"pass", r.pass}, {"message", r.message}});
    std::ofstream(json_out) << j.dump(2) << "\n";
  }
  return failures == 0 ? 0 : 1;
}

RunOutput cmd_run(const ExperimentConfig& cfg) {
  const Kind kind = case_kind(cfg.problem_case);
  RunOutput out;

  struct Task {
    GridPoint grid;
    FiniteSumInstance instance;
    Selection sel;
    int algo_index;
    int seed_index;
  };
  std::vector<Task> tasks;

  for (int n : cfg.n_list)
    for (double L : cfg.L_list)
      for (double mx : cfg.mu_x_list)
        for (double my : cfg.mu_y_list)
          for (double Rx : cfg.Rx_list)
            for (double Ry : cfg.Ry_list)
              for (double Delta : cfg.Delta_list)
                for (double eps : cfg.eps_list) {
                  GridPoint g{n, L, mx, my, Rx, Ry, Delta, eps};
                  Selection sel;
                  FiniteSumInstance inst;
                  try {
                    sel = select_m_N(kind, theorem_params(g), eps);
                    const int m = cfg.m_override > 0 ? cfg.m_override : sel.m;
                    inst = build_case(kind, g, m);
                  } catch (const std::exception& e) {
                    char buf[64];
                    std::snprintf(buf, sizeof buf, "n=%d L=%g eps=%g", n, L, eps);
                    out.skipped.push_back(std::string(buf) + ": " + e.what());
                    continue;
                  }
                  for (int a = 0; a < static_cast<int>(cfg.algorithms.size()); ++a)
                    for (int s = 0; s < cfg.seeds; ++s)
                      tasks.push_back(Task{g, inst, sel, a, s});
                }

  std::vector<RunRow> rows(tasks.size());
  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (;;) {
      const std::size_t t = next.fetch_add(1);
      if (t >= tasks.size()) return;
      const Task& task = tasks[t];
      StopRule stop;
      stop.eps = task.grid.eps;
      stop.budget_N = task.sel.N;
      stop.max_queries =
          std::max<long long>(task.sel.N, 1LL * cfg.max_passes * task.instance.n);
      const std::uint64_t seed =
          cfg.master_seed + 1000003ULL * static_cast<std::uint64_t>(task.seed_index);
      Trace tr =
          run_algorithm(task.instance, cfg.algorithms[task.algo_index], stop, seed);
      RunRow row;
      row.problem_case = cfg.problem_case;
      row.n = task.grid.n;
      row.L = task.grid.L;
      row.mu_x = task.grid.mu_x;
      row.mu_y = task.grid.mu_y;
      row.Rx = task.grid.Rx;
      row.Ry = task.grid.Ry;
      row.eps = task.grid.eps;
      row.algorithm = cfg.algorithms[task.algo_index].name;
      row.seed = seed;
      row.queries_to_eps = tr.queries_to_eps;
      row.final_gap = tr.final_criterion;
      row.budget_N = task.sel.N;
      row.gap_at_budget = tr.criterion_at_budget;
      rows[t] = std::move(row);
    }
  };
  const int k = worker_count(cfg.workers);
  std::vector<std::thread> pool;
  for (int w = 0; w < k; ++w) pool.emplace_back(work);
  for (auto& th : pool) th.join();
  out.rows = std::move(rows);

  fs::create_directories(cfg.output_dir);
  out.csv_path = (fs::path(cfg.output_dir) / "results.csv").string();
  {
    std::ofstream csv(out.csv_path);
    csv << "case,n,L,mu_x,mu_y,R_x,R_y,eps,algorithm,seed,queries_to_eps,final_gap,"
           "budget_N,gap_at_budget\n";
    for (const RunRow& r : out.rows) {
      csv << r.problem_case << ',' << r.n << ',' << format_g17(r.L) << ','
          << format_g17(r.mu_x) << ',' << format_g17(r.mu_y) << ',' << format_g17(r.Rx) << ','
          << format_g17(r.Ry) << ',' << format_g17(r.eps) << ',' << r.algorithm << ','
          << r.seed << ',' << r.queries_to_eps << ',' << format_g17(r.final_gap) << ','
          << r.budget_N << ',' << format_g17(r.gap_at_budget) << '\n';
    }
  }
  // aggregate summary per (algorithm); deterministic ordering by config order
  out.summary_path = (fs::path(cfg.output_dir) / "summary.json").string();
  {
    json summary = json::array();
    for (const AlgorithmSpec& spec : cfg.algorithms) {
      std::vector<double> budget_gaps;
      std::vector<double> q2e;
      for (const RunRow& r : out.rows) {
        if (r.algorithm != spec.name) continue;
        if (r.gap_at_budget >= 0) budget_gaps.push_back(r.gap_at_budget);
        if (r.queries_to_eps >= 0) q2e.push_back(double(r.queries_to_eps));
      }
      auto stats = [](std::vector<double> v) {
        json s;
        if (v.empty()) return s;
        std::sort(v.begin(), v.end());
        double mean = 0;
        for (double x : v) mean += x;
        mean /= double(v.size());
        s["count"] = v.size();
        s["mean"] = mean;
        s["median"] = v[v.size() / 2];
        s["q10"] = v[static_cast<std::size_t>(0.10 * (v.size() - 1))];
        s["q90"] = v[static_cast<std::size_t>(0.90 * (v.size() - 1))];
        return s;
      };
      summary.push_back({{"algorithm", spec.name},
                         {"gap_at_budget", stats(budget_gaps)},
                         {"queries_to_eps", stats(q2e)}});
    }
    json root;
    root["case"] = cfg.problem_case;
    root["skipped"] = out.skipped;
    root["per_algorithm"] = summary;
    std::ofstream(out.summary_path) << root.dump(2) << "\n";
  }
  return out;
}

int cmd_curve(const std::string& config_json, const std::string& out_csv) {
  json j = json::parse(config_json);
  std::vector<std::string> row_names = j.at("rows").get<std::vector<std::string>>();
  ExperimentConfig cfg;  // reuse the grid reader
  if (j.contains("grid")) {
    const json& g = j.at("grid");
    read_list(g, "n", cfg.n_list);
    read_list(g, "L", cfg.L_list);
    read_list(g, "mu_x", cfg.mu_x_list);
    read_list(g, "mu_y", cfg.mu_y_list);
    read_list(g, "Rx", cfg.Rx_list);
    read_list(g, "Ry", cfg.Ry_list);
    read_list(g, "Delta", cfg.Delta_list);
    read_list(g, "eps", cfg.eps_list);
  }
  std::ofstream csv(out_csv);
  csv << "case,n,L,mu_x,mu_y,R_x,R_y,Delta,eps,valid,value,reason\n";
  for (const std::string& name : row_names) {
    const CurveCase row = curve_case_from_name(name);
    for (int n : cfg.n_list)
      for (double L : cfg.L_list)
        for (double mx : cfg.mu_x_list)
          for (double my : cfg.mu_y_list)
            for (double Rx : cfg.Rx_list)
              for (double Ry : cfg.Ry_list)
                for (double Delta : cfg.Delta_list)
                  for (double eps : cfg.eps_list) {
                    LowerBoundQuery q;
                    q.row = row;
                    q.params.n = n;
                    q.params.L = L;
                    q.params.L_prime = L;
                    q.params.mu_x = mx;
                    q.params.mu_y = my;
                    q.params.Rx = Rx;
                    q.params.Ry = Ry;
                    q.params.Delta = Delta;
                    q.eps = eps;
                    std::string why;
                    const bool ok = curve_precondition(q, &why);
                    csv << name << ',' << n << ',' << format_g17(L) << ',' << format_g17(mx)
                        << ',' << format_g17(my) << ',' << format_g17(Rx) << ','
                        << format_g17(Ry) << ',' << format_g17(Delta) << ','
                        << format_g17(eps) << ',' << (ok ? 1 : 0) << ','
                        << (ok ? format_g17(lower_bound_curve(q)) : std::string("")) << ','
                        << (ok ? std::string("") : why) << '\n';
                  }
  }
  return 0;
}

int cmd_geo(const std::string& config_json, const std::string& out_csv, std::uint64_t seed) {
  json j = json::parse(config_json);
  std::vector<double> p;
  if (j.contains("p")) {
    p = j.at("p").get<std::vector<double>>();
  } else {
    const int m = j.value("m", 8);
    p.assign(m, 1.0 / m);
  }
  const long long j_max = j.value("j_max", 4LL * static_cast<long long>(p.size()));
  const long long trials = j.value("trials", 100000LL);
  Rng rng = Rng::stream(seed, 2);
  std::ofstream csv(out_csv);
  csv << "m,j,tail_exact,tail_two_term_closed_form\n";
  for (long long jj = 1; jj <= j_max; ++jj) {
    csv << p.size() << ',' << jj << ',' << format_g17(geo_tail_exact(p, jj)) << ',';
    if (p.size() == 2) csv << format_g17(f2j_closed_form(p[0], p[1], jj));
    csv << '\n';
  }
  auto rep = verify_geo_concentration(p, trials, rng);
  std::cout << "concentration: threshold=" << rep.threshold << " tail=" << rep.tail
            << (rep.exact ? " (exact)" : " (monte carlo)")
            << " lcb=" << rep.lower_confidence << " pass=" << (rep.pass ? "yes" : "no")
            << "\n";
  return rep.pass ? 0 : 1;
}

}  // namespace pifo
