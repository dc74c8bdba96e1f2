#ifndef PIFOLAB_ALGORITHMS_HPP
#define PIFOLAB_ALGORITHMS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "pifolab/instance.hpp"
#include "pifolab/oracle.hpp"
#include "pifolab/reference.hpp"
#include "pifolab/rng.hpp"

namespace pifo {

struct AlgorithmSpec {
  std::string name = "sgda";   // sgda | svrg | point_prox | extragradient
  double step = 0.0;           // 0 -> per-algorithm default
  double prox_gamma = 0.0;     // 0 -> safe default below the validity threshold
  int epoch_length = 0;        // svrg inner loop length; 0 -> default
  std::vector<double> sampling_override;  // optional draw distribution
  bool record_audit = false;   // retain iterates/outputs for protocol_audit
};

struct StopRule {
  double eps = 0.0;            // stop once the criterion falls below (0: never)
  long long max_queries = 100000;
  long long budget_N = 0;      // record the criterion exactly at this query count
  int eval_every_passes = 1;   // criterion evaluation cadence, in n-query passes
};

/// One oracle call retained for auditing.
struct AuditStep {
  int component = 1;
  std::vector<Vec> outputs;  // concatenated (x, y) oracle outputs of this call
  Vec iterate;               // concatenated iterate after this call
};

struct Trace {
  std::uint64_t seed = 0;
  long long queries = 0;
  long long queries_to_eps = -1;
  double initial_criterion = 0.0;
  double final_criterion = 0.0;
  double criterion_at_budget = -1.0;
  std::string stop_reason;
  std::vector<std::pair<long long, double>> history;  // (queries, criterion)
  // audit data (only when requested)
  bool recorded = false;
  int dim_x = 0, dim_y = 0;
  std::vector<AuditStep> steps;
};

Trace run_sgda(const FiniteSumInstance& inst, const AlgorithmSpec& spec, const StopRule& stop,
               std::uint64_t seed);
Trace run_svrg(const FiniteSumInstance& inst, const AlgorithmSpec& spec, const StopRule& stop,
               std::uint64_t seed);
Trace run_point_prox(const FiniteSumInstance& inst, const AlgorithmSpec& spec,
                     const StopRule& stop, std::uint64_t seed);
Trace run_extragradient(const FiniteSumInstance& inst, const AlgorithmSpec& spec,
                        const StopRule& stop, std::uint64_t seed);

/// Dispatch by spec.name.
Trace run_algorithm(const FiniteSumInstance& inst, const AlgorithmSpec& spec,
                    const StopRule& stop, std::uint64_t seed);

struct AuditReport {
  bool pass = false;
  int first_violation = -1;    // step index of the first offending iterate
  double worst_residual = 0.0;
};

/// Check that every recorded iterate lies in the subspace spanned by the
/// initial point and all oracle outputs returned up to that step (the
/// reachable space of the query protocol; projections are span-compatible
/// because ball projections only rescale).
AuditReport protocol_audit(const Trace& trace, const FiniteSumInstance& inst);

}  // namespace pifo

#endif
