#include "pifolab/algorithms.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "pifolab/linalg.hpp"

namespace pifo {

namespace {

Vec concat_xy(const Vec& x, const Vec& y) {
  Vec z(x.size() + y.size());
  if (x.size() > 0) z.head(x.size()) = x;
  if (y.size() > 0) z.tail(y.size()) = y;
  return z;
}

struct Runner {
  const FiniteSumInstance& inst;
  const AlgorithmSpec& spec;
  const StopRule& stop;
  Trace trace;
  QueryCounter counter;
  Rng rng;
  std::vector<double> cdf;
  Vec x, y;
  double gamma = 0.0;
  bool finished = false;
  bool budget_pending = false;

  Runner(const FiniteSumInstance& i, const AlgorithmSpec& s, const StopRule& st,
         std::uint64_t seed)
      : inst(i), spec(s), stop(st), rng(Rng::stream(seed, 0)) {
    counter.reset(inst.n);
    trace.seed = seed;
    trace.recorded = spec.record_audit;
    trace.dim_x = inst.dim_x;
    trace.dim_y = inst.dim_y;
    x = Vec::Zero(inst.dim_x);
    y = Vec::Zero(inst.dim_y);
    const std::vector<double>& probs =
        spec.sampling_override.empty() ? inst.distribution : spec.sampling_override;
    cdf.resize(probs.size());
    double acc = 0.0;
    for (std::size_t k = 0; k < probs.size(); ++k) {
      acc += probs[k];
      cdf[k] = acc;
    }
    cdf.back() = 1.0;
    gamma = spec.prox_gamma;
    if (gamma <= 0.0) {
      gamma = 1.0 / std::max(inst.regularity.L, 1e-12);
      if (inst.gamma_max < kInf) gamma = std::min(gamma, 0.5 * inst.gamma_max);
    }
    trace.initial_criterion = criterion_value(inst, x, y);
    trace.final_criterion = trace.initial_criterion;
    trace.history.emplace_back(0, trace.initial_criterion);
    if (trace.initial_criterion <= stop.eps && stop.eps > 0.0) {
      trace.queries_to_eps = 0;
      trace.stop_reason = "eps reached";
      finished = true;
    }
  }

  int draw() { return rng.categorical(cdf) + 1; }

  PifoResponse query(int i) {
    PifoResponse r = pifo_query(inst, i, x, y, gamma, counter);
    trace.queries = counter.total;
    if (trace.recorded) {
      AuditStep stp;
      stp.component = i;
      stp.outputs.push_back(concat_xy(r.grad_x, r.grad_y));
      if (inst.is_minimization())
        stp.outputs.push_back(concat_xy(r.prox_x, Vec()));
      else
        stp.outputs.push_back(concat_xy(r.prox_x, r.prox_y));
      stp.outputs.push_back(concat_xy(r.proj_x, r.proj_y));
      stp.iterate = concat_xy(x, y);  // updated after the step completes
      trace.steps.push_back(std::move(stp));
    }
    if (counter.total == stop.budget_N) budget_pending = true;
    return r;
  }

  void sync_audit_iterate() {
    if (trace.recorded && !trace.steps.empty()) trace.steps.back().iterate = concat_xy(x, y);
  }

  // Evaluate at pass boundaries; returns true when the run should stop.
  // The iterate is settled here, so the budget-N criterion is read now.
  bool evaluate_if_due() {
    if (budget_pending) {
      trace.criterion_at_budget = criterion_value(inst, x, y);
      budget_pending = false;
    }
    const long long pass = static_cast<long long>(inst.n) * std::max(1, stop.eval_every_passes);
    if (counter.total % pass != 0 && counter.total < stop.max_queries) return false;
    const double crit = criterion_value(inst, x, y);
    trace.final_criterion = crit;
    trace.history.emplace_back(counter.total, crit);
    if (trace.queries_to_eps < 0 && stop.eps > 0.0 && crit <= stop.eps) {
      trace.queries_to_eps = counter.total;
      if (counter.total >= stop.budget_N) {
        trace.stop_reason = "eps reached";
        return true;
      }
    }
    if (crit > 1e12 * std::max(trace.initial_criterion, 1e-300)) {
      trace.stop_reason = "diverged";
      return true;
    }
    if (counter.total >= stop.max_queries) {
      trace.stop_reason = "budget exhausted";
      return true;
    }
    return false;
  }

  void project_state() {
    if (inst.feasible.x_constrained()) x = project_ball(x, inst.feasible.Rx);
    if (inst.dim_y > 0 && inst.feasible.y_constrained()) y = project_ball(y, inst.feasible.Ry);
  }
};

}  // namespace

Trace run_sgda(const FiniteSumInstance& inst, const AlgorithmSpec& spec, const StopRule& stop,
               std::uint64_t seed) {
  Runner r(inst, spec, stop, seed);
  const double eta = spec.step > 0.0 ? spec.step : 1.0 / (3.0 * inst.regularity.L);
  while (!r.finished) {
    const int i = r.draw();
    PifoResponse resp = r.query(i);
    r.x -= eta * resp.grad_x;
    if (inst.dim_y > 0) r.y += eta * resp.grad_y;
    r.project_state();
    r.sync_audit_iterate();
    if (r.evaluate_if_due()) break;
  }
  if (r.trace.stop_reason.empty()) r.trace.stop_reason = "budget exhausted";
  return r.trace;
}

Trace run_point_prox(const FiniteSumInstance& inst, const AlgorithmSpec& spec,
                     const StopRule& stop, std::uint64_t seed) {
  Runner r(inst, spec, stop, seed);
  while (!r.finished) {
    const int i = r.draw();
    PifoResponse resp = r.query(i);
    r.x = resp.prox_x;
    if (inst.dim_y > 0) r.y = resp.prox_y;
    r.project_state();
    r.sync_audit_iterate();
    if (r.evaluate_if_due()) break;
  }
  if (r.trace.stop_reason.empty()) r.trace.stop_reason = "budget exhausted";
  return r.trace;
}

Trace run_svrg(const FiniteSumInstance& inst, const AlgorithmSpec& spec, const StopRule& stop,
               std::uint64_t seed) {
  Runner r(inst, spec, stop, seed);
  const double L = inst.regularity.L;
  const double eta = spec.step > 0.0 ? spec.step : 1.0 / (8.0 * L);
  int T = spec.epoch_length;
  if (T <= 0) {
    const double mu = inst.is_minimization()
                          ? inst.regularity.mu_x
                          : std::min(inst.regularity.mu_x, inst.regularity.mu_y);
    T = (mu > 0.0) ? static_cast<int>(std::ceil(32.0 * L / mu)) : 2 * inst.n;
    T = std::max(T, inst.n);
  }
  bool stopping = false;
  while (!r.finished && !stopping) {
    // anchor pass: full gradient at the current point (n queries)
    const Vec wx = r.x;
    const Vec wy = r.y;
    Vec mu_x = Vec::Zero(inst.dim_x);
    Vec mu_y = Vec::Zero(inst.dim_y);
    for (int j = 1; j <= inst.n && !stopping; ++j) {
      PifoResponse resp = r.query(j);
      mu_x += resp.grad_x;
      if (inst.dim_y > 0) mu_y += resp.grad_y;
      stopping = r.evaluate_if_due();
    }
    if (stopping) break;
    mu_x /= inst.n;
    if (inst.dim_y > 0) mu_y /= inst.n;
    for (int t = 0; t < T && !stopping; ++t) {
      const int i = r.draw();
      PifoResponse cur = r.query(i);
      stopping = r.evaluate_if_due();
      if (stopping) break;
      // second simultaneous query of the same component at the anchor
      Vec sx = r.x, sy = r.y;
      r.x = wx;
      r.y = wy;
      PifoResponse anc = r.query(i);
      r.x = std::move(sx);
      r.y = std::move(sy);
      r.x -= eta * (cur.grad_x - anc.grad_x + mu_x);
      if (inst.dim_y > 0) r.y += eta * (cur.grad_y - anc.grad_y + mu_y);
      r.project_state();
      r.sync_audit_iterate();
      stopping = r.evaluate_if_due();
    }
  }
  if (r.trace.stop_reason.empty()) r.trace.stop_reason = "budget exhausted";
  return r.trace;
}

Trace run_extragradient(const FiniteSumInstance& inst, const AlgorithmSpec& spec,
                        const StopRule& stop, std::uint64_t seed) {
  Runner r(inst, spec, stop, seed);
  const double eta = spec.step > 0.0 ? spec.step : 1.0 / inst.regularity.L;
  bool stopping = false;
  while (!r.finished && !stopping) {
    Vec gx = Vec::Zero(inst.dim_x), gy = Vec::Zero(inst.dim_y);
    for (int j = 1; j <= inst.n && !stopping; ++j) {
      PifoResponse resp = r.query(j);
      gx += resp.grad_x;
      if (inst.dim_y > 0) gy += resp.grad_y;
      stopping = r.evaluate_if_due();
    }
    if (stopping) break;
    gx /= inst.n;
    if (inst.dim_y > 0) gy /= inst.n;
    const Vec hx0 = r.x, hy0 = r.y;
    r.x = hx0 - eta * gx;
    if (inst.dim_y > 0) r.y = hy0 + eta * gy;
    r.project_state();
    r.sync_audit_iterate();
    // second pass at the half point
    Vec hx = Vec::Zero(inst.dim_x), hy = Vec::Zero(inst.dim_y);
    for (int j = 1; j <= inst.n && !stopping; ++j) {
      PifoResponse resp = r.query(j);
      hx += resp.grad_x;
      if (inst.dim_y > 0) hy += resp.grad_y;
      stopping = r.evaluate_if_due();
    }
    if (stopping) break;
    hx /= inst.n;
    if (inst.dim_y > 0) hy /= inst.n;
    r.x = hx0 - eta * hx;
    if (inst.dim_y > 0) r.y = hy0 + eta * hy;
    r.project_state();
    r.sync_audit_iterate();
  }
  if (r.trace.stop_reason.empty()) r.trace.stop_reason = "budget exhausted";
  return r.trace;
}

Trace run_algorithm(const FiniteSumInstance& inst, const AlgorithmSpec& spec,
                    const StopRule& stop, std::uint64_t seed) {
  if (spec.name == "sgda") return run_sgda(inst, spec, stop, seed);
  if (spec.name == "svrg") return run_svrg(inst, spec, stop, seed);
  if (spec.name == "point_prox") return run_point_prox(inst, spec, stop, seed);
  if (spec.name == "extragradient") return run_extragradient(inst, spec, stop, seed);
  throw std::invalid_argument("unknown algorithm: " + spec.name);
}

AuditReport protocol_audit(const Trace& trace, const FiniteSumInstance& inst) {
  AuditReport rep;
  if (!trace.recorded)
    throw std::invalid_argument("protocol_audit: trace was not recorded for auditing");
  const int d = trace.dim_x + trace.dim_y;
  std::vector<Vec> basis;  // initial point is the origin: contributes nothing
  rep.pass = true;
  for (std::size_t s = 0; s < trace.steps.size(); ++s) {
    for (const Vec& out : trace.steps[s].outputs) basis.push_back(out);
    const Vec& z = trace.steps[s].iterate;
    double resid;
    if (basis.empty()) {
      resid = z.norm();
    } else {
      Mat A(d, static_cast<int>(basis.size()));
      for (std::size_t c = 0; c < basis.size(); ++c) A.col(static_cast<int>(c)) = basis[c];
      Vec coef = A.completeOrthogonalDecomposition().solve(z);
      resid = (A * coef - z).norm();
    }
    const double tol = 1e-8 * std::max(1.0, z.norm());
    if (resid > tol && rep.pass) {
      rep.pass = false;
      rep.first_violation = static_cast<int>(s);
    }
    rep.worst_residual = std::max(rep.worst_residual, resid);
    basis.push_back(z);  // past iterates are allowed span members
  }
  return rep;
}

}  // namespace pifo
