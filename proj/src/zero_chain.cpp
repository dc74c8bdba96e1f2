#include "pifolab/zero_chain.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pifolab/chain.hpp"
#include "pifolab/oracle.hpp"

namespace pifo {

ChainCase chain_case_of(const FiniteSumInstance& inst) {
  switch (inst.family) {
    case Family::BilinearChain: return ChainCase::Bilinear;
    case Family::NonconvexChain: return ChainCase::Nonconvex;
    case Family::QuadChain: return ChainCase::Minimize;
    default:
      throw std::invalid_argument("chain_case_of: instance has no chain structure");
  }
}

SubspacePair predict_next_subspace(ChainCase c, int k, int i, int n, int m) {
  if (k < 0) throw std::out_of_range("predict_next_subspace: k >= 0 required");
  const bool active = (k % n) == ((i - 1) % n);
  switch (c) {
    case ChainCase::Bilinear:
      if (k >= m) throw std::out_of_range("predict_next_subspace: need k < m");
      return active ? SubspacePair{k + 1, k} : SubspacePair{k, std::max(k - 1, 0)};
    case ChainCase::Nonconvex:
      if (k >= m - 1) throw std::out_of_range("predict_next_subspace: need k < m-1");
      return active ? SubspacePair{k + 1, k + 1} : SubspacePair{k, k};
    case ChainCase::Minimize:
      if (k >= m) throw std::out_of_range("predict_next_subspace: need k < m");
      return active ? SubspacePair{k + 1, -1} : SubspacePair{k, -1};
  }
  throw std::logic_error("predict_next_subspace: unknown case");
}

double jump_tolerance(const FiniteSumInstance& inst) {
  // Closed-form prox paths preserve zeros bitwise; Newton paths are solved to
  // 1e-12 residual, so 1e-10 is a safe off-subspace certificate.
  const bool newton =
      inst.family == Family::NonconvexChain ||
      (inst.family == Family::QuadChain && inst.base.c2 != 0.0);
  return newton ? 1e-10 : 0.0;
}

namespace {

double off_subspace_mag(const Vec& v, int k) {
  double mx = 0.0;
  for (int j = k; j < v.size(); ++j) mx = std::max(mx, std::abs(v[j]));
  return mx;
}

}  // namespace

JumpReport check_jump(const FiniteSumInstance& inst, const Vec& x, const Vec& y, int i,
                      double gamma, double tol) {
  JumpReport rep;
  rep.chain_case = chain_case_of(inst);
  rep.component = i;
  const int m = inst.base.m;
  const int kx = subspace_index(x, tol).k;
  const int ky = inst.dim_y > 0 ? subspace_index(y, tol).k : -1;
  int k = kx;
  switch (rep.chain_case) {
    case ChainCase::Bilinear:
      // smallest k with (x, y) in F_k x F_{k-1} (level 0 means both zero)
      k = std::max(kx, ky > 0 ? ky + 1 : 0);
      rep.hypothesis_ok = k < m;
      break;
    case ChainCase::Nonconvex:
      k = std::max(kx, ky);
      rep.hypothesis_ok = k < m - 1;
      break;
    case ChainCase::Minimize:
      rep.hypothesis_ok = kx < m;
      break;
  }
  rep.k = k;
  if (!rep.hypothesis_ok) return rep;
  rep.predicted = predict_next_subspace(rep.chain_case, k, i, inst.n, m);

  QueryCounter counter;
  counter.reset(inst.n);
  PifoResponse r = pifo_query(inst, i, x, y, gamma, counter);
  int okx = subspace_index(r.grad_x, tol).k;
  okx = std::max(okx, subspace_index(r.prox_x, tol).k);
  rep.observed.kx = okx;
  double off = off_subspace_mag(r.grad_x, rep.predicted.kx);
  off = std::max(off, off_subspace_mag(r.prox_x, rep.predicted.kx));
  if (inst.dim_y > 0) {
    int oky = subspace_index(r.grad_y, tol).k;
    oky = std::max(oky, subspace_index(r.prox_y, tol).k);
    rep.observed.ky = oky;
    off = std::max(off, off_subspace_mag(r.grad_y, std::max(rep.predicted.ky, 0)));
    off = std::max(off, off_subspace_mag(r.prox_y, std::max(rep.predicted.ky, 0)));
  }
  rep.off_subspace = off;
  rep.pass = off <= tol;
  return rep;
}

// ---------------------------------------------------------------------------
// Stopping times
// ---------------------------------------------------------------------------

GeoProcess simulate_stopping_times(const std::vector<double>& distribution, int K, Rng& rng) {
  if (K < 1) throw std::invalid_argument("simulate_stopping_times: K >= 1 required");
  const int n = static_cast<int>(distribution.size());
  std::vector<double> cdf(n);
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    acc += distribution[i];
    cdf[i] = acc;
  }
  cdf[n - 1] = 1.0;
  GeoProcess gp;
  gp.probabilities.reserve(K);
  for (int k = 1; k <= K; ++k) gp.probabilities.push_back(distribution[(k - 1) % n]);
  long long t = 0, prev = 0;
  for (int k = 1; k <= K; ++k) {
    const int target = (k - 1) % n;  // component index (0-based) with i == k (mod n)
    for (;;) {
      ++t;
      if (rng.categorical(cdf) == target) break;
    }
    gp.stopping_times.push_back(t);
    gp.increments.push_back(t - prev);
    prev = t;
  }
  return gp;
}

double geo_tail_exact(const std::vector<double>& p_list, long long j) {
  const int m = static_cast<int>(p_list.size());
  for (double p : p_list)
    if (!(p > 0.0 && p <= 1.0))
      throw std::invalid_argument("geo_tail_exact: probabilities in (0, 1]");
  if (j < m) return 1.0;  // each variable is at least 1
  // dp[s] = P(Y_1 + ... + Y_i = s) for s <= j.
  std::vector<double> dp(static_cast<std::size_t>(j) + 1, 0.0);
  dp[0] = 1.0;
  for (int i = 0; i < m; ++i) {
    const double p = p_list[i], q = 1.0 - p;
    std::vector<double> next(dp.size(), 0.0);
    // convolve with P(Y = t) = q^{t-1} p using the running-sum recurrence
    // next[s] = q * next[s-1] + p * dp[s-1].
    for (long long s = 1; s <= j; ++s)
      next[s] = q * next[s - 1] + p * dp[s - 1];
    dp.swap(next);
  }
  double below = 0.0;
  for (long long s = 0; s <= j; ++s) below += dp[s];
  return std::max(0.0, 1.0 - below);
}

double f2j_closed_form(double p1, double p2, long long j) {
  if (j < 1) throw std::invalid_argument("f2j_closed_form: j >= 1 required");
  if (j < 2) return 1.0;
  // Treat nearly-equal probabilities through the equal-p branch for stability.
  if (std::abs(p1 - p2) <= 1e-12 * std::max(p1, p2)) {
    const double p = 0.5 * (p1 + p2);
    return double(j) * p * std::pow(1.0 - p, double(j - 1)) + std::pow(1.0 - p, double(j));
  }
  return (p2 * std::pow(1.0 - p1, double(j)) - p1 * std::pow(1.0 - p2, double(j))) /
         (p2 - p1);
}

GeoConcentrationReport verify_geo_concentration(const std::vector<double>& p_list,
                                                long long trials, Rng& rng) {
  const int m = static_cast<int>(p_list.size());
  if (m < 2) throw std::invalid_argument("verify_geo_concentration: m >= 2 required");
  double sum = 0.0;
  for (double p : p_list) sum += p;
  GeoConcentrationReport rep;
  rep.threshold = static_cast<long long>(std::floor(double(m) * m / (4.0 * sum)));
  const long long dp_cost_cap = 50'000'000;
  if (rep.threshold < m) {
    rep.tail = 1.0;
    rep.lower_confidence = 1.0;
    rep.exact = true;
  } else if (static_cast<long long>(m) * rep.threshold <= dp_cost_cap) {
    rep.tail = geo_tail_exact(p_list, rep.threshold);
    rep.lower_confidence = rep.tail;
    rep.exact = true;
  } else {
    long long hits = 0;
    for (long long t = 0; t < trials; ++t) {
      long long total = 0;
      for (double p : p_list) {
        // inverse-CDF geometric draw on support {1, 2, ...}
        const double u = rng.uniform();
        total += 1 + static_cast<long long>(std::floor(std::log1p(-u) / std::log1p(-p)));
        if (total > rep.threshold) break;
      }
      if (total > rep.threshold) ++hits;
    }
    rep.exact = false;
    rep.tail = double(hits) / double(trials);
    const double se = std::sqrt(std::max(rep.tail * (1.0 - rep.tail), 1e-12) / double(trials));
    rep.lower_confidence = rep.tail - 2.5758 * se;  // 99% one-sided normal bound
  }
  rep.pass = rep.lower_confidence >= 1.0 / 9.0;
  return rep;
}

}  // namespace pifo
