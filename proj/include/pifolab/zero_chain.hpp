#ifndef PIFOLAB_ZERO_CHAIN_HPP
#define PIFOLAB_ZERO_CHAIN_HPP

#include <utility>
#include <vector>

#include "pifolab/instance.hpp"
#include "pifolab/rng.hpp"
#include "pifolab/types.hpp"

namespace pifo {

/// Which propagation rule applies.
enum class ChainCase {
  Bilinear,   // hypothesis (x, y) in F_k x F_{k-1}
  Nonconvex,  // hypothesis (x, y) in F_k x F_k
  Minimize,   // hypothesis x in F_k
};

ChainCase chain_case_of(const FiniteSumInstance& inst);

struct SubspacePair {
  int kx = 0;
  int ky = -1;  // -1 when there is no y block
};

/// Predicted subspaces of gradient/prox outputs when component i is queried
/// at a hypothesis point of level k.
SubspacePair predict_next_subspace(ChainCase c, int k, int i, int n, int m);

struct JumpReport {
  ChainCase chain_case = ChainCase::Bilinear;
  int k = 0;
  int component = 1;
  SubspacePair predicted;
  SubspacePair observed;
  double off_subspace = 0.0;  // max |coordinate| outside the predicted subspaces
  bool hypothesis_ok = true;
  bool pass = false;
};

/// Queries gradient and prox of component i at (x, y) and compares the
/// observed subspaces against the prediction.  tol is the allowed
/// off-subspace magnitude (0 for closed-form paths, 1e-10 for Newton paths).
JumpReport check_jump(const FiniteSumInstance& inst, const Vec& x, const Vec& y, int i,
                      double gamma, double tol);

/// Off-subspace tolerance appropriate for the instance's prox path.
double jump_tolerance(const FiniteSumInstance& inst);

// ---------------------------------------------------------------------------
// Stopping times and geometric tails
// ---------------------------------------------------------------------------

struct GeoProcess {
  std::vector<double> probabilities;  // success probability per link
  std::vector<long long> stopping_times;  // T_1 < T_2 < ...
  std::vector<long long> increments;      // Y_k = T_k - T_{k-1}
};

/// Draw i.i.d. component indices from `distribution` (ascending probabilities,
/// component i = index+1) and record the first K chain-advance times
/// T_k = min{t > T_{k-1} : i_t == k (mod n)}.
GeoProcess simulate_stopping_times(const std::vector<double>& distribution, int K, Rng& rng);

/// Exact tail P(sum of independent geometric({1,2,...}) variables > j)
/// computed by dynamic-programming convolution.
double geo_tail_exact(const std::vector<double>& p_list, long long j);

/// Two-variable closed form of the tail (j >= 1).
double f2j_closed_form(double p1, double p2, long long j);

struct GeoConcentrationReport {
  long long threshold = 0;   // floor(m^2 / (4 sum p))
  double tail = 0.0;         // exact tail or Monte Carlo estimate
  double lower_confidence = 0.0;  // 99% lower bound (equals tail when exact)
  bool exact = true;
  bool pass = false;         // tail lower bound >= 1/9
};

/// Check the concentration bound P(sum Y_i > m^2/(4 sum p)) >= 1/9.
/// Uses the exact tail when the threshold is small enough, otherwise a
/// Monte Carlo estimate with a 99% lower confidence bound.
GeoConcentrationReport verify_geo_concentration(const std::vector<double>& p_list,
                                                long long trials, Rng& rng);

}  // namespace pifo

#endif
