#ifndef PIFOLAB_ORACLE_HPP
#define PIFOLAB_ORACLE_HPP

#include <utility>
#include <vector>

#include "pifolab/instance.hpp"
#include "pifolab/types.hpp"

namespace pifo {

/// One oracle answer: component value, gradient, proximal point and the
/// feasible-set projections of the query point, returned jointly.
struct PifoResponse {
  double value = 0.0;
  Vec grad_x, grad_y;
  Vec prox_x, prox_y;
  Vec proj_x, proj_y;
};

struct QueryCounter {
  long long total = 0;
  std::vector<long long> per_component;

  void reset(int n) {
    total = 0;
    per_component.assign(n, 0);
  }
  void bump(int i) {
    ++total;
    if (!per_component.empty()) ++per_component[i - 1];
  }
};

/// Full oracle call of one component.  gamma must lie strictly below the
/// instance's validity threshold; violations throw.
PifoResponse pifo_query(const FiniteSumInstance& inst, int i, const Vec& x, const Vec& y,
                  double gamma, QueryCounter& counter);

/// Saddle prox of component i (minimax instances).
std::pair<Vec, Vec> prox_saddle(const FiniteSumInstance& inst, int i, const Vec& x,
                                const Vec& y, double gamma);

/// Prox of component i (minimization instances).
Vec prox_minimization(const FiniteSumInstance& inst, int i, const Vec& x, double gamma);

/// Solve A t + coef * dGamma(scale * t) = rhs for the unique root
/// (requires A above the potential's weak-convexity modulus).
double solve_scalar_prox_equation(double A, double coef, double scale, double rhs);

}  // namespace pifo

#endif
