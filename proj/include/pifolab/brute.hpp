#ifndef PIFOLAB_BRUTE_HPP
#define PIFOLAB_BRUTE_HPP

#include <utility>

#include "pifolab/instance.hpp"
#include "pifolab/rng.hpp"
#include "pifolab/types.hpp"

namespace pifo {

// Independent reference computations used to cross-check the closed-form
// oracle and envelope paths.  Everything here deliberately avoids the
// structured per-class solves: dense factorizations, finite differences and
// plain projected (sub)gradient iterations only.
namespace brute {

/// Central finite-difference gradients of one component.
std::pair<Vec, Vec> fd_gradient(const FiniteSumInstance& inst, int i, const Vec& x,
                                const Vec& y, double h = 1e-6);

/// Saddle prox via a dense KKT solve (quadratic kinds) or gradient descent on
/// the y-eliminated strongly convex subproblem (potential-coupled kinds).
std::pair<Vec, Vec> prox_saddle(const FiniteSumInstance& inst, int i, const Vec& x,
                                const Vec& y, double gamma, int iters = 200000);

/// Minimization prox via dense solve / gradient descent.
Vec prox_min(const FiniteSumInstance& inst, int i, const Vec& x, double gamma,
             int iters = 200000);

/// Alternating best-response solve of the saddle prox subproblem for the
/// bilinear kinds (contracts for small gamma).
std::pair<Vec, Vec> prox_saddle_abr(const FiniteSumInstance& inst, int i, const Vec& x,
                                    const Vec& y, double gamma, int iters = 1000);

/// Envelope values by projected gradient ascent/descent on the inner block.
double phi_by_ascent(const FiniteSumInstance& inst, const Vec& x, int iters = 20000);
double psi_by_descent(const FiniteSumInstance& inst, const Vec& y, int iters = 20000);

/// Restricted optimization over the span of the first k coordinates
/// intersected with the feasible ball (projected gradient).
double restricted_min_phi(const FiniteSumInstance& inst, int k, int iters = 100000);
double restricted_max_psi(const FiniteSumInstance& inst, int k, int iters = 100000);
double restricted_min_value(const FiniteSumInstance& inst, int k, int iters = 100000);

/// Multi-start local minimization of the aggregate (nonconvex instances).
double global_min_estimate(const FiniteSumInstance& inst, int starts, int iters, Rng& rng);

/// Multi-start minimization of ||grad phi|| over the first k coordinates.
double min_grad_phi_norm(const FiniteSumInstance& inst, int k, int starts, int iters,
                         Rng& rng);

/// Analytic per-component Hessian blocks (dense; small dimensions only).
Mat hessian_xx(const FiniteSumInstance& inst, int i, const Vec& x, const Vec& y);
Mat hessian_yy(const FiniteSumInstance& inst, int i, const Vec& x, const Vec& y);

/// Empirical smoothness certificates over random pairs in a sampling box.
double sampled_lipschitz(const FiniteSumInstance& inst, int pairs, double box, Rng& rng);
double sampled_mean_square_lipschitz(const FiniteSumInstance& inst, int pairs, double box,
                                     Rng& rng);

}  // namespace brute
}  // namespace pifo

#endif
