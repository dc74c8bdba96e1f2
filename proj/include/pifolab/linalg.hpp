#ifndef PIFOLAB_LINALG_HPP
#define PIFOLAB_LINALG_HPP

#include "pifolab/types.hpp"

namespace pifo {

/// Euclidean projection onto the ball of radius R.  R = +inf is the identity.
Vec project_ball(const Vec& v, double R);

/// Thomas solve of a tridiagonal system.
///   diag: n entries, sub/sup: n-1 entries, rhs: n entries.
/// Throws std::runtime_error when a pivot collapses (singular system).
Vec solve_tridiagonal(const std::vector<double>& diag, const std::vector<double>& sub,
                      const std::vector<double>& sup, const std::vector<double>& rhs);

/// max over ||y|| <= R of  <c, y> - (mu/2) ||y||^2  (mu >= 0; R may be +inf,
/// in which case mu must be positive).
double ball_max_quadratic(const Vec& c, double mu, double R);

/// The maximizer of the problem above.
Vec ball_max_quadratic_arg(const Vec& c, double mu, double R);

}  // namespace pifo

#endif
