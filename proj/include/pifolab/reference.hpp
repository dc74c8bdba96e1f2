#ifndef PIFOLAB_REFERENCE_HPP
#define PIFOLAB_REFERENCE_HPP

#include <optional>
#include <string>

#include "pifolab/instance.hpp"
#include "pifolab/types.hpp"

namespace pifo {

struct ReferencePoint {
  Vec x_star;
  std::optional<Vec> y_star;
  double value = 0.0;
  double residual = 0.0;  // norm of the aggregate first-order system
};

/// Closed-form saddle point (SCSC instances).
ReferencePoint saddle_point_scsc(const FiniteSumInstance& inst);

/// Closed-form minimizer (SC, C and the 1-D SC instance).
ReferencePoint minimizer_closed_form(const FiniteSumInstance& inst);

/// Best-response envelopes phi(x) = max_y f(x, y), psi(y) = min_x f(x, y)
/// over the instance's feasible sets, in closed form.
double phi_eval(const FiniteSumInstance& inst, const Vec& x);
double psi_eval(const FiniteSumInstance& inst, const Vec& y);

/// Gradient of phi for the unconstrained nonconvex minimax instances, and
/// the aggregate gradient for nonconvex minimization instances.
Vec grad_phi(const FiniteSumInstance& inst, const Vec& x);

/// phi(x) - psi(y); requires a convex-concave instance.
double primal_dual_gap(const FiniteSumInstance& inst, const Vec& x, const Vec& y);

/// f(x) - min f for convex minimization instances.
double suboptimality(const FiniteSumInstance& inst, const Vec& x);

/// The instance's progress measure at (x, y): primal-dual gap, value
/// suboptimality, or stationarity norm, depending on the kind.
double criterion_value(const FiniteSumInstance& inst, const Vec& x, const Vec& y);

/// Printed lower bound (or exact value) of the gap restricted to the span of
/// the first k coordinates, 1 <= k <= m-1.
double restricted_gap(const FiniteSumInstance& inst, int k);

// ---------------------------------------------------------------------------
// Theorem-level machinery: lower-bound curves and the (m, M, N) selections.
// ---------------------------------------------------------------------------

enum class CurveCase { SCSC, CSC, CC, NCSC, SCSC_AVG, CSC_AVG, CC_AVG, NCSC_AVG };

const char* curve_case_name(CurveCase c);
CurveCase curve_case_from_name(const std::string& name);

struct TheoremParams {
  int n = 2;
  double L = 0.0;       // per-component smoothness (smooth rows)
  double L_prime = 0.0; // mean-square smoothness (average-smooth rows)
  double mu_x = 0.0;
  double mu_y = 0.0;
  double Rx = 0.0;
  double Ry = 0.0;
  double Delta = 0.0;
};

struct LowerBoundQuery {
  CurveCase row = CurveCase::SCSC;
  TheoremParams params;
  double eps = 0.0;
};

/// Returns true when the query satisfies the row's printed precondition;
/// otherwise fills `why` with the violated threshold.
bool curve_precondition(const LowerBoundQuery& q, std::string* why);

/// Value of the bracketed lower-bound expression with constant 1.
/// Throws std::domain_error when the precondition fails.
double lower_bound_curve(const LowerBoundQuery& q);

struct Selection {
  int m = 0;       // construction dimension
  int M = 0;       // restricted-subspace index
  long long N = 0; // query budget floor(n (M+1) / 4)
};

/// Dimension/budget selection of the corresponding hardness statement.
/// Supported kinds: SC, C, CSC, CC, SCSC, NC, NC_AVG, NCSC, NCSC_AVG.
Selection select_m_N(Kind kind, const TheoremParams& p, double eps);

}  // namespace pifo

#endif
