#ifndef PIFOLAB_INSTANCE_HPP
#define PIFOLAB_INSTANCE_HPP

#include <optional>
#include <string>
#include <vector>

#include "pifolab/types.hpp"

namespace pifo {

// ---------------------------------------------------------------------------
// Factories.  Every factory validates its parameter ranges, derives the
// scaling constants in full precision and fills in the regularity record
// certified by the corresponding smoothness results.
//
// A custom sampling distribution may be supplied; it is normalized and stored
// sorted ascending, so component 1 (the only one carrying the linear seed
// term) is always the rarest draw.
// ---------------------------------------------------------------------------

using Dist = std::vector<double>;

// Raw bases (lambda = beta = 1).
FiniteSumInstance make_bilinear_base(int m, double zeta, double c1, double c2, int n,
                                     const Dist& dist = {});
FiniteSumInstance make_nonconvex_base(int m, double omega, double c1, double c2, double c3,
                                      int n, const Dist& dist = {});
FiniteSumInstance make_quad_base(int m, double omega, double zeta, double c1, double c2,
                                 double c3, int n, const Dist& dist = {});

// Scaled minimax cases.
FiniteSumInstance make_scsc(double L, double mu_x, double mu_y, double Rx, double Ry, int n,
                            int m, const Dist& dist = {});
FiniteSumInstance make_csc(double L, double mu_y, double Rx, double Ry, int n, int m,
                           const Dist& dist = {});
FiniteSumInstance make_cc(double L, double Rx, double Ry, int n, int m, const Dist& dist = {});
FiniteSumInstance make_ncsc(double L, double mu_x, double mu_y, double Delta, double eps,
                            int n, const Dist& dist = {});

// Average-smooth lifts: the same constructions with the per-component
// smoothness chosen so the class is exactly L'-average smooth.
FiniteSumInstance make_scsc_avg(double L_prime, double mu_x, double mu_y, double Rx, double Ry,
                                int n, int m, const Dist& dist = {});
FiniteSumInstance make_csc_avg(double L_prime, double mu_y, double Rx, double Ry, int n, int m,
                               const Dist& dist = {});
FiniteSumInstance make_cc_avg(double L_prime, double Rx, double Ry, int n, int m,
                              const Dist& dist = {});
FiniteSumInstance make_ncsc_avg(double L_prime, double mu_x, double mu_y, double Delta,
                                double eps, int n, const Dist& dist = {});

// Scaled minimization cases.
FiniteSumInstance make_sc(double L, double mu, double R, int n, int m, const Dist& dist = {});
FiniteSumInstance make_c(double L, double R, int n, int m, const Dist& dist = {});
FiniteSumInstance make_nc(double L, double mu, double Delta, double eps, int n,
                          const Dist& dist = {});
FiniteSumInstance make_sc_avg(double L_prime, double mu, double R, int n, int m,
                              const Dist& dist = {});
FiniteSumInstance make_c_avg(double L_prime, double R, int n, int m, const Dist& dist = {});
FiniteSumInstance make_nc_avg(double L_prime, double mu, double Delta, double eps, int n,
                              const Dist& dist = {});

// Separable compositions of an outer quadratic block with a wrapped
// minimization instance.
FiniteSumInstance make_sep_scsc(double L, double mu_x, double mu_y, double Rx, double Ry,
                                int n, int m, const Dist& dist = {});
FiniteSumInstance make_sep_csc(double L, double mu_y, double Rx, double Ry, int n, int m,
                               const Dist& dist = {});
FiniteSumInstance make_sep_csc_xquad(double L, double mu_y, double Rx, double Ry, int n, int m,
                                     const Dist& dist = {});

// One-dimensional instances.
FiniteSumInstance make_one_d_scsc(double L, int n, double Rx, double Ry,
                                  const Dist& dist = {});
FiniteSumInstance make_one_d_cc(double L, int n, double Rx, double Ry, const Dist& dist = {});
FiniteSumInstance make_one_d_sc(double L, double R, int n, const Dist& dist = {});

// ---------------------------------------------------------------------------
// Evaluation.  Component indices are 1-based.  All evaluations preserve
// exact zeros: coordinates a component does not touch come out bitwise 0.
// ---------------------------------------------------------------------------

struct ComponentEval {
  int index = 1;
  double value = 0.0;
  Vec grad_x;
  Vec grad_y;  // empty for minimization instances
};

double component_value(const FiniteSumInstance& inst, int i, const Vec& x, const Vec& y);
ComponentEval component_eval(const FiniteSumInstance& inst, int i, const Vec& x, const Vec& y);

/// Aggregate f = (1/n) sum f_i, evaluated through the collapsed formula
/// rather than by summing components.
double aggregate_value(const FiniteSumInstance& inst, const Vec& x, const Vec& y);
void aggregate_grad(const FiniteSumInstance& inst, const Vec& x, const Vec& y, Vec& gx,
                    Vec& gy);

// Minimization conveniences (dim_y == 0).
inline double component_value(const FiniteSumInstance& inst, int i, const Vec& x) {
  return component_value(inst, i, x, Vec());
}
double aggregate_value(const FiniteSumInstance& inst, const Vec& x);
Vec aggregate_grad(const FiniteSumInstance& inst, const Vec& x);

/// Cumulative distribution of the sampling probabilities (for drawing).
std::vector<double> distribution_cdf(const FiniteSumInstance& inst);

// Structured-text descriptor round trip (reproducibility interface).
std::string instance_to_json(const FiniteSumInstance& inst, std::uint64_t seed = 0);
FiniteSumInstance instance_from_json(const std::string& text);

}  // namespace pifo

#endif
