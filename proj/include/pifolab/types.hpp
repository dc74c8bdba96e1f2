#ifndef PIFOLAB_TYPES_HPP
#define PIFOLAB_TYPES_HPP

#include <Eigen/Core>
#include <cstdint>
#include <limits>
#include <memory>
#include <string>
#include <vector>

namespace pifo {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Instance families share evaluation/prox machinery.
enum class Family {
  BilinearChain,   // convex-concave coupling y' E B x, closed-form prox
  NonconvexChain,  // shifted coupling with scalar nonconvex potential, Newton prox
  QuadChain,       // minimization base 0.5*n*sum ||b_l' x||^2 (+ potential)
  Separable,       // outer quadratic block composed with a wrapped minimization instance
  Scalar1d,        // hand-rolled 1-D saddle / minimization instances
};

enum class Kind {
  // raw bases
  BILINEAR_BASE,  // tilde family, lambda = beta = 1
  NONCONVEX_BASE, // hat family, lambda = beta = 1
  QUAD_BASE,      // minimization base, lambda = beta = 1
  // scaled minimax cases
  SCSC,
  CSC,
  CC,
  NCSC,
  NCSC_AVG,
  // scaled minimization cases
  SC,
  C,
  NC,
  NC_AVG,
  // separable compositions
  SEP_SCSC,       // (mu_x/2)|x|^2 - sc(y)
  SEP_CSC,        // c(x) - (mu_y/2)|y|^2
  SEP_CSC_XQUAD,  // (L/2)|x|^2 - sc(y)
  // one-dimensional instances
  ONE_D_SCSC,
  ONE_D_CC,
  ONE_D_SC,
};

const char* kind_name(Kind k);
Kind kind_from_name(const std::string& name);

/// Smoothness/convexity certificate carried by every instance.
/// mu_x < 0 encodes weak convexity in x.
struct Regularity {
  double L = 0.0;      // per-component gradient Lipschitz bound
  double L_avg = 0.0;  // root-mean-square gradient Lipschitz bound
  double mu_x = 0.0;
  double mu_y = 0.0;
};

struct Feasible {
  double Rx = kInf;
  double Ry = kInf;
  bool x_constrained() const { return Rx < kInf; }
  bool y_constrained() const { return Ry < kInf; }
};

struct Scale {
  double lambda = 1.0;
  double beta = 1.0;
};

/// Parameters of the underlying chain construction.  Which fields are
/// meaningful depends on the family; unused ones stay at their defaults.
struct BaseParams {
  int m = 0;           // chain length of the base construction
  double omega = 0.0;
  double zeta = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
  double alpha = 0.0;  // derived ratio used by scaled cases (0 when unused)
  double eps = 0.0;    // target tolerance baked into NC-type instances
  double Delta = 0.0;  // initial suboptimality budget for NC-type instances
};

struct FiniteSumInstance {
  Kind kind = Kind::BILINEAR_BASE;
  Family family = Family::BilinearChain;
  int n = 2;
  int dim_x = 0;
  int dim_y = 0;  // 0 for minimization instances
  Scale scale;
  BaseParams base;
  Feasible feasible;
  Regularity regularity;
  // Sampling probabilities, sorted ascending (component 1 is the rarest).
  std::vector<double> distribution;
  // Largest admissible prox weight; +inf for purely quadratic kinds.
  double gamma_max = kInf;
  // Wrapped minimization instance for separable compositions.
  std::shared_ptr<const FiniteSumInstance> inner;
  // Outer quadratic coefficient for separable compositions.
  double sep_coef = 0.0;

  bool is_minimization() const { return dim_y == 0; }
};

}  // namespace pifo

#endif
