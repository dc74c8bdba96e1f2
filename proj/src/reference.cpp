#include "pifolab/reference.hpp"

#include <cmath>
#include <stdexcept>

#include "pifolab/gamma.hpp"
#include "pifolab/linalg.hpp"

namespace pifo {

namespace {

// Row actions of the m x m lower block of the chain matrix (rows 1..m built
// with omega = 0): (Tx)_l = b_l' x.
Vec tilde_apply(const Vec& x, double zeta) {
  const int m = static_cast<int>(x.size());
  Vec w(m);
  for (int l = 1; l < m; ++l) w[l - 1] = x[l - 1] - x[l];
  w[m - 1] = zeta * x[m - 1];
  return w;
}

Vec tilde_apply_t(const Vec& y, double zeta) {
  const int m = static_cast<int>(y.size());
  Vec w = Vec::Zero(m);
  for (int l = 1; l < m; ++l) {
    w[l - 1] += y[l - 1];
    w[l] -= y[l - 1];
  }
  w[m - 1] += zeta * y[m - 1];
  return w;
}

// Row actions of the first m rows of the chain matrix (omega on row 0,
// zeta = 0): coordinate l+1 pairs with row l.
Vec hat_apply(const Vec& x, double omega) {
  const int m = static_cast<int>(x.size());
  Vec w(m);
  w[0] = omega * x[0];
  for (int l = 1; l < m; ++l) w[l] = x[l - 1] - x[l];
  return w;
}

Vec hat_apply_t(const Vec& y, double omega) {
  const int m = static_cast<int>(y.size());
  Vec w = Vec::Zero(m);
  w[0] += omega * y[0];
  for (int l = 1; l < m; ++l) {
    w[l - 1] += y[l];
    w[l] -= y[l];
  }
  return w;
}

double geometric_q(double alpha) { return (alpha - 1.0) / (alpha + 1.0); }

void require_kind(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

double inner_min_value(const FiniteSumInstance& inst) {
  return minimizer_closed_form(inst).value;
}

}  // namespace

ReferencePoint saddle_point_scsc(const FiniteSumInstance& inst) {
  require_kind(inst.kind == Kind::SCSC, "saddle_point_scsc: SCSC instance required");
  const int m = inst.base.m;
  const double alpha = inst.base.alpha;
  const double q = geometric_q(alpha);
  const double beta = inst.scale.beta;
  const double xi = inst.scale.lambda / (beta * beta);
  const double mu_y = inst.regularity.mu_y;
  ReferencePoint rp;
  rp.x_star = Vec(m);
  Vec y(m);
  double qp = q;
  const double cx = beta * mu_y / ((1.0 - q) * xi);
  for (int j = 0; j < m; ++j) {
    rp.x_star[j] = cx * qp;
    y[j] = beta * qp;
    qp *= q;
  }
  y[m - 1] = beta * std::sqrt((alpha + 1.0) / 2.0) * std::pow(q, m);
  rp.y_star = y;
  rp.value = aggregate_value(inst, rp.x_star, y);
  Vec gx, gy;
  aggregate_grad(inst, rp.x_star, y, gx, gy);
  rp.residual = std::sqrt(gx.squaredNorm() + gy.squaredNorm());
  return rp;
}

ReferencePoint minimizer_closed_form(const FiniteSumInstance& inst) {
  ReferencePoint rp;
  switch (inst.kind) {
    case Kind::SC: {
      const int m = inst.base.m;
      const double alpha = inst.base.alpha;
      const double q = geometric_q(alpha);
      const double R = inst.feasible.Rx;
      const double mu = inst.regularity.mu_x;
      const double c = 2.0 * R * std::sqrt(alpha) / (alpha - 1.0);
      rp.x_star = Vec(m);
      double qp = q;
      for (int j = 0; j < m; ++j) {
        rp.x_star[j] = c * qp;
        qp *= q;
      }
      rp.value = -mu * R * R * alpha / (alpha + 1.0);
      break;
    }
    case Kind::C: {
      const int m = inst.base.m;
      const double R = inst.feasible.Rx;
      const double L = inst.regularity.L;
      const double xi = 0.5 * std::sqrt(3.0) * R * L / std::pow(m + 1.0, 1.5);
      rp.x_star = Vec(m);
      for (int j = 0; j < m; ++j) rp.x_star[j] = 2.0 * xi / L * (m - j);
      rp.value = -double(m) * xi * xi / (inst.n * L);
      break;
    }
    case Kind::ONE_D_SC: {
      rp.x_star = Vec::Constant(1, inst.feasible.Rx);
      rp.value = -0.5 * inst.base.c1 * inst.feasible.Rx * inst.feasible.Rx;
      break;
    }
    default:
      throw std::invalid_argument("minimizer_closed_form: unsupported kind");
  }
  rp.residual = aggregate_grad(inst, rp.x_star).norm();
  return rp;
}

double phi_eval(const FiniteSumInstance& inst, const Vec& x) {
  if (inst.is_minimization()) return aggregate_value(inst, x);
  const double lambda = inst.scale.lambda, beta = inst.scale.beta;
  switch (inst.kind) {
    case Kind::SCSC: case Kind::CSC: case Kind::CC: case Kind::BILINEAR_BASE: {
      const double xi = lambda / (beta * beta);
      Vec c = xi * tilde_apply(x, inst.base.zeta);
      const double lin = (lambda / beta) * x[0];
      return 0.5 * inst.regularity.mu_x * x.squaredNorm() - lin +
             ball_max_quadratic(c, inst.regularity.mu_y, inst.feasible.Ry);
    }
    case Kind::NCSC: case Kind::NCSC_AVG: case Kind::NONCONVEX_BASE: {
      const double A = lambda / (beta * beta);
      Vec c = A * hat_apply(x, inst.base.omega);
      c[0] -= lambda / beta;
      double v = 0.5 * c.squaredNorm() / inst.regularity.mu_y;
      for (int j = 0; j + 1 < inst.base.m; ++j)
        v += lambda * inst.base.c2 * gamma_value(inst.base.c3 * x[j] / beta);
      return v;
    }
    case Kind::SEP_SCSC: case Kind::SEP_CSC_XQUAD:
      return 0.5 * inst.sep_coef * x.squaredNorm() - inner_min_value(*inst.inner);
    case Kind::SEP_CSC:
      return aggregate_value(*inst.inner, x);
    case Kind::ONE_D_SCSC: {
      const double L = inst.base.c1;
      return 0.5 * L * x[0] * x[0] - L * inst.feasible.Rx * x[0];
    }
    case Kind::ONE_D_CC: {
      const double L = inst.base.c1;
      return L * inst.feasible.Ry * std::abs(x[0] - inst.feasible.Rx);
    }
    default:
      throw std::invalid_argument("phi_eval: unsupported kind");
  }
}

double psi_eval(const FiniteSumInstance& inst, const Vec& y) {
  require_kind(!inst.is_minimization(), "psi_eval: saddle instance required");
  const double lambda = inst.scale.lambda, beta = inst.scale.beta;
  switch (inst.kind) {
    case Kind::SCSC: case Kind::CSC: case Kind::CC: case Kind::BILINEAR_BASE: {
      const double xi = lambda / (beta * beta);
      Vec c = xi * tilde_apply_t(y, inst.base.zeta);
      c[0] -= lambda / beta;
      return -0.5 * inst.regularity.mu_y * y.squaredNorm() -
             ball_max_quadratic(-c, inst.regularity.mu_x, inst.feasible.Rx);
    }
    case Kind::SEP_SCSC: case Kind::SEP_CSC_XQUAD:
      return -aggregate_value(*inst.inner, y);
    case Kind::SEP_CSC:
      return inner_min_value(*inst.inner) - 0.5 * inst.sep_coef * y.squaredNorm();
    case Kind::ONE_D_SCSC: {
      const double L = inst.base.c1, Rx = inst.feasible.Rx;
      return -0.5 * L * Rx * Rx - 0.5 * L * y[0] * y[0];
    }
    case Kind::ONE_D_CC: {
      const double L = inst.base.c1, Rx = inst.feasible.Rx;
      return -L * Rx * (std::abs(y[0]) + y[0]);
    }
    default:
      throw std::invalid_argument("psi_eval: unsupported kind (nonconvex in x?)");
  }
}

Vec grad_phi(const FiniteSumInstance& inst, const Vec& x) {
  if (inst.is_minimization()) return aggregate_grad(inst, x);
  switch (inst.kind) {
    case Kind::NCSC: case Kind::NCSC_AVG: case Kind::NONCONVEX_BASE: {
      const double lambda = inst.scale.lambda, beta = inst.scale.beta;
      const double A = lambda / (beta * beta);
      Vec c = A * hat_apply(x, inst.base.omega);
      c[0] -= lambda / beta;
      Vec g = (A / inst.regularity.mu_y) * hat_apply_t(c, inst.base.omega);
      for (int j = 0; j + 1 < inst.base.m; ++j)
        g[j] += lambda * inst.base.c2 * inst.base.c3 / beta *
                gamma_deriv(inst.base.c3 * x[j] / beta);
      return g;
    }
    default:
      throw std::invalid_argument("grad_phi: closed form only for nonconvex saddle kinds");
  }
}

double primal_dual_gap(const FiniteSumInstance& inst, const Vec& x, const Vec& y) {
  require_kind(!inst.is_minimization(), "primal_dual_gap: saddle instance required");
  require_kind(inst.regularity.mu_x >= 0.0,
               "primal_dual_gap: nonconvex instance (use grad_phi)");
  return phi_eval(inst, x) - psi_eval(inst, y);
}

double suboptimality(const FiniteSumInstance& inst, const Vec& x) {
  require_kind(inst.is_minimization(), "suboptimality: minimization instance required");
  require_kind(inst.regularity.mu_x >= 0.0, "suboptimality: nonconvex instance");
  return aggregate_value(inst, x) - minimizer_closed_form(inst).value;
}

double criterion_value(const FiniteSumInstance& inst, const Vec& x, const Vec& y) {
  if (inst.is_minimization()) {
    if (inst.regularity.mu_x < 0.0) return aggregate_grad(inst, x).norm();
    if (inst.kind == Kind::SC || inst.kind == Kind::C || inst.kind == Kind::ONE_D_SC)
      return suboptimality(inst, x);
    return aggregate_grad(inst, x).norm();  // base kinds: no reference minimum
  }
  if (inst.regularity.mu_x < 0.0) return grad_phi(inst, x).norm();
  // the gap needs both inner problems bounded; otherwise fall back to the
  // aggregate first-order residual
  const bool phi_ok = inst.regularity.mu_y > 0.0 || inst.feasible.y_constrained();
  const bool psi_ok = inst.regularity.mu_x > 0.0 || inst.feasible.x_constrained();
  if (phi_ok && psi_ok) return primal_dual_gap(inst, x, y);
  Vec gx, gy;
  aggregate_grad(inst, x, y, gx, gy);
  return std::sqrt(gx.squaredNorm() + gy.squaredNorm());
}

double restricted_gap(const FiniteSumInstance& inst, int k) {
  const int m = inst.base.m;
  if (k < 1 || k > m - 1) throw std::out_of_range("restricted_gap: need 1 <= k <= m-1");
  const double beta = inst.scale.beta;
  const double xi = inst.scale.lambda / (beta * beta);
  switch (inst.kind) {
    case Kind::SCSC: {
      const double alpha = inst.base.alpha;
      const double q = geometric_q(alpha);
      return beta * beta * xi * xi / ((alpha + 1.0) * inst.regularity.mu_x) *
             std::pow(q, 2 * k);
    }
    case Kind::CSC:
      return -0.5 * k * inst.regularity.mu_y * beta * beta +
             inst.feasible.Rx * beta * xi / std::sqrt(k + 1.0);
    case Kind::CC:
      return inst.regularity.L * inst.feasible.Rx * inst.feasible.Ry /
             (2.0 * inst.n * std::sqrt(double(m) * (k + 1)));
    case Kind::SC: {
      const double alpha = inst.base.alpha;
      const double q = geometric_q(alpha);
      const double R = inst.feasible.Rx;
      return inst.regularity.mu_x * R * R * alpha / (alpha + 1.0) * std::pow(q, 2 * k);
    }
    case Kind::C: {
      const double R = inst.feasible.Rx;
      const double L = inst.regularity.L;
      const double xic = 0.5 * std::sqrt(3.0) * R * L / std::pow(m + 1.0, 1.5);
      return xic * xic * (m - k) / (inst.n * L);
    }
    default:
      throw std::invalid_argument("restricted_gap: unsupported kind");
  }
}

// ---------------------------------------------------------------------------
// Curves and theorem selections
// ---------------------------------------------------------------------------

const char* curve_case_name(CurveCase c) {
  switch (c) {
    case CurveCase::SCSC: return "scsc";
    case CurveCase::CSC: return "csc";
    case CurveCase::CC: return "cc";
    case CurveCase::NCSC: return "ncsc";
    case CurveCase::SCSC_AVG: return "scsc_avg";
    case CurveCase::CSC_AVG: return "csc_avg";
    case CurveCase::CC_AVG: return "cc_avg";
    case CurveCase::NCSC_AVG: return "ncsc_avg";
  }
  return "unknown";
}

CurveCase curve_case_from_name(const std::string& name) {
  static const CurveCase all[] = {CurveCase::SCSC,     CurveCase::CSC,     CurveCase::CC,
                                  CurveCase::NCSC,     CurveCase::SCSC_AVG, CurveCase::CSC_AVG,
                                  CurveCase::CC_AVG,   CurveCase::NCSC_AVG};
  for (CurveCase c : all)
    if (name == curve_case_name(c)) return c;
  throw std::invalid_argument("unknown curve case: " + name);
}

namespace {

bool fail(std::string* why, const std::string& msg) {
  if (why) *why = msg;
  return false;
}

}  // namespace

bool curve_precondition(const LowerBoundQuery& q, std::string* why) {
  const TheoremParams& p = q.params;
  const double eps = q.eps;
  const double n = p.n;
  switch (q.row) {
    case CurveCase::SCSC: {
      const double kx = p.L / p.mu_x, ky = p.L / p.mu_y;
      if (!(kx >= 2.0 && ky >= 2.0)) return fail(why, "need L/mu_x >= 2 and L/mu_y >= 2");
      if (!(kx <= ky)) return fail(why, "need mu_x >= mu_y");
      const double cap = std::min({n * n * p.mu_x * p.Rx * p.Rx / (1600.0 * kx * ky),
                                   p.mu_y * p.Ry * p.Ry / 1600.0, p.L * p.Rx * p.Rx / 4.0});
      if (!(eps <= cap))
        return fail(why, "need eps <= min{n^2 mu_x Rx^2/(1600 kx ky), mu_y Ry^2/1600, L Rx^2/4}");
      return true;
    }
    case CurveCase::CSC: {
      if (!(p.L / p.mu_y >= 2.0)) return fail(why, "need L/mu_y >= 2");
      const double cap = std::min(p.L * p.Rx * p.Rx / 4.0, p.mu_y * p.Ry * p.Ry / 36.0);
      if (!(eps <= cap)) return fail(why, "need eps <= min{L Rx^2/4, mu_y Ry^2/36}");
      return true;
    }
    case CurveCase::CC: {
      const double cap = p.L / 4.0 * std::min(p.Rx * p.Rx, p.Ry * p.Ry);
      if (!(eps <= cap)) return fail(why, "need eps <= (L/4) min{Rx^2, Ry^2}");
      return true;
    }
    case CurveCase::NCSC: {
      const double alpha =
          std::min({1.0, 8.0 * (std::sqrt(3.0) + 1.0) * n * n * p.mu_x * p.mu_y /
                             (45.0 * p.L * p.L),
                    n * n * p.mu_y / (90.0 * p.L)});
      if (!(eps * eps <= p.Delta * p.L * p.L * alpha / (27216.0 * n * n * p.mu_y)))
        return fail(why, "need eps^2 <= Delta L^2 alpha / (27216 n^2 mu_y)");
      return true;
    }
    case CurveCase::SCSC_AVG: {
      if (p.n < 4) return fail(why, "need n >= 4");
      const double kx = p.L_prime / p.mu_x, ky = p.L_prime / p.mu_y;
      if (!(kx >= 2.0 && ky >= 2.0)) return fail(why, "need L'/mu >= 2 in both blocks");
      if (!(kx <= ky)) return fail(why, "need mu_x >= mu_y");
      const double cap = std::min({n * p.mu_x * p.Rx * p.Rx / (800.0 * kx * ky),
                                   p.mu_y * p.Ry * p.Ry / 1600.0,
                                   p.L_prime * p.Rx * p.Rx / 4.0});
      if (!(eps <= cap))
        return fail(why, "need eps <= min{n mu_x Rx^2/(800 kx' ky'), mu_y Ry^2/1600, L' Rx^2/4}");
      return true;
    }
    case CurveCase::CSC_AVG: {
      if (p.n < 4) return fail(why, "need n >= 4");
      if (!(p.L_prime / p.mu_y >= 2.0)) return fail(why, "need L'/mu_y >= 2");
      const double cap = std::min(p.L_prime * p.Rx * p.Rx / 4.0, p.mu_y * p.Ry * p.Ry / 36.0);
      if (!(eps <= cap)) return fail(why, "need eps <= min{L' Rx^2/4, mu_y Ry^2/36}");
      return true;
    }
    case CurveCase::CC_AVG: {
      const double cap = p.L_prime / 4.0 * std::min(p.Rx * p.Rx, p.Ry * p.Ry);
      if (!(eps <= cap)) return fail(why, "need eps <= (L'/4) min{Rx^2, Ry^2}");
      return true;
    }
    case CurveCase::NCSC_AVG: {
      const double alpha =
          std::min({1.0, 128.0 * (std::sqrt(3.0) + 1.0) * n * p.mu_x * p.mu_y /
                             (45.0 * p.L_prime * p.L_prime),
                    32.0 * n * p.mu_y / (135.0 * p.L_prime)});
      if (!(eps * eps <= p.Delta * p.L_prime * p.L_prime * alpha / (435456.0 * n * p.mu_y)))
        return fail(why, "need eps^2 <= Delta L'^2 alpha / (435456 n mu_y)");
      return true;
    }
  }
  return fail(why, "unknown curve case");
}

double lower_bound_curve(const LowerBoundQuery& q) {
  std::string why;
  if (!curve_precondition(q, &why)) throw std::domain_error("lower_bound_curve: " + why);
  const TheoremParams& p = q.params;
  const double n = p.n;
  const double log_term = std::log(1.0 / q.eps);
  switch (q.row) {
    case CurveCase::SCSC: {
      const double kx = p.L / p.mu_x, ky = p.L / p.mu_y;
      return std::sqrt((n + kx) * (n + ky)) * log_term;
    }
    case CurveCase::CSC:
      return n + p.Rx * std::sqrt(n * p.L / q.eps) + p.Rx * p.L / std::sqrt(p.mu_y * q.eps) +
             std::sqrt(n * p.L / p.mu_y) * log_term;
    case CurveCase::CC:
      return n + p.L * p.Rx * p.Ry / q.eps + (p.Rx + p.Ry) * std::sqrt(n * p.L / q.eps);
    case CurveCase::NCSC:
      return n + p.Delta * p.L / (q.eps * q.eps) *
                     std::min(std::sqrt(p.L / p.mu_y), std::sqrt(p.mu_x / p.mu_y));
    case CurveCase::SCSC_AVG: {
      const double kx = p.L_prime / p.mu_x, ky = p.L_prime / p.mu_y;
      const double rn = std::sqrt(n);
      return rn * std::sqrt((rn + kx) * (rn + ky)) * log_term;
    }
    case CurveCase::CSC_AVG:
      return n + p.Rx * std::pow(n, 0.75) * std::sqrt(p.L_prime / q.eps) +
             std::sqrt(n) * p.Rx * p.L_prime / std::sqrt(p.mu_y * q.eps) +
             std::pow(n, 0.75) * std::sqrt(p.L_prime / p.mu_y) * log_term;
    case CurveCase::CC_AVG:
      return n + std::sqrt(n) * p.L_prime * p.Rx * p.Ry / q.eps +
             (p.Rx + p.Ry) * std::pow(n, 0.75) * std::sqrt(p.L_prime / q.eps);
    case CurveCase::NCSC_AVG:
      return n + p.Delta * std::sqrt(n) * p.L_prime / (q.eps * q.eps) *
                     std::min(std::sqrt(p.L_prime / p.mu_y), std::sqrt(p.mu_x / p.mu_y));
  }
  throw std::logic_error("lower_bound_curve: unknown case");
}

Selection select_m_N(Kind kind, const TheoremParams& p, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("select_m_N: eps must be positive");
  Selection s;
  const double n = p.n;
  switch (kind) {
    case Kind::SC: {
      const double kappa = p.L / p.mu_x;
      const double alpha = std::sqrt(2.0 * (kappa - 1.0) / n + 1.0);
      const double q = geometric_q(alpha);
      const double R = p.Rx;
      if (!(eps <= p.mu_x * R * R / 18.0 * q * q))
        throw std::domain_error("select_m_N(SC): need eps <= (mu R^2/18) q^2");
      const double bar = p.mu_x * R * R * alpha / (alpha + 1.0);
      s.m = static_cast<int>(std::floor(alpha / 4.0 *
                                        std::log(p.mu_x * R * R / (9.0 * eps)))) + 1;
      s.M = static_cast<int>(std::floor(std::log(9.0 * eps / bar) / (2.0 * std::log(q))));
      break;
    }
    case Kind::SCSC: {
      const double kx = p.L / p.mu_x, ky = p.L / p.mu_y;
      const double alpha = std::sqrt((kx - 2.0 / kx) * ky / (n * n) + 1.0);
      const double q = geometric_q(alpha);
      const double xi = std::sqrt(p.L * p.L - 2.0 * p.mu_x * p.mu_x) / (2.0 * n);
      const double beta =
          std::min({2.0 * n * p.Rx * std::sqrt(alpha / (kx * kx - 2.0)),
                    2.0 * n * p.Rx / (alpha + 1.0) * std::sqrt(2.0 * alpha / (kx * kx - 2.0)),
                    std::sqrt(2.0 * alpha) * p.Ry / (alpha - 1.0)});
      const double lead = beta * beta * xi * xi / ((alpha + 1.0) * p.mu_x);
      if (!(9.0 * eps <= lead * q * q))
        throw std::domain_error("select_m_N(SCSC): eps too large for M >= 1");
      s.m = static_cast<int>(std::floor(
                alpha / 4.0 *
                std::log(std::max(p.mu_x * p.Rx * p.Rx, p.mu_y * p.Ry * p.Ry) / (9.0 * eps)))) +
            1;
      s.M = static_cast<int>(std::floor(std::log(9.0 * eps / lead) / (2.0 * std::log(q))));
      break;
    }
    case Kind::C: {
      if (!(eps <= p.Rx * p.Rx * p.L / (384.0 * n)))
        throw std::domain_error("select_m_N(C): need eps <= R^2 L / (384 n)");
      s.m = static_cast<int>(std::floor(std::sqrt(p.Rx * p.Rx * p.L / (24.0 * n * eps)))) - 1;
      s.M = (s.m - 1) / 2;
      break;
    }
    case Kind::CSC: {
      if (!(eps <= std::min(p.L * p.L * p.Rx * p.Rx / (2592.0 * n * n * p.mu_y),
                            p.mu_y * p.Ry * p.Ry / 36.0)))
        throw std::domain_error(
            "select_m_N(CSC): need eps <= min{L^2 Rx^2/(2592 n^2 mu_y), mu_y Ry^2/36}");
      s.m = static_cast<int>(std::floor(
                p.Rx / (6.0 * n) *
                std::sqrt((p.L * p.L - 2.0 * p.mu_y * p.mu_y) / (p.mu_y * eps)))) -
            2;
      s.M = s.m / 2;
      break;
    }
    case Kind::CC: {
      if (!(eps <= p.L * p.Rx * p.Ry / (36.0 * std::sqrt(2.0) * n)))
        throw std::domain_error("select_m_N(CC): need eps <= L Rx Ry / (36 sqrt(2) n)");
      s.m = static_cast<int>(
                std::floor(p.L * p.Rx * p.Ry / (9.0 * std::sqrt(2.0) * n * eps))) -
            1;
      s.M = (s.m - 1) / 2;
      break;
    }
    case Kind::NC: {
      const double alpha = std::min(
          {1.0, (std::sqrt(3.0) + 1.0) * n * p.mu_x / (30.0 * p.L), n / 180.0});
      if (!(eps * eps <= p.Delta * p.L * alpha / (81648.0 * n)))
        throw std::domain_error("select_m_N(NC): need eps^2 <= Delta L alpha / (81648 n)");
      s.m = static_cast<int>(
          std::floor(p.Delta * p.L * std::sqrt(alpha) / (40824.0 * n * eps * eps)));
      s.M = s.m - 1;
      s.N = static_cast<long long>(std::floor(n * s.m / 4.0));
      return s;
    }
    case Kind::NC_AVG: {
      const double rn = std::sqrt(n);
      const double alpha =
          std::min({1.0, 8.0 * (std::sqrt(3.0) + 1.0) * rn * p.mu_x / (45.0 * p.L_prime),
                    std::sqrt(n / 270.0)});
      if (!(eps * eps <= p.Delta * p.L_prime * alpha / (435456.0 * rn)))
        throw std::domain_error("select_m_N(NC_AVG): eps too large");
      s.m = static_cast<int>(
          std::floor(p.Delta * p.L_prime * std::sqrt(alpha) / (217728.0 * rn * eps * eps)));
      s.M = s.m - 1;
      s.N = static_cast<long long>(std::floor(n * s.m / 4.0));
      return s;
    }
    case Kind::NCSC: {
      const double alpha =
          std::min({1.0, n * n * p.mu_y / (90.0 * p.L),
                    8.0 * (std::sqrt(3.0) + 1.0) * n * n * p.mu_x * p.mu_y / (45.0 * p.L * p.L)});
      if (!(eps * eps <= p.Delta * p.L * p.L * alpha / (435456.0 * n * n * p.mu_y)))
        throw std::domain_error("select_m_N(NCSC): eps too large");
      s.m = static_cast<int>(std::floor(p.Delta * p.L * p.L * std::sqrt(alpha) /
                                        (217728.0 * n * n * eps * eps * p.mu_y)));
      s.M = s.m - 1;
      s.N = static_cast<long long>(std::floor(n * s.m / 4.0));
      return s;
    }
    case Kind::NCSC_AVG: {
      const double alpha =
          std::min({1.0, 32.0 * n * p.mu_y / (135.0 * p.L_prime),
                    128.0 * (std::sqrt(3.0) + 1.0) * n * p.mu_x * p.mu_y /
                        (45.0 * p.L_prime * p.L_prime)});
      if (!(eps * eps <= p.Delta * p.L_prime * p.L_prime * alpha / (6967296.0 * n * p.mu_y)))
        throw std::domain_error("select_m_N(NCSC_AVG): eps too large");
      s.m = static_cast<int>(std::floor(p.Delta * p.L_prime * p.L_prime * std::sqrt(alpha) /
                                        (3483648.0 * n * eps * eps * p.mu_y)));
      s.M = s.m - 1;
      s.N = static_cast<long long>(std::floor(n * s.m / 4.0));
      return s;
    }
    default:
      throw std::invalid_argument("select_m_N: unsupported kind");
  }
  if (s.M < 1) s.M = 1;
  if (s.M >= s.m) s.m = s.M + 1;
  s.N = static_cast<long long>(std::floor(n * (s.M + 1) / 4.0));
  return s;
}

}  // namespace pifo
