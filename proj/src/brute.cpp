#include "pifolab/brute.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "pifolab/chain.hpp"
#include "pifolab/gamma.hpp"
#include "pifolab/linalg.hpp"
#include "pifolab/reference.hpp"

namespace pifo {
namespace brute {

namespace {

Vec random_vec(int d, double box, Rng& rng) {
  Vec v(d);
  for (int j = 0; j < d; ++j) v[j] = rng.uniform(-box, box);
  return v;
}

// Gradient of the saddle-prox objective in (u, v):
//   f_i(u, v) + ||x-u||^2 / (2 gamma) - ||y-v||^2 / (2 gamma),
// ascent direction flipped so a plain descent step works on both blocks.
void prox_obj_grad(const FiniteSumInstance& inst, int i, const Vec& x, const Vec& y,
                   double gamma, const Vec& u, const Vec& v, Vec& gu, Vec& gv) {
  ComponentEval e = component_eval(inst, i, u, v);
  gu = e.grad_x + (u - x) / gamma;
  if (inst.dim_y > 0) gv = -(e.grad_y - (v - y) / gamma);
}

}  // namespace

std::pair<Vec, Vec> fd_gradient(const FiniteSumInstance& inst, int i, const Vec& x,
                                const Vec& y, double h) {
  Vec gx(inst.dim_x), gy(inst.dim_y);
  Vec xp = x, xm = x;
  for (int j = 0; j < inst.dim_x; ++j) {
    const double hj = h * std::max(1.0, std::abs(x[j]));
    xp[j] = x[j] + hj;
    xm[j] = x[j] - hj;
    gx[j] = (component_value(inst, i, xp, y) - component_value(inst, i, xm, y)) / (2.0 * hj);
    xp[j] = x[j];
    xm[j] = x[j];
  }
  Vec yp = y, ym = y;
  for (int j = 0; j < inst.dim_y; ++j) {
    const double hj = h * std::max(1.0, std::abs(y[j]));
    yp[j] = y[j] + hj;
    ym[j] = y[j] - hj;
    gy[j] = (component_value(inst, i, x, yp) - component_value(inst, i, x, ym)) / (2.0 * hj);
    yp[j] = y[j];
    ym[j] = y[j];
  }
  return {gx, gy};
}

std::pair<Vec, Vec> prox_saddle(const FiniteSumInstance& inst, int i, const Vec& x,
                                const Vec& y, double gamma, int iters) {
  const int dx = inst.dim_x, dy = inst.dim_y;
  if (dy == 0) throw std::invalid_argument("brute::prox_saddle: saddle instance required");
  const bool smooth_quadratic =
      inst.family == Family::BilinearChain || inst.family == Family::Scalar1d ||
      (inst.family == Family::Separable && inst.inner->base.c2 == 0.0);
  if (smooth_quadratic) {
    // dense KKT system: gradients are affine, assemble by probing columns
    Mat K(dx + dy, dx + dy);
    Vec z0 = Vec::Zero(dx + dy);
    auto foc = [&](const Vec& z) {
      Vec u = z.head(dx), v = z.tail(dy);
      ComponentEval e = component_eval(inst, i, u, v);
      Vec r(dx + dy);
      r.head(dx) = e.grad_x + (u - x) / gamma;
      r.tail(dy) = e.grad_y - (v - y) / gamma;
      return r;
    };
    const Vec r0 = foc(z0);
    for (int c = 0; c < dx + dy; ++c) {
      Vec z = Vec::Zero(dx + dy);
      z[c] = 1.0;
      K.col(c) = foc(z) - r0;
    }
    Vec z = K.fullPivLu().solve(-r0);
    return {z.head(dx), z.tail(dy)};
  }
  // potential-coupled kinds: eliminate v (affine given u), then plain
  // gradient descent on the strongly convex reduced objective
  const double beta = inst.scale.beta;
  const double gb = gamma * inst.scale.lambda / (beta * beta);
  const double aa = inst.base.c1 + 1.0 / gb;  // y-block diagonal (base scale)
  auto v_of_u = [&](const Vec& u) {
    // base-variable elimination, then scale back
    Vec ub = u / beta, yb = y / beta;
    const int m = inst.base.m;
    Vec yr = yb / gb;
    if (i == 1) yr[0] -= double(inst.n);
    for (int l = (i - 1) % inst.n; l < m; l += inst.n) {
      const double rd = (l == 0) ? inst.base.omega * ub[0] : ub[l - 1] - ub[l];
      yr[l] += double(inst.n) * rd;
    }
    return Vec(beta * (yr / aa));
  };
  Vec u = x;
  const double Lsub = inst.regularity.L + 2.0 / gamma;
  const double step = 1.0 / Lsub;
  Vec gu(dx), gv(dy);
  for (int it = 0; it < iters; ++it) {
    Vec v = v_of_u(u);
    prox_obj_grad(inst, i, x, y, gamma, u, v, gu, gv);
    u -= step * gu;
    if (gu.norm() < 1e-13 * std::max(1.0, u.norm())) break;
  }
  return {u, v_of_u(u)};
}

Vec prox_min(const FiniteSumInstance& inst, int i, const Vec& x, double gamma, int iters) {
  const int dx = inst.dim_x;
  const bool quadratic = inst.base.c2 == 0.0 || inst.family == Family::Scalar1d;
  if (quadratic) {
    Mat K(dx, dx);
    auto foc = [&](const Vec& u) {
      ComponentEval e = component_eval(inst, i, u, Vec());
      return Vec(e.grad_x + (u - x) / gamma);
    };
    const Vec r0 = foc(Vec::Zero(dx));
    for (int c = 0; c < dx; ++c) {
      Vec z = Vec::Zero(dx);
      z[c] = 1.0;
      K.col(c) = foc(z) - r0;
    }
    return K.fullPivLu().solve(-r0);
  }
  Vec u = x;
  const double step = 1.0 / (inst.regularity.L + 2.0 / gamma);
  for (int it = 0; it < iters; ++it) {
    ComponentEval e = component_eval(inst, i, u, Vec());
    Vec g = e.grad_x + (u - x) / gamma;
    u -= step * g;
    if (g.norm() < 1e-13 * std::max(1.0, u.norm())) break;
  }
  return u;
}

std::pair<Vec, Vec> prox_saddle_abr(const FiniteSumInstance& inst, int i, const Vec& x,
                                    const Vec& y, double gamma, int iters) {
  if (inst.family != Family::BilinearChain)
    throw std::invalid_argument("prox_saddle_abr: bilinear kinds only");
  const double beta = inst.scale.beta;
  const double gb = gamma * inst.scale.lambda / (beta * beta);
  const BaseParams& bp = inst.base;
  const int m = bp.m, n = inst.n;
  const double a = bp.c1 + 1.0 / gb;
  const double dyc = bp.c2 + 1.0 / gb;
  Vec xb = x / beta, yb = y / beta;
  Vec rx = xb / gb;
  if (i == 1) rx[0] += double(n);
  Vec u = Vec::Zero(m), v = Vec::Zero(m);
  for (int it = 0; it < iters; ++it) {
    // u <- argmin given v; v <- argmax given u (both diagonal solves)
    Vec nu = rx;
    for (int l = (i - 1) % n; l <= m; l += n) {
      if (l == 0) continue;
      const double coef = -double(n) * v[l - 1];
      if (l < m) {
        nu[l - 1] += coef;
        nu[l] -= coef;
      } else {
        nu[m - 1] += coef * bp.zeta;
      }
    }
    nu /= a;
    Vec nv = yb / gb;
    for (int l = (i - 1) % n; l <= m; l += n) {
      if (l == 0) continue;
      const double rd = (l < m) ? nu[l - 1] - nu[l] : bp.zeta * nu[m - 1];
      nv[l - 1] += double(n) * rd;
    }
    nv /= dyc;
    u = nu;
    v = nv;
  }
  return {beta * u, beta * v};
}

double phi_by_ascent(const FiniteSumInstance& inst, const Vec& x, int iters) {
  if (inst.is_minimization()) return aggregate_value(inst, x);
  Vec y = Vec::Zero(inst.dim_y);
  const double L = std::max(inst.regularity.L, inst.regularity.mu_y);
  for (int it = 0; it < iters; ++it) {
    Vec gx, gy;
    aggregate_grad(inst, x, y, gx, gy);
    y += (1.0 / L) * gy;
    if (inst.feasible.y_constrained()) y = project_ball(y, inst.feasible.Ry);
  }
  return aggregate_value(inst, x, y);
}

double psi_by_descent(const FiniteSumInstance& inst, const Vec& y, int iters) {
  Vec x = Vec::Zero(inst.dim_x);
  const double L = std::max(inst.regularity.L, std::abs(inst.regularity.mu_x));
  for (int it = 0; it < iters; ++it) {
    Vec gx, gy;
    aggregate_grad(inst, x, y, gx, gy);
    x -= (1.0 / L) * gx;
    if (inst.feasible.x_constrained()) x = project_ball(x, inst.feasible.Rx);
  }
  return aggregate_value(inst, x, y);
}

namespace {

// Danskin gradients of the closed-form envelopes (the envelope values are
// independently validated against phi_by_ascent / psi_by_descent).
Vec envelope_phi_grad(const FiniteSumInstance& inst, const Vec& x) {
  Vec xx = x;
  const double h = 1e-7;
  Vec g(inst.dim_x);
  for (int j = 0; j < inst.dim_x; ++j) {
    const double hj = h * std::max(1.0, std::abs(x[j]));
    xx[j] = x[j] + hj;
    const double fp = phi_eval(inst, xx);
    xx[j] = x[j] - hj;
    const double fm = phi_eval(inst, xx);
    xx[j] = x[j];
    g[j] = (fp - fm) / (2.0 * hj);
  }
  return g;
}

Vec envelope_psi_grad(const FiniteSumInstance& inst, const Vec& y) {
  Vec yy = y;
  const double h = 1e-7;
  Vec g(inst.dim_y);
  for (int j = 0; j < inst.dim_y; ++j) {
    const double hj = h * std::max(1.0, std::abs(y[j]));
    yy[j] = y[j] + hj;
    const double fp = psi_eval(inst, yy);
    yy[j] = y[j] - hj;
    const double fm = psi_eval(inst, yy);
    yy[j] = y[j];
    g[j] = (fp - fm) / (2.0 * hj);
  }
  return g;
}

Vec project_span_ball(Vec v, int k, double R) {
  for (int j = k; j < v.size(); ++j) v[j] = 0.0;
  if (R < kInf) v = project_ball(v, R);
  return v;
}

}  // namespace

double restricted_min_phi(const FiniteSumInstance& inst, int k, int iters) {
  Vec x = Vec::Zero(inst.dim_x);
  const double L = std::max({inst.regularity.L, std::abs(inst.regularity.mu_x), 1e-9});
  double best = phi_eval(inst, x);
  for (int it = 0; it < iters; ++it) {
    const double step = 1.0 / (L * (1.0 + 1e-3 * it));  // diminishing for kinks
    Vec g = envelope_phi_grad(inst, x);
    x = project_span_ball(x - step * g, k, inst.feasible.Rx);
    if (it % 32 == 0) best = std::min(best, phi_eval(inst, x));
  }
  return std::min(best, phi_eval(inst, x));
}

double restricted_max_psi(const FiniteSumInstance& inst, int k, int iters) {
  Vec y = Vec::Zero(inst.dim_y);
  const double L = std::max({inst.regularity.L, inst.regularity.mu_y, 1e-9});
  double best = psi_eval(inst, y);
  for (int it = 0; it < iters; ++it) {
    const double step = 1.0 / (L * (1.0 + 1e-3 * it));
    Vec g = envelope_psi_grad(inst, y);
    y = project_span_ball(y + step * g, k, inst.feasible.Ry);
    if (it % 32 == 0) best = std::max(best, psi_eval(inst, y));
  }
  return std::max(best, psi_eval(inst, y));
}

double restricted_min_value(const FiniteSumInstance& inst, int k, int iters) {
  Vec x = Vec::Zero(inst.dim_x);
  const double L = inst.regularity.L;
  double best = aggregate_value(inst, x);
  for (int it = 0; it < iters; ++it) {
    Vec g = aggregate_grad(inst, x);
    x = project_span_ball(x - (1.0 / L) * g, k, inst.feasible.Rx);
    if (it % 64 == 0) best = std::min(best, aggregate_value(inst, x));
  }
  return std::min(best, aggregate_value(inst, x));
}

double global_min_estimate(const FiniteSumInstance& inst, int starts, int iters, Rng& rng) {
  double best = kInf;
  const double L = inst.regularity.L;
  const double box = 2.0 * std::max(1.0, inst.scale.beta);
  for (int s = 0; s < starts; ++s) {
    Vec x = (s == 0) ? Vec(Vec::Zero(inst.dim_x)) : random_vec(inst.dim_x, box, rng);
    for (int it = 0; it < iters; ++it) x -= (1.0 / L) * aggregate_grad(inst, x);
    best = std::min(best, aggregate_value(inst, x));
  }
  return best;
}

double min_grad_phi_norm(const FiniteSumInstance& inst, int k, int starts, int iters,
                         Rng& rng) {
  double best = kInf;
  const double box = 2.0 * std::max(1.0, inst.scale.beta);
  for (int s = 0; s < starts; ++s) {
    Vec x = (s == 0) ? Vec(Vec::Zero(inst.dim_x)) : random_vec(inst.dim_x, box, rng);
    for (int j = k; j < inst.dim_x; ++j) x[j] = 0.0;
    // minimize h(x) = 0.5 ||grad phi||^2 by finite-difference descent
    double cur = grad_phi(inst, x).squaredNorm() * 0.5;
    double step = 1e-2 / std::max(1.0, inst.regularity.L);
    for (int it = 0; it < iters; ++it) {
      Vec dir = Vec::Zero(inst.dim_x);
      const double h = 1e-6;
      for (int j = 0; j < k; ++j) {
        Vec xp = x;
        xp[j] += h;
        dir[j] = (grad_phi(inst, xp).squaredNorm() * 0.5 - cur) / h;
      }
      Vec trial = x - step * dir;
      for (int j = k; j < inst.dim_x; ++j) trial[j] = 0.0;
      const double tv = grad_phi(inst, trial).squaredNorm() * 0.5;
      if (tv < cur) {
        x = trial;
        cur = tv;
        step *= 1.2;
      } else {
        step *= 0.5;
        if (step < 1e-16) break;
      }
    }
    best = std::min(best, std::sqrt(2.0 * cur));
  }
  return best;
}

Mat hessian_xx(const FiniteSumInstance& inst, int i, const Vec& x, const Vec& y) {
  const int d = inst.dim_x;
  const double s = inst.scale.lambda / (inst.scale.beta * inst.scale.beta);
  Mat H = Mat::Zero(d, d);
  switch (inst.family) {
    case Family::BilinearChain:
      H = s * inst.base.c1 * Mat::Identity(d, d);
      break;
    case Family::NonconvexChain: {
      for (int j = 0; j + 1 < inst.base.m; ++j)
        H(j, j) = s * inst.base.c2 * inst.base.c3 * inst.base.c3 *
                  gamma_second(inst.base.c3 * x[j] / inst.scale.beta);
      break;
    }
    case Family::QuadChain: {
      const BaseParams& bp = inst.base;
      for (int l = (i - 1) % inst.n; l <= bp.m; l += inst.n) {
        if (l == 0) {
          H(0, 0) += s * inst.n * bp.omega * bp.omega;
        } else if (l == bp.m) {
          H(d - 1, d - 1) += s * inst.n * bp.zeta * bp.zeta;
        } else {
          H(l - 1, l - 1) += s * inst.n;
          H(l, l) += s * inst.n;
          H(l - 1, l) -= s * inst.n;
          H(l, l - 1) -= s * inst.n;
        }
      }
      H += s * bp.c1 * Mat::Identity(d, d);
      if (bp.c2 != 0.0)
        for (int j = 0; j + 1 < bp.m; ++j)
          H(j, j) += s * bp.c2 * gamma_second(x[j] / inst.scale.beta);
      break;
    }
    case Family::Separable: {
      if (inst.kind == Kind::SEP_CSC) return hessian_xx(*inst.inner, i, x, Vec());
      H = inst.sep_coef * Mat::Identity(d, d);
      break;
    }
    case Family::Scalar1d: {
      if (inst.kind == Kind::ONE_D_CC) H(0, 0) = 0.0;
      else H(0, 0) = inst.base.c1;
      break;
    }
  }
  (void)y;
  return H;
}

Mat hessian_yy(const FiniteSumInstance& inst, int i, const Vec& x, const Vec& y) {
  const int d = inst.dim_y;
  const double s = inst.scale.lambda / (inst.scale.beta * inst.scale.beta);
  Mat H = Mat::Zero(d, d);
  switch (inst.family) {
    case Family::BilinearChain:
      H = -s * inst.base.c2 * Mat::Identity(d, d);
      break;
    case Family::NonconvexChain:
      H = -s * inst.base.c1 * Mat::Identity(d, d);
      break;
    case Family::Separable: {
      if (inst.kind == Kind::SEP_CSC) return Mat(-inst.sep_coef * Mat::Identity(d, d));
      return Mat(-hessian_xx(*inst.inner, i, y, Vec()));
    }
    case Family::Scalar1d: {
      if (inst.kind == Kind::ONE_D_CC) H(0, 0) = 0.0;
      else H(0, 0) = -inst.base.c1;
      break;
    }
    default:
      throw std::invalid_argument("hessian_yy: minimization instance");
  }
  (void)x;
  (void)i;
  return H;
}

double sampled_lipschitz(const FiniteSumInstance& inst, int pairs, double box, Rng& rng) {
  double worst = 0.0;
  for (int t = 0; t < pairs; ++t) {
    const int i = rng.uniform_int(1, inst.n);
    Vec x1 = random_vec(inst.dim_x, box, rng), x2 = random_vec(inst.dim_x, box, rng);
    Vec y1 = random_vec(inst.dim_y, box, rng), y2 = random_vec(inst.dim_y, box, rng);
    ComponentEval e1 = component_eval(inst, i, x1, y1);
    ComponentEval e2 = component_eval(inst, i, x2, y2);
    double num = (e1.grad_x - e2.grad_x).squaredNorm();
    double den = (x1 - x2).squaredNorm() + (y1 - y2).squaredNorm();
    if (inst.dim_y > 0) num += (e1.grad_y - e2.grad_y).squaredNorm();
    if (den > 0) worst = std::max(worst, std::sqrt(num / den));
  }
  return worst;
}

double sampled_mean_square_lipschitz(const FiniteSumInstance& inst, int pairs, double box,
                                     Rng& rng) {
  double worst = 0.0;
  for (int t = 0; t < pairs; ++t) {
    Vec x1 = random_vec(inst.dim_x, box, rng), x2 = random_vec(inst.dim_x, box, rng);
    Vec y1 = random_vec(inst.dim_y, box, rng), y2 = random_vec(inst.dim_y, box, rng);
    const double den = (x1 - x2).squaredNorm() + (y1 - y2).squaredNorm();
    if (den == 0) continue;
    double acc = 0.0;
    for (int i = 1; i <= inst.n; ++i) {
      ComponentEval e1 = component_eval(inst, i, x1, y1);
      ComponentEval e2 = component_eval(inst, i, x2, y2);
      acc += (e1.grad_x - e2.grad_x).squaredNorm();
      if (inst.dim_y > 0) acc += (e1.grad_y - e2.grad_y).squaredNorm();
    }
    worst = std::max(worst, std::sqrt(acc / (inst.n * den)));
  }
  return worst;
}

}  // namespace brute
}  // namespace pifo
