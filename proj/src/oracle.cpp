#include "pifolab/oracle.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

#include "pifolab/gamma.hpp"
#include "pifolab/linalg.hpp"

namespace pifo {

namespace {

#ifndef NDEBUG
// Debug builds re-check the prox first-order conditions on every call.
void assert_prox_foc(const FiniteSumInstance& inst, int i, const Vec& x, const Vec& y,
                     double gamma, const Vec& u, const Vec& v) {
  ComponentEval at = component_eval(inst, i, u, inst.is_minimization() ? Vec() : v);
  double res = (at.grad_x + (u - x) / gamma).norm();
  if (!inst.is_minimization()) res = std::hypot(res, (at.grad_y - (v - y) / gamma).norm());
  const double tol = 1e-9 / gamma * std::max(1.0, x.norm() + y.norm());
  assert(res <= tol && "prox output violates the first-order conditions");
  (void)res;
  (void)tol;
}
#endif

}  // namespace

namespace {

void check_gamma(const FiniteSumInstance& inst, double gamma) {
  if (!(gamma > 0.0)) throw std::invalid_argument("pifo: gamma must be positive");
  if (gamma >= inst.gamma_max)
    throw std::invalid_argument("pifo: gamma exceeds the validity threshold of this instance");
}

double scalar_residual_scale(double A, double rhs) {
  return std::max({1.0, std::abs(rhs), std::abs(A)});
}

}  // namespace

double solve_scalar_prox_equation(double A, double coef, double scale, double rhs) {
  if (rhs == 0.0) return 0.0;  // unique root by construction
  if (coef == 0.0) return rhs / A;
  auto F = [&](double t) { return A * t + coef * gamma_deriv(scale * t); };
  auto dF = [&](double t) { return A + coef * scale * gamma_second(scale * t); };

  // Bracket the root: F is strictly increasing, so grow geometrically.
  double hi = std::max(1.0, std::abs(rhs) / A);
  double lo = -hi;
  for (int it = 0; it < 200 && F(hi) < rhs; ++it) hi *= 2.0;
  for (int it = 0; it < 200 && F(lo) > rhs; ++it) lo *= 2.0;

  const double tol = 1e-12 * scalar_residual_scale(A, rhs);
  double t = rhs / A;  // linear-part guess
  if (t < lo || t > hi) t = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double f = F(t) - rhs;
    if (std::abs(f) <= tol) return t;
    if (f > 0.0) hi = t; else lo = t;
    const double d = dF(t);
    double step = (d > 0.0) ? t - f / d : lo - 1.0;  // force bisection when flat
    if (!(step > lo && step < hi)) step = 0.5 * (lo + hi);
    t = step;
  }
  if (std::abs(F(t) - rhs) > 1e6 * tol)
    throw std::runtime_error("scalar prox equation: Newton/bisection failed to converge");
  return t;
}

namespace {

// Solve the 2x2 block
//   (A + s) t1 - s t2 + c1g * dGamma(scale * t1) = r1
//   -s t1 + (A + s) t2 + c2g * dGamma(scale * t2) = r2
// (c2g may be zero when the second coordinate carries no potential term).
void solve_pair_prox_equation(double A, double s, double c1g, double c2g, double scale,
                              double r1, double r2, double& t1, double& t2) {
  if (r1 == 0.0 && r2 == 0.0) {
    t1 = t2 = 0.0;  // unique root by construction
    return;
  }
  if (c1g == 0.0 && c2g == 0.0) {
    const double det = A * (A + 2.0 * s);
    t1 = ((A + s) * r1 + s * r2) / det;
    t2 = (s * r1 + (A + s) * r2) / det;
    return;
  }
  auto F1 = [&](double a, double b) {
    return (A + s) * a - s * b + (c1g != 0.0 ? c1g * gamma_deriv(scale * a) : 0.0);
  };
  auto F2 = [&](double a, double b) {
    return -s * a + (A + s) * b + (c2g != 0.0 ? c2g * gamma_deriv(scale * b) : 0.0);
  };
  const double tol =
      1e-12 * std::max({1.0, std::abs(r1), std::abs(r2), std::abs(A), std::abs(s)});
  t1 = 0.0;
  t2 = 0.0;
  double f1 = F1(t1, t2) - r1, f2 = F2(t1, t2) - r2;
  double merit = f1 * f1 + f2 * f2;
  for (int it = 0; it < 300; ++it) {
    if (std::abs(f1) <= tol && std::abs(f2) <= tol) return;
    const double j11 = (A + s) + (c1g != 0.0 ? c1g * scale * gamma_second(scale * t1) : 0.0);
    const double j22 = (A + s) + (c2g != 0.0 ? c2g * scale * gamma_second(scale * t2) : 0.0);
    const double det = j11 * j22 - s * s;
    double d1, d2;
    if (det > 1e-14 * (std::abs(j11 * j22) + s * s)) {
      d1 = -(j22 * f1 + s * f2) / det;
      d2 = -(s * f1 + j11 * f2) / det;
    } else {  // fall back to a Gauss-Seidel sweep of scalar solves
      d1 = solve_scalar_prox_equation(A + s, c1g, scale, r1 + s * t2) - t1;
      d2 = solve_scalar_prox_equation(A + s, c2g, scale, r2 + s * t1) - t2;
    }
    double step = 1.0;
    for (int ls = 0; ls < 60; ++ls) {
      const double n1 = t1 + step * d1, n2 = t2 + step * d2;
      const double g1 = F1(n1, n2) - r1, g2 = F2(n1, n2) - r2;
      const double new_merit = g1 * g1 + g2 * g2;
      if (new_merit <= merit * (1.0 - 1e-4 * step) || new_merit < tol * tol) {
        t1 = n1;
        t2 = n2;
        f1 = g1;
        f2 = g2;
        merit = new_merit;
        break;
      }
      step *= 0.5;
      if (ls == 59) {  // stalled: Gauss-Seidel sweep (contraction under gamma validity)
        t1 = solve_scalar_prox_equation(A + s, c1g, scale, r1 + s * t2);
        t2 = solve_scalar_prox_equation(A + s, c2g, scale, r2 + s * t1);
        f1 = F1(t1, t2) - r1;
        f2 = F2(t1, t2) - r2;
        merit = f1 * f1 + f2 * f2;
      }
    }
  }
  if (merit > 1e12 * tol * tol)
    throw std::runtime_error("pair prox equation: Newton failed to converge");
}

// --- bilinear chain family: exact diagonal-block solve --------------------

std::pair<Vec, Vec> prox_tilde_base(const BaseParams& bp, int n, int i, const Vec& xb,
                                    const Vec& yb, double gb) {
  const int m = bp.m;
  const double a = bp.c1 + 1.0 / gb;
  const double dy = bp.c2 + 1.0 / gb;
  Vec rx = xb / gb;
  if (i == 1) rx[0] += double(n);
  // v solves the diagonal system D v = y/gb + (n/a) * coupling(rx);
  // inactive coordinates reduce to the plain shrinkage.
  Vec v(m);
  for (int j = 0; j < m; ++j) v[j] = yb[j] / gb / dy;
  for (int l = (i - 1) % n; l <= m; l += n) {
    if (l == 0) continue;
    const double wsq = (l < m) ? 2.0 : bp.zeta * bp.zeta;
    const double rd = (l < m) ? rx[l - 1] - rx[l] : bp.zeta * rx[m - 1];
    const double dl = dy + double(n) * n * wsq / a;
    v[l - 1] = (yb[l - 1] / gb + double(n) / a * rd) / dl;
  }
  Vec u = rx;
  for (int l = (i - 1) % n; l <= m; l += n) {
    if (l == 0) continue;
    const double coef = -double(n) * v[l - 1];
    if (l < m) {
      u[l - 1] += coef;
      u[l] -= coef;
    } else {
      u[m - 1] += coef * bp.zeta;
    }
  }
  u /= a;
  return {u, v};
}

// --- nonconvex chain family: per-block Newton solve -----------------------

std::pair<Vec, Vec> prox_hat_base(const BaseParams& bp, int n, int i, const Vec& xb,
                                  const Vec& yb, double gb) {
  const int m = bp.m;
  const double aa = bp.c1 + 1.0 / gb;
  const double s = double(n) * n / aa;
  Vec yr = yb / gb;
  if (i == 1) yr[0] -= double(n);
  // rhs of the reduced u-system
  Vec rhs = xb / gb;
  for (int l = (i - 1) % n; l < m; l += n) {
    if (l == 0) {
      rhs[0] -= double(n) / aa * bp.omega * yr[0];
    } else {
      const double c = double(n) / aa * yr[l];
      rhs[l - 1] -= c;
      rhs[l] += c;
    }
  }
  Vec u = Vec::Zero(m);
  std::vector<bool> handled(m, false);
  const double A0 = 1.0 / gb;
  for (int l = (i - 1) % n; l < m; l += n) {
    if (l == 0) {
      // lone coordinate 1 with an omega^2 diagonal boost
      const double cg = (m >= 2) ? bp.c2 * bp.c3 : 0.0;
      u[0] = solve_scalar_prox_equation(A0 + s * bp.omega * bp.omega, cg, bp.c3, rhs[0]);
      handled[0] = true;
    } else {
      const double c1g = bp.c2 * bp.c3;                    // coordinate l < m
      const double c2g = (l + 1 < m) ? bp.c2 * bp.c3 : 0;  // coordinate l+1
      double t1, t2;
      solve_pair_prox_equation(A0, s, c1g, c2g, bp.c3, rhs[l - 1], rhs[l], t1, t2);
      u[l - 1] = t1;
      u[l] = t2;
      handled[l - 1] = handled[l] = true;
    }
  }
  for (int j = 0; j < m; ++j) {
    if (handled[j]) continue;
    const double cg = (j + 1 < m) ? bp.c2 * bp.c3 : 0.0;
    u[j] = solve_scalar_prox_equation(A0, cg, bp.c3, rhs[j]);
  }
  Vec v = yr;
  for (int l = (i - 1) % n; l < m; l += n) {
    const double rd = (l == 0) ? bp.omega * u[0] : u[l - 1] - u[l];
    v[l] += double(n) * rd;
  }
  v /= aa;
  return {u, v};
}

// --- quadratic chain family (minimization) --------------------------------

Vec prox_quad_base(const BaseParams& bp, int n, int i, const Vec& xb, double gb) {
  const int m = bp.m;
  const double a0 = bp.c1 + 1.0 / gb;
  Vec rhs = xb / gb;
  if (i == 1) rhs[0] += bp.c3 * double(n);
  Vec u = Vec::Zero(m);
  std::vector<bool> handled(m, false);
  for (int l = (i - 1) % n; l <= m; l += n) {
    if (l == 0) {
      const double cg = (m >= 2) ? bp.c2 : 0.0;
      u[0] = solve_scalar_prox_equation(a0 + double(n) * bp.omega * bp.omega, cg, 1.0, rhs[0]);
      handled[0] = true;
    } else if (l == m) {
      u[m - 1] =
          solve_scalar_prox_equation(a0 + double(n) * bp.zeta * bp.zeta, 0.0, 1.0, rhs[m - 1]);
      handled[m - 1] = true;
    } else {
      const double c1g = bp.c2;                    // coordinate l carries the potential
      const double c2g = (l + 1 < m) ? bp.c2 : 0;  // last coordinate does not
      double t1, t2;
      solve_pair_prox_equation(a0, double(n), c1g, c2g, 1.0, rhs[l - 1], rhs[l], t1, t2);
      u[l - 1] = t1;
      u[l] = t2;
      handled[l - 1] = handled[l] = true;
    }
  }
  for (int j = 0; j < m; ++j) {
    if (handled[j]) continue;
    const double cg = (j + 1 < m) ? bp.c2 : 0.0;
    u[j] = solve_scalar_prox_equation(a0, cg, 1.0, rhs[j]);
  }
  return u;
}

}  // namespace

std::pair<Vec, Vec> prox_saddle(const FiniteSumInstance& inst, int i, const Vec& x,
                                const Vec& y, double gamma) {
  check_gamma(inst, gamma);
  if (inst.is_minimization())
    throw std::invalid_argument("prox_saddle: minimization instance (use prox_minimization)");
  const double beta = inst.scale.beta;
  const double gb = gamma * inst.scale.lambda / (beta * beta);
  switch (inst.family) {
    case Family::BilinearChain: {
      auto [u, v] = prox_tilde_base(inst.base, inst.n, i, x / beta, y / beta, gb);
      return {beta * u, beta * v};
    }
    case Family::NonconvexChain: {
      auto [u, v] = prox_hat_base(inst.base, inst.n, i, x / beta, y / beta, gb);
      return {beta * u, beta * v};
    }
    case Family::Separable: {
      if (inst.kind == Kind::SEP_CSC) {
        Vec u = prox_minimization(*inst.inner, i, x, gamma);
        Vec v = y / (1.0 + gamma * inst.sep_coef);
        return {u, v};
      }
      Vec u = x / (1.0 + gamma * inst.sep_coef);
      Vec v = prox_minimization(*inst.inner, i, y, gamma);
      return {u, v};
    }
    case Family::Scalar1d: {
      const double L = inst.base.c1, Rx = inst.feasible.Rx;
      Vec u(1), v(1);
      if (inst.kind == Kind::ONE_D_SCSC) {
        const double shift = (i == 1) ? gamma * inst.n * L * Rx : 0.0;
        u[0] = (x[0] + shift) / (1.0 + L * gamma);
        v[0] = y[0] / (1.0 + L * gamma);
      } else {  // ONE_D_CC
        const double lin = (i == 1) ? inst.n * L * Rx : 0.0;
        const double den = 1.0 + gamma * gamma * L * L;
        u[0] = (x[0] - gamma * L * y[0] + gamma * gamma * L * lin) / den;
        v[0] = y[0] + gamma * (L * u[0] - lin);
      }
      return {u, v};
    }
    default:
      throw std::logic_error("prox_saddle: unsupported family");
  }
}

Vec prox_minimization(const FiniteSumInstance& inst, int i, const Vec& x, double gamma) {
  check_gamma(inst, gamma);
  if (!inst.is_minimization())
    throw std::invalid_argument("prox_minimization: saddle instance (use prox_saddle)");
  switch (inst.family) {
    case Family::QuadChain: {
      const double beta = inst.scale.beta;
      const double gb = gamma * inst.scale.lambda / (beta * beta);
      return beta * prox_quad_base(inst.base, inst.n, i, x / beta, gb);
    }
    case Family::Scalar1d: {
      const double L = inst.base.c1, R = inst.feasible.Rx;
      Vec u(1);
      const double shift = (i == 1) ? gamma * inst.n * L * R : 0.0;
      u[0] = (x[0] + shift) / (1.0 + gamma * L);
      return u;
    }
    default:
      throw std::logic_error("prox_minimization: unsupported family");
  }
}

PifoResponse pifo_query(const FiniteSumInstance& inst, int i, const Vec& x, const Vec& y,
                  double gamma, QueryCounter& counter) {
  if (x.size() != inst.dim_x || y.size() != inst.dim_y)
    throw std::invalid_argument("pifo: dimension mismatch");
  PifoResponse r;
  ComponentEval e = component_eval(inst, i, x, y);
  r.value = e.value;
  r.grad_x = std::move(e.grad_x);
  r.grad_y = std::move(e.grad_y);
  if (inst.is_minimization()) {
    r.prox_x = prox_minimization(inst, i, x, gamma);
  } else {
    auto [u, v] = prox_saddle(inst, i, x, y, gamma);
    r.prox_x = std::move(u);
    r.prox_y = std::move(v);
  }
#ifndef NDEBUG
  assert_prox_foc(inst, i, x, y, gamma, r.prox_x, r.prox_y);
#endif
  r.proj_x = inst.feasible.x_constrained() ? project_ball(x, inst.feasible.Rx) : x;
  if (!inst.is_minimization())
    r.proj_y = inst.feasible.y_constrained() ? project_ball(y, inst.feasible.Ry) : y;
  counter.bump(i);
  return r;
}

}  // namespace pifo
