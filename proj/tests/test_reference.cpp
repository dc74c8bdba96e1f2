#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "pifolab/brute.hpp"
#include "pifolab/instance.hpp"
#include "pifolab/linalg.hpp"
#include "pifolab/reference.hpp"
#include "pifolab/rng.hpp"

using namespace pifo;

TEST_CASE("scsc saddle point: closed form, feasibility, residual, tridiagonal cross-check") {
  const double L = 16.0, mux = 2.0, muy = 1.0;
  FiniteSumInstance inst = make_scsc(L, mux, muy, 1.0, 1.0, 3, 8);
  ReferencePoint rp = saddle_point_scsc(inst);
  CHECK(rp.x_star.norm() <= inst.feasible.Rx + 1e-12);
  CHECK(rp.y_star->norm() <= inst.feasible.Ry + 1e-12);
  const double scale = L * (1.0 + rp.x_star.norm() + rp.y_star->norm());
  CHECK(rp.residual <= 1e-8 * scale);

  // independent check: x* solves the tridiagonal stationarity system
  const int m = inst.base.m;
  const double xi = inst.scale.lambda / (inst.scale.beta * inst.scale.beta);
  const double ratio = mux * muy / (xi * xi);
  const double zeta = inst.base.zeta;
  std::vector<double> diag(m, 2.0 + ratio), sub(m - 1, -1.0), sup(m - 1, -1.0), rhs(m, 0.0);
  diag[0] = 1.0 + ratio;
  diag[m - 1] = zeta * zeta + 1.0 + ratio;
  rhs[0] = inst.scale.beta * muy / xi;
  Vec sol = solve_tridiagonal(diag, sub, sup, rhs);
  CHECK((sol - rp.x_star).norm() <= 1e-10 * std::max(1.0, rp.x_star.norm()));

  // q arithmetic from the proposition
  CHECK((3.0 - 1.0) / (3.0 + 1.0) == 0.5);
}

TEST_CASE("envelopes: cc values and restricted formula") {
  const double L = 4.0, Rx = 1.0, Ry = 1.0;
  const int n = 2, m = 5;
  FiniteSumInstance inst = make_cc(L, Rx, Ry, n, m);
  CHECK(phi_eval(inst, Vec::Zero(m)) == 0.0);
  Vec ystar = Vec::Constant(m, Ry / std::sqrt(double(m)));
  CHECK(psi_eval(inst, ystar) == doctest::Approx(0.0).epsilon(1e-12));
  // restricted psi-gap formula
  for (int k = 1; k <= m - 1; ++k) {
    const double want = -L * Rx / (2.0 * n) * Ry / std::sqrt(double(m) * (k + 1));
    const double got = brute::restricted_max_psi(inst, k, 40000);
    CHECK(got == doctest::Approx(want).epsilon(1e-5));
  }
}

TEST_CASE("envelopes agree with projected ascent/descent") {
  Rng rng(3);
  for (const FiniteSumInstance& inst :
       {make_scsc(16.0, 2.0, 1.0, 1.0, 1.0, 2, 4), make_csc(16.0, 1.0, 1.0, 1.0, 2, 4),
        make_cc(4.0, 1.0, 1.0, 2, 4)}) {
    for (int t = 0; t < 6; ++t) {
      Vec x(inst.dim_x), y(inst.dim_y);
      for (int j = 0; j < inst.dim_x; ++j) x[j] = rng.uniform(-0.5, 0.5);
      for (int j = 0; j < inst.dim_y; ++j) y[j] = rng.uniform(-0.5, 0.5);
      const double scale = std::max(1.0, std::abs(phi_eval(inst, x)));
      CHECK(std::abs(phi_eval(inst, x) - brute::phi_by_ascent(inst, x, 60000)) <=
            1e-6 * scale);
      const double pscale = std::max(1.0, std::abs(psi_eval(inst, y)));
      CHECK(std::abs(psi_eval(inst, y) - brute::psi_by_descent(inst, y, 60000)) <=
            1e-6 * pscale);
    }
  }
}

TEST_CASE("primal dual gap") {
  FiniteSumInstance inst = make_scsc(16.0, 2.0, 1.0, 1.0, 1.0, 3, 6);
  ReferencePoint rp = saddle_point_scsc(inst);
  CHECK(std::abs(primal_dual_gap(inst, rp.x_star, *rp.y_star)) <= 1e-8);
  Rng rng(5);
  for (int t = 0; t < 30; ++t) {
    Vec x(6), y(6);
    for (int j = 0; j < 6; ++j) {
      x[j] = rng.uniform(-0.4, 0.4);
      y[j] = rng.uniform(-0.4, 0.4);
    }
    CHECK(primal_dual_gap(inst, x, y) >= -1e-9);
  }
  // the 1-D strongly coupled instance keeps a large gap while x stays at 0
  FiniteSumInstance hs = make_one_d_scsc(4.0, 2, 1.0, 1.0);
  Vec y1(1);
  y1 << 0.3;
  CHECK(primal_dual_gap(hs, Vec::Zero(1), y1) >= 4.0 * 0.5 - 1e-12);
  // nonconvex instances are rejected
  FiniteSumInstance nc = make_ncsc(40.0, 5.0, 4.0, 50.0, 0.004, 2);
  CHECK_THROWS(primal_dual_gap(nc, Vec::Zero(nc.dim_x), Vec::Zero(nc.dim_y)));
}

TEST_CASE("nonconvex envelope gradient") {
  FiniteSumInstance inst = make_ncsc(40.0, 5.0, 4.0, 50.0, 0.004, 2);
  Rng rng(7);
  // finite differences of the closed-form envelope
  for (int t = 0; t < 20; ++t) {
    Vec x(inst.dim_x);
    for (int j = 0; j < inst.dim_x; ++j) x[j] = rng.uniform(-1.0, 1.0) * inst.scale.beta;
    Vec g = grad_phi(inst, x);
    Vec fd(inst.dim_x);
    for (int j = 0; j < inst.dim_x; ++j) {
      const double h = 1e-6 * std::max(1.0, std::abs(x[j]));
      Vec xp = x, xm = x;
      xp[j] += h;
      xm[j] -= h;
      fd[j] = (phi_eval(inst, xp) - phi_eval(inst, xm)) / (2.0 * h);
    }
    CHECK((g - fd).norm() <= 1e-5 * std::max(1.0, g.norm()));
  }
  // stationarity floor on the second-to-last subspace
  const int M = inst.base.m - 2;
  const double floor_bound = brute::min_grad_phi_norm(inst, M, 4, 300, rng);
  CHECK(floor_bound >= 9.0 * inst.base.eps * (1.0 - 1e-6));
  // a numerically located stationary point has a small envelope gradient
  Vec x = Vec::Zero(inst.dim_x);
  for (int it = 0; it < 60000; ++it) x -= (0.5 / inst.regularity.L) * grad_phi(inst, x);
  CHECK(grad_phi(inst, x).norm() <= 1e-6 * inst.regularity.L * inst.scale.beta + 1e-8);
}

TEST_CASE("restricted gaps dominate or match brute force") {
  // exact equality for the convex minimization family
  FiniteSumInstance c = make_c(8.0, 1.0, 3, 6);
  for (int k = 1; k <= 5; ++k) {
    const double brute_gap =
        brute::restricted_min_value(c, k, 100000) - minimizer_closed_form(c).value;
    CHECK(brute_gap == doctest::Approx(restricted_gap(c, k)).epsilon(1e-6));
  }
  // lower bounds elsewhere
  FiniteSumInstance sc = make_sc(16.0, 1.0, 1.0, 3, 6);
  for (int k = 1; k <= 5; ++k) {
    const double brute_gap =
        brute::restricted_min_value(sc, k, 100000) - minimizer_closed_form(sc).value;
    CHECK(brute_gap >= restricted_gap(sc, k) - 1e-6);
  }
  FiniteSumInstance cc = make_cc(4.0, 1.0, 1.0, 2, 5);
  // k = m-1 plugs into the printed formula
  CHECK(restricted_gap(cc, 4) ==
        doctest::Approx(4.0 / (2.0 * 2 * std::sqrt(5.0 * 5.0))).epsilon(1e-14));
  CHECK_THROWS(restricted_gap(cc, 0));
  CHECK_THROWS(restricted_gap(cc, 5));
}

TEST_CASE("lower bound curves") {
  LowerBoundQuery q;
  q.row = CurveCase::SCSC;
  q.params.n = 4;
  q.params.L = 16.0;
  q.params.mu_x = 1.0;
  q.params.mu_y = 1.0;
  q.params.Rx = 100.0;  // keep the eps precondition satisfiable
  q.params.Ry = 100.0;
  q.eps = 1e-3;
  const double v = lower_bound_curve(q);
  CHECK(v == doctest::Approx(std::sqrt(20.0 * 20.0) * std::log(1e3)).epsilon(1e-12));
  CHECK(v == doctest::Approx(138.155).epsilon(1e-3));
  // invalid eps is flagged with the printed threshold
  q.eps = 1e9;
  std::string why;
  CHECK(!curve_precondition(q, &why));
  CHECK(why.find("1600") != std::string::npos);
  CHECK_THROWS_AS(lower_bound_curve(q), std::domain_error);
  // sqrt(n) scaling of the average-smooth cc row between n = 4 and n = 16
  LowerBoundQuery a;
  a.row = CurveCase::CC_AVG;
  a.params.L_prime = 2.0;
  a.params.Rx = a.params.Ry = 1.0;
  a.eps = 1e-4;
  a.params.n = 4;
  const double t4 = std::sqrt(4.0) * 2.0 / 1e-4;
  a.params.n = 16;
  const double t16 = std::sqrt(16.0) * 2.0 / 1e-4;
  CHECK(t16 / t4 == doctest::Approx(2.0));
}

TEST_CASE("dimension and budget selection") {
  // N = n (M+1) / 4
  TheoremParams p;
  p.n = 4;
  p.L = 16.0;
  p.mu_x = 1.0;
  p.Rx = 1.0;
  Selection s = select_m_N(Kind::SC, p, 1e-4);
  CHECK(s.N == 4 * (s.M + 1) / 4);
  CHECK(s.M >= 1);
  CHECK(s.M < s.m);
  // floor arithmetic of the scsc dimension formula: alpha = 4 and
  // max{mu_x Rx^2, mu_y Ry^2} / (9 eps) = e^4 give m = floor(4) + 1 = 5
  const double alpha = 4.0;
  const double m_formula = std::floor(alpha / 4.0 * std::log(std::exp(4.0))) + 1;
  CHECK(m_formula == 5.0);
  // the generic budget identity
  CHECK(static_cast<long long>(std::floor(4.0 * (7 + 1) / 4.0)) == 8);
}

TEST_CASE("suboptimality and criterion dispatch") {
  FiniteSumInstance sc = make_sc(16.0, 1.0, 1.0, 3, 6);
  CHECK(suboptimality(sc, minimizer_closed_form(sc).x_star) <= 1e-10);
  CHECK(criterion_value(sc, Vec::Zero(6), Vec()) ==
        doctest::Approx(suboptimality(sc, Vec::Zero(6))));
  FiniteSumInstance nc = make_nc(30.0, 3.0, 100.0, 0.01, 2);
  CHECK(criterion_value(nc, Vec::Zero(nc.dim_x), Vec()) ==
        doctest::Approx(aggregate_grad(nc, Vec::Zero(nc.dim_x)).norm()));
}
