#include "pifolab/verify.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>

#include "pifolab/algorithms.hpp"
#include "pifolab/brute.hpp"
#include "pifolab/chain.hpp"
#include "pifolab/gamma.hpp"
#include "pifolab/linalg.hpp"
#include "pifolab/oracle.hpp"
#include "pifolab/reference.hpp"
#include "pifolab/zero_chain.hpp"

namespace pifo {

namespace {

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

Vec rand_vec(int d, double box, Rng& rng) {
  Vec v(d);
  for (int j = 0; j < d; ++j) v[j] = rng.uniform(-box, box);
  return v;
}

Vec rand_in_span(int d, int k, double box, Rng& rng) {
  Vec v = Vec::Zero(d);
  for (int j = 0; j < k; ++j) v[j] = rng.uniform(-box, box);
  return v;
}

double safe_gamma(const FiniteSumInstance& inst, Rng& rng) {
  double g = 1.0 / std::max(inst.regularity.L, 1e-9) * rng.uniform(0.2, 1.0);
  if (inst.gamma_max < kInf) g = std::min(g, inst.gamma_max * rng.uniform(0.1, 0.9));
  return g;
}

std::vector<FiniteSumInstance> standard_zoo() {
  std::vector<FiniteSumInstance> zoo;
  zoo.push_back(make_bilinear_base(8, 1.0, 0.5, 0.25, 3));
  zoo.push_back(make_nonconvex_base(8, 0.7, 0.5, 0.3, 0.9, 3));
  zoo.push_back(make_quad_base(8, 0.0, 1.0, 0.5, 0.0, 1.0, 3));
  zoo.push_back(make_quad_base(8, 0.7, 0.0, 0.0, 0.4, 0.6, 3));
  zoo.push_back(make_scsc(16.0, 2.0, 1.0, 1.0, 1.0, 3, 6));
  zoo.push_back(make_csc(16.0, 1.0, 1.0, 1.0, 3, 6));
  zoo.push_back(make_cc(4.0, 1.0, 1.0, 3, 6));
  zoo.push_back(make_ncsc(40.0, 5.0, 4.0, 50.0, 0.004, 2));
  zoo.push_back(make_sc(16.0, 1.0, 1.0, 3, 6));
  zoo.push_back(make_c(8.0, 1.0, 3, 6));
  zoo.push_back(make_nc(30.0, 3.0, 100.0, 0.01, 2));
  zoo.push_back(make_sep_scsc(16.0, 1.0, 1.0, 2.0, 2.0, 3, 5));
  zoo.push_back(make_sep_csc(16.0, 1.0, 2.0, 2.0, 3, 5));
  zoo.push_back(make_one_d_scsc(4.0, 3, 1.0, 1.0));
  zoo.push_back(make_one_d_cc(4.0, 3, 1.0, 1.0));
  zoo.push_back(make_one_d_sc(4.0, 1.0, 3));
  return zoo;
}

}  // namespace

VerifyResult verify_regularity(const FiniteSumInstance& inst, Rng& rng) {
  VerifyResult r{std::string("instances.regularity.") + kind_name(inst.kind), true, ""};
  const double box = 2.0 * std::max(1.0, inst.scale.beta);
  const double lip = brute::sampled_lipschitz(inst, 400, box, rng);
  const double cap = inst.regularity.L * (1.0 + 1e-9) + 1e-9;
  if (lip > cap) {
    r.pass = false;
    r.message = fmt("sampled Lipschitz %.6g exceeds certificate %.6g", lip, inst.regularity.L);
    return r;
  }
  const double avg = brute::sampled_mean_square_lipschitz(inst, 60, box, rng);
  const double acap = inst.regularity.L_avg * (1.0 + 1e-9) + 1e-9;
  if (avg > acap) {
    r.pass = false;
    r.message =
        fmt("sampled mean-square Lipschitz %.6g exceeds certificate %.6g", avg,
            inst.regularity.L_avg);
    return r;
  }
  r.message = fmt("lip %.4g / avg %.4g within certificates", lip, avg);
  return r;
}

VerifyResult verify_convex_concavity(const FiniteSumInstance& inst, Rng& rng) {
  VerifyResult r{std::string("instances.curvature.") + kind_name(inst.kind), true, ""};
  const double box = 2.0 * std::max(1.0, inst.scale.beta);
  double worst = 0.0;
  for (int t = 0; t < 8; ++t) {
    const int i = rng.uniform_int(1, inst.n);
    Vec x = rand_vec(inst.dim_x, box, rng);
    Vec y = rand_vec(inst.dim_y, box, rng);
    Mat Hxx = brute::hessian_xx(inst, i, x, y);
    Eigen::SelfAdjointEigenSolver<Mat> es(Hxx);
    worst = std::max(worst, inst.regularity.mu_x - es.eigenvalues().minCoeff());
    if (inst.dim_y > 0) {
      Mat Hyy = brute::hessian_yy(inst, i, x, y);
      Eigen::SelfAdjointEigenSolver<Mat> es2(-Hyy);
      worst = std::max(worst, inst.regularity.mu_y - es2.eigenvalues().minCoeff());
    }
  }
  r.pass = worst <= 1e-9;
  r.message = fmt("worst curvature deficit %.3g", worst);
  return r;
}

VerifyResult verify_aggregate_consistency(const FiniteSumInstance& inst, Rng& rng) {
  VerifyResult r{std::string("instances.aggregate.") + kind_name(inst.kind), true, ""};
  const double box = 2.0 * std::max(1.0, inst.scale.beta);
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    Vec x = rand_vec(inst.dim_x, box, rng);
    Vec y = rand_vec(inst.dim_y, box, rng);
    double mean = 0.0;
    for (int i = 1; i <= inst.n; ++i) mean += component_value(inst, i, x, y);
    mean /= inst.n;
    const double direct = aggregate_value(inst, x, y);
    worst = std::max(worst, std::abs(mean - direct) / std::max(1.0, std::abs(direct)));
  }
  r.pass = worst <= 1e-12;
  r.message = fmt("max relative mismatch %.3g", worst);
  return r;
}

VerifyResult verify_gradient_fd(const FiniteSumInstance& inst, Rng& rng) {
  VerifyResult r{std::string("oracle.gradient_fd.") + kind_name(inst.kind), true, ""};
  const double box = 1.5 * std::max(1.0, inst.scale.beta);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const int i = rng.uniform_int(1, inst.n);
    Vec x = rand_vec(inst.dim_x, box, rng);
    Vec y = rand_vec(inst.dim_y, box, rng);
    ComponentEval e = component_eval(inst, i, x, y);
    auto [fx, fy] = brute::fd_gradient(inst, i, x, y);
    double num = (fx - e.grad_x).squaredNorm();
    double den = e.grad_x.squaredNorm();
    if (inst.dim_y > 0) {
      num += (fy - e.grad_y).squaredNorm();
      den += e.grad_y.squaredNorm();
    }
    worst = std::max(worst, std::sqrt(num) / std::max(1.0, std::sqrt(den)));
  }
  r.pass = worst <= 1e-5;
  r.message = fmt("max relative gradient error %.3g", worst);
  return r;
}

VerifyResult verify_prox_optimality(const FiniteSumInstance& inst, Rng& rng) {
  VerifyResult r{std::string("oracle.prox_foc.") + kind_name(inst.kind), true, ""};
  const double box = 1.5 * std::max(1.0, inst.scale.beta);
  double worst = 0.0;
  QueryCounter counter;
  counter.reset(inst.n);
  for (int t = 0; t < 50; ++t) {
    const int i = rng.uniform_int(1, inst.n);
    Vec x = rand_vec(inst.dim_x, box, rng);
    Vec y = rand_vec(inst.dim_y, box, rng);
    const double gamma = safe_gamma(inst, rng);
    PifoResponse resp = pifo_query(inst, i, x, y, gamma, counter);
    ComponentEval at = component_eval(inst, i, resp.prox_x,
                                      inst.is_minimization() ? Vec() : resp.prox_y);
    double res = (at.grad_x + (resp.prox_x - x) / gamma).norm();
    if (!inst.is_minimization())
      res = std::hypot(res, (at.grad_y - (resp.prox_y - y) / gamma).norm());
    worst = std::max(worst, res * gamma);  // scaled by 1/(1/gamma)
  }
  r.pass = worst <= 1e-9 * std::max(1.0, box * inst.regularity.L);
  r.message = fmt("max scaled prox residual %.3g", worst);
  return r;
}

VerifyResult verify_jump(const FiniteSumInstance& inst, int points, Rng& rng) {
  VerifyResult r{std::string("zero_chain.jump.") + kind_name(inst.kind), true, ""};
  const double tol = jump_tolerance(inst);
  const ChainCase cc = chain_case_of(inst);
  const int m = inst.base.m;
  const double box = std::max(1.0, inst.scale.beta);
  for (int t = 0; t < points; ++t) {
    const int kmax = (cc == ChainCase::Nonconvex) ? m - 2 : m - 1;
    if (kmax < 0) break;
    const int k = rng.uniform_int(0, kmax);
    Vec x = rand_in_span(inst.dim_x, k, box, rng);
    Vec y;
    if (cc == ChainCase::Bilinear)
      y = rand_in_span(inst.dim_y, std::max(k - 1, 0), box, rng);
    else if (cc == ChainCase::Nonconvex)
      y = rand_in_span(inst.dim_y, k, box, rng);
    const int i = rng.uniform_int(1, inst.n);
    const double gamma = safe_gamma(inst, rng);
    JumpReport rep = check_jump(inst, x, y, i, gamma, tol);
    if (!rep.hypothesis_ok) continue;
    if (!rep.pass) {
      r.pass = false;
      r.message = fmt("off-subspace magnitude %.3g at k=%g", rep.off_subspace, double(rep.k));
      return r;
    }
  }
  r.message = "all sampled jumps stay in predicted subspaces";
  return r;
}

namespace {

VerifyResult check_core_chain(Rng& rng) {
  VerifyResult r{"core.chain", true, ""};
  for (int trial = 0; trial < 40; ++trial) {
    const int m = rng.uniform_int(2, 12);
    const int n = rng.uniform_int(2, 5);
    BMatrixSpec spec{m, rng.uniform(0.0, std::sqrt(2.0)), rng.uniform(0.0, std::sqrt(2.0))};
    for (int i = 1; i <= n; ++i) {
      auto cls = residue_class(m, n, i);
      for (std::size_t a = 0; a < cls.size(); ++a)
        for (std::size_t b = a + 1; b < cls.size(); ++b) {
          const double dot = row_b(cls[a], spec).dot(row_b(cls[b], spec));
          if (dot != 0.0) {
            r.pass = false;
            r.message = "rows within one residue class are not orthogonal";
            return r;
          }
        }
    }
    for (int l = 0; l <= m; ++l)
      if (row_sqnorm(l, spec) > 2.0 + 1e-12) {
        r.pass = false;
        r.message = "row squared norm above 2";
        return r;
      }
  }
  r.message = "class orthogonality and row norms hold";
  return r;
}

VerifyResult check_core_gamma(Rng& rng) {
  VerifyResult r{"core.gamma", true, ""};
  for (int t = 0; t < 4000; ++t) {
    const double a = rng.uniform(-10.0, 10.0), b = rng.uniform(-10.0, 10.0);
    if (std::abs(gamma_deriv(a) - gamma_deriv(b)) > kGammaSmoothness * std::abs(a - b) + 1e-9) {
      r.pass = false;
      r.message = "smoothness bound violated";
      return r;
    }
  }
  for (int t = 0; t <= 4000; ++t) {
    const double xx = -10.0 + 20.0 * t / 4000.0;
    if (gamma_second(xx) < kGammaWeakConvexity - 1e-9) {
      r.pass = false;
      r.message = fmt("second derivative %.6g below weak-convexity floor", gamma_second(xx));
      return r;
    }
  }
  // closed form vs Simpson quadrature of the printed integrand
  auto integrand = [](double t) { return 120.0 * t * t * (t - 1.0) / (1.0 + t * t); };
  for (int t = 0; t <= 40; ++t) {
    const double xx = -5.0 + 10.0 * t / 40.0;
    const int steps = 20000;
    const double h = (xx - 1.0) / steps;
    double acc = integrand(1.0) + integrand(xx);
    for (int s = 1; s < steps; ++s)
      acc += integrand(1.0 + s * h) * ((s % 2) ? 4.0 : 2.0);
    const double quad = acc * h / 3.0;
    if (std::abs(quad - gamma_value(xx)) > 1e-9 * std::max(1.0, std::abs(quad))) {
      r.pass = false;
      r.message = fmt("closed form differs from quadrature by %.3g",
                      std::abs(quad - gamma_value(xx)));
      return r;
    }
  }
  r.message = "smoothness, weak convexity and quadrature agreement hold";
  return r;
}

VerifyResult check_core_projection(Rng& rng) {
  VerifyResult r{"core.projection", true, ""};
  for (int t = 0; t < 200; ++t) {
    const int d = rng.uniform_int(1, 10);
    Vec v = rand_vec(d, 5.0, rng);
    const double R = rng.uniform(0.1, 3.0);
    Vec p = project_ball(v, R);
    if (p.norm() > R + 1e-12 || (project_ball(p, R) - p).norm() != 0.0) {
      r.pass = false;
      r.message = "projection output infeasible or not a fixed point";
      return r;
    }
  }
  r.message = "feasibility and idempotence hold";
  return r;
}

VerifyResult check_reference_points(Rng&) {
  VerifyResult r{"reference.points", true, ""};
  FiniteSumInstance scsc = make_scsc(16.0, 2.0, 1.0, 1.0, 1.0, 3, 8);
  ReferencePoint sp = saddle_point_scsc(scsc);
  const double scale = scsc.regularity.L * (1.0 + sp.x_star.norm() + sp.y_star->norm());
  if (sp.residual > 1e-8 * scale || sp.x_star.norm() > scsc.feasible.Rx + 1e-12 ||
      sp.y_star->norm() > scsc.feasible.Ry + 1e-12) {
    r.pass = false;
    r.message = fmt("saddle residual %.3g or infeasible", sp.residual);
    return r;
  }
  FiniteSumInstance sc = make_sc(16.0, 1.0, 1.0, 3, 8);
  ReferencePoint mp = minimizer_closed_form(sc);
  const double alpha = sc.base.alpha;
  const double want = -1.0 * alpha / (alpha + 1.0);
  if (std::abs(mp.value - want) > 1e-10 * std::abs(want) || mp.residual > 1e-8 * 16.0) {
    r.pass = false;
    r.message = fmt("sc minimizer value %.12g vs %.12g", mp.value, want);
    return r;
  }
  r.message = "closed-form points certified";
  return r;
}

VerifyResult check_geo(Rng& rng) {
  VerifyResult r{"zero_chain.geo", true, ""};
  for (int t = 0; t < 200; ++t) {
    const double p1 = rng.uniform(0.05, 1.0), p2 = rng.uniform(0.05, 1.0);
    const long long j = rng.uniform_int(1, 30);
    const double a = f2j_closed_form(p1, p2, j);
    const double b = geo_tail_exact({p1, p2}, j);
    if (std::abs(a - b) > 1e-12) {
      r.pass = false;
      r.message = fmt("closed form %.15g vs dp %.15g", a, b);
      return r;
    }
  }
  for (int m : {2, 4, 8}) {
    std::vector<double> p(m, 1.0 / m);
    auto rep = verify_geo_concentration(p, 0, rng);
    if (!rep.pass) {
      r.pass = false;
      r.message = fmt("concentration fails at m=%g (tail %.4g)", double(m), rep.tail);
      return r;
    }
  }
  r.message = "closed form matches dp; concentration floor holds";
  return r;
}

VerifyResult check_protocol(Rng&) {
  VerifyResult r{"algorithms.protocol", true, ""};
  FiniteSumInstance inst = make_scsc(16.0, 2.0, 1.0, 1.0, 1.0, 3, 6);
  for (const char* name : {"sgda", "svrg", "point_prox", "extragradient"}) {
    AlgorithmSpec spec;
    spec.name = name;
    spec.record_audit = true;
    StopRule stop;
    stop.max_queries = 60;
    Trace tr = run_algorithm(inst, spec, stop, 7);
    AuditReport rep = protocol_audit(tr, inst);
    if (!rep.pass) {
      r.pass = false;
      r.message = std::string(name) + " violates the span protocol";
      return r;
    }
  }
  r.message = "all shipped algorithms stay in the reachable span";
  return r;
}

}  // namespace

std::vector<VerifyResult> run_verification(const std::string& scope, std::uint64_t seed) {
  std::vector<VerifyResult> out;
  auto want = [&](const std::string& name) {
    return scope.empty() || name.rfind(scope, 0) == 0;
  };
  Rng rng = Rng::stream(seed, 1);
  auto maybe = [&](const std::string& name, auto&& fn) {
    if (want(name)) out.push_back(fn());
  };

  maybe("core.chain", [&] { return check_core_chain(rng); });
  maybe("core.gamma", [&] { return check_core_gamma(rng); });
  maybe("core.projection", [&] { return check_core_projection(rng); });

  for (const FiniteSumInstance& inst : standard_zoo()) {
    const std::string k = kind_name(inst.kind);
    maybe("instances.regularity." + k, [&] { return verify_regularity(inst, rng); });
    maybe("instances.curvature." + k, [&] { return verify_convex_concavity(inst, rng); });
    maybe("instances.aggregate." + k, [&] { return verify_aggregate_consistency(inst, rng); });
    maybe("oracle.gradient_fd." + k, [&] { return verify_gradient_fd(inst, rng); });
    maybe("oracle.prox_foc." + k, [&] { return verify_prox_optimality(inst, rng); });
    if (inst.family == Family::BilinearChain || inst.family == Family::NonconvexChain ||
        inst.family == Family::QuadChain)
      maybe("zero_chain.jump." + k, [&] { return verify_jump(inst, 100, rng); });
  }

  maybe("reference.points", [&] { return check_reference_points(rng); });
  maybe("zero_chain.geo", [&] { return check_geo(rng); });
  maybe("algorithms.protocol", [&] { return check_protocol(rng); });
  return out;
}

}  // namespace pifo
