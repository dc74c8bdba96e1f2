#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "pifolab/brute.hpp"
#include "pifolab/chain.hpp"
#include "pifolab/instance.hpp"
#include "pifolab/oracle.hpp"
#include "pifolab/rng.hpp"
#include "pifolab/verify.hpp"

using namespace pifo;

namespace {

Vec rnd(int d, double box, Rng& rng) {
  Vec v(d);
  for (int j = 0; j < d; ++j) v[j] = rng.uniform(-box, box);
  return v;
}

double safe_gamma(const FiniteSumInstance& inst, Rng& rng) {
  double g = rng.uniform(0.2, 1.0) / std::max(inst.regularity.L, 1e-9);
  if (inst.gamma_max < kInf) g = std::min(g, inst.gamma_max * rng.uniform(0.1, 0.9));
  return g;
}

}  // namespace

TEST_CASE("oracle returns the zero tuple for dormant components at the origin") {
  FiniteSumInstance inst = make_bilinear_base(5, 1.0, 0.3, 0.2, 3);
  QueryCounter counter;
  counter.reset(3);
  PifoResponse r = pifo_query(inst, 2, Vec::Zero(5), Vec::Zero(5), 0.1, counter);
  CHECK(r.value == 0.0);
  CHECK(r.grad_x.norm() == 0.0);
  CHECK(r.grad_y.norm() == 0.0);
  CHECK(r.prox_x.norm() == 0.0);
  CHECK(r.prox_y.norm() == 0.0);
  CHECK(r.proj_x.norm() == 0.0);
  CHECK(r.proj_y.norm() == 0.0);
}

TEST_CASE("oracle projections follow the ball formula") {
  FiniteSumInstance inst = make_scsc(16.0, 2.0, 1.0, 5.0, 5.0, 3, 4);
  QueryCounter counter;
  counter.reset(3);
  Vec x(4);
  x << 6, 8, 0, 0;  // norm 10 > Rx
  PifoResponse r = pifo_query(inst, 1, x, Vec::Zero(4), 0.01, counter);
  CHECK(r.proj_x[0] == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(r.proj_x[1] == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("query accounting") {
  FiniteSumInstance inst = make_cc(2.0, 1.0, 1.0, 3, 4);
  QueryCounter counter;
  counter.reset(3);
  Rng rng(3);
  for (int k = 1; k <= 25; ++k) {
    const int i = rng.uniform_int(1, 3);
    pifo_query(inst, i, Vec::Zero(4), Vec::Zero(4), 0.05, counter);
    CHECK(counter.total == k);
  }
  long long sum = 0;
  for (long long c : counter.per_component) sum += c;
  CHECK(sum == counter.total);
}

TEST_CASE("bilinear prox matches dense and alternating solves") {
  Rng rng(5);
  for (const FiniteSumInstance& inst :
       {make_bilinear_base(6, 1.0, 0.4, 0.7, 2), make_scsc(16.0, 2.0, 1.0, 1.0, 1.0, 3, 6),
        make_csc(16.0, 1.0, 1.0, 1.0, 3, 6), make_cc(4.0, 1.0, 1.0, 2, 5)}) {
    for (int t = 0; t < 25; ++t) {
      Vec x = rnd(inst.dim_x, 1.0, rng), y = rnd(inst.dim_y, 1.0, rng);
      const double g = safe_gamma(inst, rng);
      const int i = 1 + t % inst.n;
      auto [u, v] = prox_saddle(inst, i, x, y, g);
      auto [bu, bv] = brute::prox_saddle(inst, i, x, y, g);
      const double scale = std::max(1.0, bu.norm() + bv.norm());
      CHECK((u - bu).norm() <= 1e-8 * scale);
      CHECK((v - bv).norm() <= 1e-8 * scale);
    }
    // alternating best-response oracle at small gamma
    const double g_small = 0.1 / inst.n / inst.regularity.L;
    Vec x = rnd(inst.dim_x, 1.0, rng), y = rnd(inst.dim_y, 1.0, rng);
    auto [u, v] = prox_saddle(inst, 1, x, y, g_small);
    auto [au, av] = brute::prox_saddle_abr(inst, 1, x, y, g_small, 1000);
    CHECK((u - au).norm() <= 1e-8 * std::max(1.0, au.norm()));
    CHECK((v - av).norm() <= 1e-8 * std::max(1.0, av.norm()));
  }
}

TEST_CASE("one dimensional prox closed forms") {
  const double L = 4.0, Rx = 1.0;
  FiniteSumInstance hs = make_one_d_scsc(L, 3, Rx, 1.0);
  Rng rng(7);
  for (int t = 0; t < 10; ++t) {
    Vec x(1), y(1);
    x[0] = rng.uniform(-1, 1);
    y[0] = rng.uniform(-1, 1);
    const double g = rng.uniform(0.01, 0.5);
    auto [u, v] = prox_saddle(hs, 2, x, y, g);
    CHECK(u[0] == doctest::Approx(x[0] / (L * g + 1.0)).epsilon(1e-14));
    CHECK(v[0] == doctest::Approx(y[0] / (L * g + 1.0)).epsilon(1e-14));
  }
  FiniteSumInstance hc = make_one_d_cc(L, 3, Rx, 1.0);
  for (int t = 0; t < 10; ++t) {
    Vec x(1), y(1);
    x[0] = rng.uniform(-1, 1);
    y[0] = rng.uniform(-1, 1);
    const double g = rng.uniform(0.01, 0.5);
    auto [u, v] = prox_saddle(hc, 2, x, y, g);
    // saddle first-order conditions of L u v with the two prox penalties
    CHECK(L * v[0] + (u[0] - x[0]) / g == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(L * u[0] - (v[0] - y[0]) / g == doctest::Approx(0.0).epsilon(1e-12));
    // matches the dense saddle solve
    auto [bu, bv] = brute::prox_saddle(hc, 2, x, y, g);
    CHECK(u[0] == doctest::Approx(bu[0]).epsilon(1e-12));
    CHECK(v[0] == doctest::Approx(bv[0]).epsilon(1e-12));
  }
}

TEST_CASE("potential-coupled prox: zero blocks stay exactly zero") {
  FiniteSumInstance inst = make_nonconvex_base(6, 0.8, 0.5, 0.3, 0.9, 2);
  const double g = 0.5 * inst.gamma_max;
  auto [u, v] = prox_saddle(inst, 2, Vec::Zero(6), Vec::Zero(6), g);
  CHECK(u.norm() == 0.0);
  CHECK(v.norm() == 0.0);
  // component 1 activates only the first coordinate pair
  auto [u1, v1] = prox_saddle(inst, 1, Vec::Zero(6), Vec::Zero(6), g);
  for (int j = 1; j < 6; ++j) {
    CHECK(u1[j] == 0.0);
    CHECK(v1[j] == 0.0);
  }
}

TEST_CASE("potential-coupled prox matches gradient-descent brute force") {
  Rng rng(11);
  for (const FiniteSumInstance& inst :
       {make_nonconvex_base(6, 0.8, 0.5, 0.3, 0.9, 2),
        make_ncsc(40.0, 5.0, 4.0, 50.0, 0.004, 2)}) {
    for (int t = 0; t < 12; ++t) {
      Vec x = rnd(inst.dim_x, inst.scale.beta, rng), y = rnd(inst.dim_y, inst.scale.beta, rng);
      const double g = inst.gamma_max * rng.uniform(0.1, 0.8);
      auto [u, v] = prox_saddle(inst, 1 + t % inst.n, x, y, g);
      auto [bu, bv] = brute::prox_saddle(inst, 1 + t % inst.n, x, y, g);
      const double scale = std::max(1.0, bu.norm() + bv.norm());
      CHECK((u - bu).norm() <= 1e-6 * scale);
      CHECK((v - bv).norm() <= 1e-6 * scale);
    }
  }
}

TEST_CASE("gamma validity threshold is a hard error") {
  FiniteSumInstance inst = make_nonconvex_base(4, 0.8, 0.5, 0.3, 0.9, 2);
  CHECK(inst.gamma_max < kInf);
  CHECK_THROWS(prox_saddle(inst, 1, Vec::Zero(4), Vec::Zero(4), inst.gamma_max * 1.01));
  CHECK_THROWS(prox_saddle(inst, 1, Vec::Zero(4), Vec::Zero(4), inst.gamma_max));
  QueryCounter counter;
  counter.reset(2);
  CHECK_THROWS(pifo_query(inst, 1, Vec::Zero(4), Vec::Zero(4), inst.gamma_max * 2.0, counter));
}

TEST_CASE("minimization prox: dormant components and dense-solve agreement") {
  FiniteSumInstance gsc = make_one_d_sc(4.0, 1.0, 3);
  Vec z = Vec::Zero(1);
  CHECK(prox_minimization(gsc, 2, z, 0.3).norm() == 0.0);
  CHECK(prox_minimization(gsc, 3, z, 0.3).norm() == 0.0);

  Rng rng(13);
  for (const FiniteSumInstance& inst :
       {make_quad_base(6, 0.0, 1.0, 0.5, 0.0, 1.0, 2), make_sc(16.0, 1.0, 1.0, 3, 6),
        make_c(8.0, 1.0, 3, 6)}) {
    for (int t = 0; t < 20; ++t) {
      Vec x = rnd(inst.dim_x, 1.0, rng);
      const double g = safe_gamma(inst, rng);
      const int i = rng.uniform_int(1, inst.n);
      Vec u = prox_minimization(inst, i, x, g);
      Vec bu = brute::prox_min(inst, i, x, g);
      CHECK((u - bu).norm() <= 1e-8 * std::max(1.0, bu.norm()));
    }
  }
  // nonconvex mode against gradient descent
  FiniteSumInstance nc = make_nc(30.0, 3.0, 100.0, 0.01, 2);
  for (int t = 0; t < 10; ++t) {
    Vec x = rnd(nc.dim_x, nc.scale.beta, rng);
    const double g = nc.gamma_max * rng.uniform(0.1, 0.8);
    const int i = rng.uniform_int(1, nc.n);
    Vec u = prox_minimization(nc, i, x, g);
    Vec bu = brute::prox_min(nc, i, x, g);
    CHECK((u - bu).norm() <= 1e-6 * std::max(1.0, bu.norm()));
  }
}

TEST_CASE("minimization prox extends the active subspace by one") {
  FiniteSumInstance inst = make_quad_base(8, 0.0, 1.0, 0.5, 0.0, 1.0, 3);
  Rng rng(17);
  for (int t = 0; t < 60; ++t) {
    const int k = rng.uniform_int(0, 7);
    Vec x = Vec::Zero(8);
    for (int j = 0; j < k; ++j) x[j] = rng.uniform(-1, 1);
    const int i = 1 + (k % 3);  // the activating component for level k
    Vec u = prox_minimization(inst, i, x, 0.2);
    for (int j = k + 1; j < 8; ++j) CHECK(u[j] == 0.0);
    // a non-activating component stays inside F_k
    const int other = 1 + ((k + 1) % 3);
    Vec w = prox_minimization(inst, other, x, 0.2);
    for (int j = k; j < 8; ++j) CHECK(w[j] == 0.0);
  }
}

TEST_CASE("finite differences certify every gradient path") {
  Rng rng(19);
  for (const FiniteSumInstance& inst :
       {make_scsc(16.0, 2.0, 1.0, 1.0, 1.0, 3, 5), make_csc(16.0, 1.0, 1.0, 1.0, 3, 5),
        make_cc(4.0, 1.0, 1.0, 2, 5), make_ncsc(40.0, 5.0, 4.0, 50.0, 0.004, 2),
        make_sc(16.0, 1.0, 1.0, 3, 5), make_c(8.0, 1.0, 3, 5),
        make_nc(30.0, 3.0, 100.0, 0.01, 2), make_sep_scsc(16.0, 1.0, 1.0, 2.0, 2.0, 3, 5),
        make_one_d_cc(4.0, 2, 1.0, 1.0)}) {
    VerifyResult r = verify_gradient_fd(inst, rng);
    CHECK_MESSAGE(r.pass, r.name, ": ", r.message);
  }
}

TEST_CASE("prox satisfies the saddle first-order conditions") {
  Rng rng(23);
  for (const FiniteSumInstance& inst :
       {make_scsc(16.0, 2.0, 1.0, 1.0, 1.0, 3, 5), make_ncsc(40.0, 5.0, 4.0, 50.0, 0.004, 2),
        make_sep_csc(16.0, 1.0, 2.0, 2.0, 3, 5), make_sc(16.0, 1.0, 1.0, 3, 5),
        make_nc(30.0, 3.0, 100.0, 0.01, 2), make_one_d_scsc(4.0, 2, 1.0, 1.0)}) {
    VerifyResult r = verify_prox_optimality(inst, rng);
    CHECK_MESSAGE(r.pass, r.name, ": ", r.message);
  }
}
