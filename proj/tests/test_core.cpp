#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "pifolab/chain.hpp"
#include "pifolab/gamma.hpp"
#include "pifolab/linalg.hpp"
#include "pifolab/rng.hpp"

using namespace pifo;

TEST_CASE("chain matrix rows match the printed definition") {
  Mat B = make_b_matrix({3, 0.0, 1.0});
  Mat want(4, 3);
  want << 0, 0, 0, 1, -1, 0, 0, 1, -1, 0, 0, 1;
  CHECK((B - want).norm() == 0.0);

  Mat B2 = make_b_matrix({2, 0.0, 0.0});
  CHECK(B2.row(0).norm() == 0.0);
  CHECK(B2.row(2).norm() == 0.0);
  CHECK(B2(1, 0) == 1.0);
  CHECK(B2(1, 1) == -1.0);

  const double r2 = std::sqrt(2.0);
  Mat B3 = make_b_matrix({2, r2, r2});
  CHECK(B3(0, 0) == r2);
  CHECK(B3(2, 1) == r2);
}

TEST_CASE("row_b endpoints vanish when the corner weights vanish") {
  CHECK(row_b(0, {4, 0.0, 1.0}).norm() == 0.0);
  CHECK(row_b(4, {4, 1.0, 0.0}).norm() == 0.0);
  Vec r1 = row_b(1, {3, 0.0, 1.0});
  CHECK(r1[0] == 1.0);
  CHECK(r1[1] == -1.0);
  CHECK(r1[2] == 0.0);
  CHECK_THROWS(row_b(5, {3, 0.0, 1.0}));
}

TEST_CASE("residue partition") {
  IndexPartition p = partition_indices(5, 3);
  CHECK(p.sets[0] == std::vector<int>{0, 3});
  CHECK(p.sets[1] == std::vector<int>{1, 4});
  CHECK(p.sets[2] == std::vector<int>{2, 5});
  IndexPartition p2 = partition_indices(5, 2);
  CHECK(p2.sets[0] == std::vector<int>{0, 2, 4});
  CHECK(p2.sets[1] == std::vector<int>{1, 3, 5});
  IndexPartition p3 = partition_indices(1, 2);
  CHECK(p3.sets[0] == std::vector<int>{0});
  CHECK(p3.sets[1] == std::vector<int>{1});
  CHECK_THROWS(partition_indices(5, 1));
}

TEST_CASE("rows in one residue class are exactly orthogonal, norms at most 2") {
  Rng rng(11);
  for (int t = 0; t < 50; ++t) {
    const int m = rng.uniform_int(2, 15);
    const int n = rng.uniform_int(2, 6);
    BMatrixSpec spec{m, rng.uniform(0.0, std::sqrt(2.0)), rng.uniform(0.0, std::sqrt(2.0))};
    for (int i = 1; i <= n; ++i) {
      auto cls = residue_class(m, n, i);
      for (std::size_t a = 0; a < cls.size(); ++a) {
        CHECK(row_sqnorm(cls[a], spec) <= 2.0 + 1e-12);
        for (std::size_t b = a + 1; b < cls.size(); ++b)
          CHECK(row_b(cls[a], spec).dot(row_b(cls[b], spec)) == 0.0);
      }
    }
  }
}

TEST_CASE("subspace index") {
  Vec z = Vec::Zero(3);
  CHECK(subspace_index(z, 0.0).k == 0);
  Vec v(4);
  v << 1, 2, 0, 0;
  CHECK(subspace_index(v, 0.0).k == 2);
  Vec w(3);
  w << 0, 1e-12, 0;
  CHECK(subspace_index(w, 1e-10).k == 0);
}

TEST_CASE("ball projection") {
  Vec a(2);
  a << 3, 4;
  CHECK((project_ball(a, 5.0) - a).norm() == 0.0);
  Vec b(2);
  b << 6, 8;
  Vec pb = project_ball(b, 5.0);
  CHECK(pb[0] == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(pb[1] == doctest::Approx(4.0).epsilon(1e-14));
  Vec c = Vec::Zero(2);
  CHECK(project_ball(c, 1.0).norm() == 0.0);
  Rng rng(3);
  for (int t = 0; t < 100; ++t) {
    Vec v(3);
    for (int j = 0; j < 3; ++j) v[j] = rng.uniform(-4, 4);
    const double R = rng.uniform(0.1, 2.0);
    Vec p = project_ball(v, R);
    CHECK(p.norm() <= R + 1e-12);
    CHECK((project_ball(p, R) - p).norm() == 0.0);
    if (v.norm() > 0) CHECK(std::abs(p.dot(v) - p.norm() * v.norm()) <= 1e-12 * v.norm());
  }
}

TEST_CASE("scalar potential") {
  CHECK(gamma_value(1.0) == 0.0);
  CHECK(gamma_deriv(0.0) == 0.0);
  CHECK(gamma_deriv(2.0) == doctest::Approx(96.0).epsilon(1e-14));
  Rng rng(5);
  for (int t = 0; t < 2000; ++t) {
    const double a = rng.uniform(-10, 10), b = rng.uniform(-10, 10);
    CHECK(std::abs(gamma_deriv(a) - gamma_deriv(b)) <= 180.0 * std::abs(a - b) + 1e-9);
  }
  for (int t = 0; t <= 2000; ++t) {
    const double x = -10.0 + 20.0 * t / 2000.0;
    CHECK(gamma_second(x) >= kGammaWeakConvexity - 1e-9);
  }
  // closed form against Simpson quadrature of the printed integrand
  auto integrand = [](double t) { return 120.0 * t * t * (t - 1.0) / (1.0 + t * t); };
  for (double x : {-5.0, -2.5, -1.0, 0.0, 0.4, 1.7, 3.0, 5.0}) {
    const int steps = 40000;
    const double h = (x - 1.0) / steps;
    double acc = integrand(1.0) + integrand(x);
    for (int s = 1; s < steps; ++s) acc += integrand(1.0 + s * h) * ((s % 2) ? 4.0 : 2.0);
    CHECK(gamma_value(x) == doctest::Approx(acc * h / 3.0).epsilon(1e-9));
  }
}

TEST_CASE("tridiagonal solver") {
  Vec x = solve_tridiagonal({1, 1}, {0}, {0}, {1, 2});
  CHECK(x[0] == 1.0);
  CHECK(x[1] == 2.0);
  Vec y = solve_tridiagonal({2, 2}, {-1}, {-1}, {1, 0});
  CHECK(y[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(y[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  // residual check against a random diagonally dominant system
  Rng rng(7);
  for (int t = 0; t < 20; ++t) {
    const int nn = rng.uniform_int(2, 12);
    std::vector<double> d(nn), lo(nn - 1), hi(nn - 1), r(nn);
    for (int j = 0; j < nn; ++j) {
      d[j] = rng.uniform(2.5, 4.0);
      r[j] = rng.uniform(-1, 1);
    }
    for (int j = 0; j + 1 < nn; ++j) {
      lo[j] = rng.uniform(-1, 1);
      hi[j] = rng.uniform(-1, 1);
    }
    Vec sol = solve_tridiagonal(d, lo, hi, r);
    double rnorm = 0, bnorm = 0;
    for (int j = 0; j < nn; ++j) {
      double acc = d[j] * sol[j];
      if (j > 0) acc += lo[j - 1] * sol[j - 1];
      if (j + 1 < nn) acc += hi[j] * sol[j + 1];
      rnorm += (acc - r[j]) * (acc - r[j]);
      bnorm += r[j] * r[j];
    }
    CHECK(std::sqrt(rnorm) <= 1e-10 * std::max(1.0, std::sqrt(bnorm)));
  }
}
