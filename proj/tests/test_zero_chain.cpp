#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "pifolab/instance.hpp"
#include "pifolab/chain.hpp"
#include "pifolab/oracle.hpp"
#include "pifolab/rng.hpp"
#include "pifolab/verify.hpp"
#include "pifolab/zero_chain.hpp"

using namespace pifo;

TEST_CASE("subspace predictions") {
  // bilinear chain: activation advances (k, k-1) to (k+1, k)
  SubspacePair p = predict_next_subspace(ChainCase::Bilinear, 0, 1, 2, 6);
  CHECK(p.kx == 1);
  CHECK(p.ky == 0);
  SubspacePair q = predict_next_subspace(ChainCase::Bilinear, 0, 2, 2, 6);
  CHECK(q.kx == 0);
  CHECK(q.ky == 0);
  // shifted chain: both blocks advance together; 1 is in class 2 for n = 3
  SubspacePair h = predict_next_subspace(ChainCase::Nonconvex, 1, 2, 3, 6);
  CHECK(h.kx == 2);
  CHECK(h.ky == 2);
  // range limits
  CHECK_THROWS(predict_next_subspace(ChainCase::Nonconvex, 5, 1, 3, 6));
  CHECK_THROWS(predict_next_subspace(ChainCase::Bilinear, 6, 1, 3, 6));
  CHECK(predict_next_subspace(ChainCase::Minimize, 3, 1, 2, 6).ky == -1);
}

TEST_CASE("jump checks on sampled hypothesis points") {
  Rng rng(3);
  for (const FiniteSumInstance& inst :
       {make_bilinear_base(10, 1.0, 0.4, 0.2, 3), make_scsc(16.0, 2.0, 1.0, 1.0, 1.0, 2, 8),
        make_nonconvex_base(10, 0.8, 0.5, 0.3, 0.9, 3),
        make_quad_base(10, 0.0, 1.0, 0.5, 0.0, 1.0, 2),
        make_quad_base(10, 0.7, 0.0, 0.0, 0.4, 0.6, 2)}) {
    VerifyResult r = verify_jump(inst, 300, rng);
    CHECK_MESSAGE(r.pass, r.name, ": ", r.message);
  }
  // origin stays at the origin for dormant components
  FiniteSumInstance t = make_bilinear_base(6, 1.0, 0.2, 0.1, 2);
  JumpReport rep = check_jump(t, Vec::Zero(6), Vec::Zero(6), 2, 0.1, 0.0);
  CHECK(rep.pass);
  CHECK(rep.observed.kx == 0);
  CHECK(rep.observed.ky == 0);
  // explicit activation: x in F3, y in F2, n = 2, component with 3 in its class
  Rng rng2(5);
  Vec x = Vec::Zero(6), y = Vec::Zero(6);
  for (int j = 0; j < 3; ++j) x[j] = rng2.uniform(-1, 1);
  for (int j = 0; j < 2; ++j) y[j] = rng2.uniform(-1, 1);
  JumpReport act = check_jump(t, x, y, 1 + 3 % 2, 0.1, 0.0);  // 3 mod 2 = 1 -> class of i=2
  CHECK(act.pass);
  CHECK(act.predicted.kx == 4);
  CHECK(act.predicted.ky == 3);
  // hypothesis violation is flagged, not asserted
  FiniteSumInstance h = make_nonconvex_base(6, 0.8, 0.5, 0.3, 0.9, 2);
  Vec xf = Vec::Zero(6);
  for (int j = 0; j < 5; ++j) xf[j] = 1.0;  // k = m-1 is outside the lemma range
  JumpReport bad = check_jump(h, xf, xf, 1, 0.4 * h.gamma_max, 1e-10);
  CHECK(!bad.hypothesis_ok);
}

TEST_CASE("iterating activations reaches each level exactly in order") {
  FiniteSumInstance inst = make_bilinear_base(8, 1.0, 0.3, 0.2, 3);
  Vec x = Vec::Zero(8), y = Vec::Zero(8);
  QueryCounter counter;
  counter.reset(3);
  for (int k = 0; k < 7; ++k) {
    const int active = 1 + k % 3;
    // a dormant draw first: nothing moves beyond the current level
    const int dormant = 1 + (k + 1) % 3;
    PifoResponse rd = pifo_query(inst, dormant, x, y, 0.05, counter);
    CHECK(subspace_index(rd.grad_x).k <= k);
    PifoResponse ra = pifo_query(inst, active, x, y, 0.05, counter);
    // adopt the prox point: it advances exactly one level
    x = ra.prox_x;
    y = ra.prox_y;
    CHECK(subspace_index(x).k <= k + 1);
    CHECK(subspace_index(y).k <= k);
  }
}

TEST_CASE("stopping time simulation") {
  std::vector<double> uniform8(8, 1.0 / 8.0);
  Rng rng_a = Rng::stream(2024, 5);
  Rng rng_b = Rng::stream(2024, 5);
  GeoProcess a = simulate_stopping_times(uniform8, 10, rng_a);
  GeoProcess b = simulate_stopping_times(uniform8, 10, rng_b);
  CHECK(a.stopping_times == b.stopping_times);  // reproducible under the seed
  for (std::size_t k = 0; k < a.increments.size(); ++k) CHECK(a.increments[k] >= 1);
  for (std::size_t k = 1; k < a.stopping_times.size(); ++k)
    CHECK(a.stopping_times[k] > a.stopping_times[k - 1]);

  // mean increment matches the geometric mean 1/p within 2%
  std::vector<double> dist{0.25, 0.75};
  Rng rng(7);
  double sum1 = 0.0;
  const int trials = 100000;
  for (int t = 0; t < trials; ++t) {
    GeoProcess g = simulate_stopping_times(dist, 1, rng);
    sum1 += double(g.increments[0]);
  }
  CHECK(sum1 / trials == doctest::Approx(1.0 / 0.25).epsilon(0.02));
}

TEST_CASE("simulated tail of T_{M+1} exceeds 1/9 (uniform, n=8, M=7)") {
  std::vector<double> uniform8(8, 1.0 / 8.0);
  Rng rng(11);
  const long long threshold = 8 * (7 + 1) / 4;  // n (M+1) / 4 = 16
  long long hits = 0;
  const int trials = 100000;
  for (int t = 0; t < trials; ++t) {
    GeoProcess g = simulate_stopping_times(uniform8, 8, rng);
    if (g.stopping_times.back() > threshold) ++hits;
  }
  const double p = double(hits) / trials;
  const double se = std::sqrt(p * (1 - p) / trials);
  CHECK(p - 2.5758 * se >= 1.0 / 9.0);
}

TEST_CASE("exact geometric tails") {
  CHECK(geo_tail_exact({0.5, 0.5}, 2) == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(geo_tail_exact({0.5, 0.25}, 2) == doctest::Approx(0.875).epsilon(1e-14));
  CHECK(geo_tail_exact({0.3, 0.6, 0.9}, 2) == 1.0);  // j < m
  CHECK(f2j_closed_form(0.5, 0.5, 2) == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(f2j_closed_form(0.5, 0.25, 2) == doctest::Approx(0.875).epsilon(1e-14));
  // continuity of the two-case formula as q -> p
  const double at_p = f2j_closed_form(0.4, 0.4, 7);
  CHECK(f2j_closed_form(0.4, 0.4 + 1e-9, 7) == doctest::Approx(at_p).epsilon(1e-6));
  // closed form matches the dp on a grid
  Rng rng(13);
  for (int t = 0; t < 300; ++t) {
    const double p1 = rng.uniform(0.02, 1.0), p2 = rng.uniform(0.02, 1.0);
    const long long j = rng.uniform_int(1, 40);
    CHECK(std::abs(f2j_closed_form(p1, p2, j) - geo_tail_exact({p1, p2}, j)) <= 1e-12);
  }
}

TEST_CASE("averaging inequality spot check (m = 3)") {
  Rng rng(17);
  for (int t = 0; t < 1000; ++t) {
    std::vector<double> p{rng.uniform(0.05, 1.0), rng.uniform(0.05, 1.0),
                          rng.uniform(0.05, 1.0)};
    const long long j = rng.uniform_int(3, 8);
    const double bar = (p[0] + p[1] + p[2]) / 3.0;
    CHECK(geo_tail_exact(p, j) >= geo_tail_exact({bar, bar, bar}, j) - 1e-12);
  }
}

TEST_CASE("concentration reports") {
  Rng rng(19);
  // m = 2, p = (1/2, 1/2): threshold 1, the sum is always at least 2
  auto rep = verify_geo_concentration({0.5, 0.5}, 0, rng);
  CHECK(rep.threshold == 1);
  CHECK(rep.tail == 1.0);
  CHECK(rep.pass);
  // exact evaluation for the uniform cases
  for (int m : {2, 4, 8}) {
    std::vector<double> p(m, 1.0 / m);
    auto r = verify_geo_concentration(p, 0, rng);
    CHECK(r.exact);
    CHECK(r.pass);
  }
  // Monte Carlo path engages when the dp would be too large
  std::vector<double> tiny(16, 1e-6);
  auto mc = verify_geo_concentration(tiny, 20000, rng);
  CHECK(!mc.exact);
  CHECK(mc.pass);
}
