#include "pifolab/instance.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "json.hpp"
#include "pifolab/chain.hpp"
#include "pifolab/gamma.hpp"

namespace pifo {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

Dist sorted_distribution(int n, const Dist& dist) {
  Dist p = dist;
  if (p.empty()) {
    p.assign(n, 1.0 / n);
    return p;
  }
  require(static_cast<int>(p.size()) == n, "distribution size must equal n");
  double sum = 0.0;
  for (double v : p) {
    require(v > 0.0, "distribution entries must be positive");
    sum += v;
  }
  for (double& v : p) v /= sum;
  std::sort(p.begin(), p.end());
  return p;
}

// Admissible prox weight for a base construction whose only nonquadratic
// term is coef * Gamma(arg_scale * x_j).  Both the convexity of the prox
// subproblem and the coordinate uniqueness argument must hold; the former
// is the binding constraint.
double base_gamma_cap(double coef, double arg_scale) {
  const double c = coef * arg_scale * arg_scale;
  if (c <= 0.0) return kInf;
  const double convexity = (std::sqrt(3.0) + 1.0) / (90.0 * c);
  const double uniqueness = (std::sqrt(2.0) + 1.0) / (60.0 * c);
  return std::min(convexity, uniqueness);
}

double tilde_L(int n, double c1, double c2) {
  const double cmax = std::max(c1, c2);
  return std::sqrt(4.0 * double(n) * n + 2.0 * cmax * cmax);
}
double tilde_L_avg(int n, double c1, double c2) {
  const double cmax = std::max(c1, c2);
  return std::sqrt(8.0 * n + 2.0 * cmax * cmax);
}

FiniteSumInstance scaled_tilde(Kind kind, int m, double zeta, double c1, double c2, int n,
                               double lambda, double beta, double Rx, double Ry,
                               const Dist& dist) {
  FiniteSumInstance inst;
  inst.kind = kind;
  inst.family = Family::BilinearChain;
  inst.n = n;
  inst.dim_x = m;
  inst.dim_y = m;
  inst.scale = {lambda, beta};
  inst.base.m = m;
  inst.base.zeta = zeta;
  inst.base.c1 = c1;
  inst.base.c2 = c2;
  inst.feasible = {Rx, Ry};
  const double s = lambda / (beta * beta);
  inst.regularity.L = s * tilde_L(n, c1, c2);
  inst.regularity.L_avg = s * tilde_L_avg(n, c1, c2);
  inst.regularity.mu_x = s * c1;
  inst.regularity.mu_y = s * c2;
  inst.distribution = sorted_distribution(n, dist);
  inst.gamma_max = kInf;
  return inst;
}

FiniteSumInstance scaled_quad(Kind kind, int m, double omega, double zeta, double c1,
                              double c2, double c3, int n, double lambda, double beta,
                              double R, const Dist& dist) {
  FiniteSumInstance inst;
  inst.kind = kind;
  inst.family = Family::QuadChain;
  inst.n = n;
  inst.dim_x = m;
  inst.dim_y = 0;
  inst.scale = {lambda, beta};
  inst.base.m = m;
  inst.base.omega = omega;
  inst.base.zeta = zeta;
  inst.base.c1 = c1;
  inst.base.c2 = c2;
  inst.base.c3 = c3;
  inst.feasible = {R, kInf};
  const double s = lambda / (beta * beta);
  if (c2 == 0.0) {
    inst.regularity.L = s * (2.0 * n + c1);
    inst.regularity.L_avg =
        s * std::sqrt(4.0 / n * ((n + c1) * (n + c1) + double(n) * n) + c1 * c1);
    inst.regularity.mu_x = s * c1;
  } else {
    inst.regularity.L = s * (2.0 * n + 180.0 * c2);
    inst.regularity.L_avg = s * 4.0 * std::sqrt(n + 4050.0 * c2 * c2);
    inst.regularity.mu_x = s * kGammaWeakConvexity * c2;
  }
  inst.distribution = sorted_distribution(n, dist);
  inst.gamma_max = (beta * beta / lambda) * base_gamma_cap(c2, 1.0);
  return inst;
}

}  // namespace

// -------------------------------------------------------------------------
// Raw bases
// -------------------------------------------------------------------------

FiniteSumInstance make_bilinear_base(int m, double zeta, double c1, double c2, int n,
                                     const Dist& dist) {
  require(n >= 2, "bilinear base: need n >= 2");
  require(m >= 1, "bilinear base: need m >= 1");
  require(zeta >= 0.0 && zeta <= std::sqrt(2.0) + 1e-12, "bilinear base: zeta in [0, sqrt(2)]");
  require(c1 >= 0.0 && c2 >= 0.0, "bilinear base: c1, c2 >= 0");
  return scaled_tilde(Kind::BILINEAR_BASE, m, zeta, c1, c2, n, 1.0, 1.0, kInf, kInf, dist);
}

FiniteSumInstance make_nonconvex_base(int m, double omega, double c1, double c2, double c3,
                                      int n, const Dist& dist) {
  require(n >= 2, "nonconvex base: need n >= 2");
  require(m >= 1, "nonconvex base: need m >= 1");
  require(omega >= 0.0 && omega <= std::sqrt(2.0) + 1e-12,
          "nonconvex base: omega in [0, sqrt(2)]");
  require(c1 >= 0.0, "nonconvex base: c1 >= 0");
  require(c2 > 0.0 && c3 > 0.0, "nonconvex base: c2, c3 > 0");
  FiniteSumInstance inst;
  inst.kind = Kind::NONCONVEX_BASE;
  inst.family = Family::NonconvexChain;
  inst.n = n;
  inst.dim_x = m;
  inst.dim_y = m;
  inst.base.m = m;
  inst.base.omega = omega;
  inst.base.c1 = c1;
  inst.base.c2 = c2;
  inst.base.c3 = c3;
  inst.regularity.L = std::sqrt(4.0 * double(n) * n + 2.0 * c1 * c1) + 180.0 * c2 * c3 * c3;
  inst.regularity.L_avg =
      2.0 * std::sqrt(4.0 * n + c1 * c1 + 16200.0 * c2 * c2 * c3 * c3 * c3 * c3);
  inst.regularity.mu_x = kGammaWeakConvexity * c2 * c3 * c3;
  inst.regularity.mu_y = c1;
  inst.distribution = sorted_distribution(n, dist);
  inst.gamma_max = base_gamma_cap(c2, c3);
  return inst;
}

FiniteSumInstance make_quad_base(int m, double omega, double zeta, double c1, double c2,
                                 double c3, int n, const Dist& dist) {
  require(n >= 2, "quad base: need n >= 2");
  require(m >= 1, "quad base: need m >= 1");
  require(omega >= 0.0 && omega <= std::sqrt(2.0) + 1e-12, "quad base: omega in [0, sqrt(2)]");
  require(zeta >= 0.0 && zeta <= std::sqrt(2.0) + 1e-12, "quad base: zeta in [0, sqrt(2)]");
  require(c1 >= 0.0 && c2 >= 0.0, "quad base: c1, c2 >= 0");
  require(!(c1 > 0.0 && c2 > 0.0), "quad base: mixed convex/nonconvex mode not supported");
  return scaled_quad(Kind::QUAD_BASE, m, omega, zeta, c1, c2, c3, n, 1.0, 1.0, kInf, dist);
}

// -------------------------------------------------------------------------
// Minimax cases
// -------------------------------------------------------------------------

FiniteSumInstance make_scsc(double L, double mu_x, double mu_y, double Rx, double Ry, int n,
                            int m, const Dist& dist) {
  require(n >= 2 && m >= 2, "scsc: need n >= 2, m >= 2");
  require(mu_x >= mu_y && mu_y > 0.0, "scsc: need mu_x >= mu_y > 0");
  const double kx = L / mu_x, ky = L / mu_y;
  require(kx >= 2.0 && ky >= 2.0, "scsc: need condition numbers >= 2");
  require(Rx > 0.0 && Ry > 0.0 && Rx < kInf && Ry < kInf, "scsc: need finite radii");
  const double alpha = std::sqrt((kx - 2.0 / kx) * ky / (double(n) * n) + 1.0);
  const double zeta = std::sqrt(2.0 / (alpha + 1.0));
  const double c1 = 2.0 * n / std::sqrt(kx * kx - 2.0);
  const double c2 = 2.0 * n * kx / (ky * std::sqrt(kx * kx - 2.0));
  const double beta =
      std::min({2.0 * n * Rx * std::sqrt(alpha / (kx * kx - 2.0)),
                2.0 * n * Rx / (alpha + 1.0) * std::sqrt(2.0 * alpha / (kx * kx - 2.0)),
                std::sqrt(2.0 * alpha) * Ry / (alpha - 1.0)});
  const double lambda = beta * beta / (2.0 * n) * std::sqrt(L * L - 2.0 * mu_x * mu_x);
  FiniteSumInstance inst =
      scaled_tilde(Kind::SCSC, m, zeta, c1, c2, n, lambda, beta, Rx, Ry, dist);
  inst.base.alpha = alpha;
  return inst;
}

FiniteSumInstance make_csc(double L, double mu_y, double Rx, double Ry, int n, int m,
                           const Dist& dist) {
  require(n >= 2 && m >= 2, "csc: need n >= 2, m >= 2");
  require(mu_y > 0.0 && L / mu_y >= 2.0, "csc: need L/mu_y >= 2");
  require(Rx > 0.0 && Ry > 0.0 && Rx < kInf && Ry < kInf, "csc: need finite radii");
  const double ky2 = L * L / (mu_y * mu_y);
  const double c2 = 2.0 * n / std::sqrt(ky2 - 2.0);
  const double beta = std::min(Rx * std::sqrt(ky2 - 2.0) / (2.0 * n * std::pow(m + 1.0, 1.5)),
                               Ry / std::sqrt(double(m)));
  const double lambda = beta * beta * std::sqrt(L * L - 2.0 * mu_y * mu_y) / (2.0 * n);
  return scaled_tilde(Kind::CSC, m, 1.0, 0.0, c2, n, lambda, beta, Rx, Ry, dist);
}

FiniteSumInstance make_cc(double L, double Rx, double Ry, int n, int m, const Dist& dist) {
  require(n >= 2, "cc: need n >= 2");
  require(m >= 3, "cc: need m >= 3");
  require(L > 0.0 && Rx > 0.0 && Ry > 0.0 && Rx < kInf && Ry < kInf, "cc: bad parameters");
  const double lambda = L * Ry * Ry / (2.0 * n * m);
  const double beta = Ry / std::sqrt(double(m));
  return scaled_tilde(Kind::CC, m, 1.0, 0.0, 0.0, n, lambda, beta, Rx, Ry, dist);
}

namespace {

FiniteSumInstance build_ncsc(Kind kind, double alpha, double c1, double c2, double lambda,
                             int m_chain, int n, double L_cert, double L_avg_cert,
                             double mu_x, double mu_y, double beta, double Delta, double eps,
                             const Dist& dist) {
  FiniteSumInstance inst;
  inst.kind = kind;
  inst.family = Family::NonconvexChain;
  inst.n = n;
  inst.dim_x = m_chain;
  inst.dim_y = m_chain;
  inst.scale = {lambda, beta};
  inst.base.m = m_chain;
  inst.base.omega = std::pow(alpha, 0.25);
  inst.base.c1 = c1;
  inst.base.c2 = c2;
  inst.base.c3 = std::pow(alpha, 0.25);
  inst.base.alpha = alpha;
  inst.base.eps = eps;
  inst.base.Delta = Delta;
  inst.feasible = {kInf, kInf};
  inst.regularity.L = L_cert;
  inst.regularity.L_avg = L_avg_cert;
  inst.regularity.mu_x = -mu_x;
  inst.regularity.mu_y = mu_y;
  inst.distribution = sorted_distribution(n, dist);
  inst.gamma_max = (beta * beta / lambda) * base_gamma_cap(c2, inst.base.c3);
  return inst;
}

}  // namespace

FiniteSumInstance make_ncsc(double L, double mu_x, double mu_y, double Delta, double eps,
                            int n, const Dist& dist) {
  require(n >= 2, "ncsc: need n >= 2");
  require(mu_x > 0.0 && mu_y > 0.0 && L / mu_y >= 4.0, "ncsc: need L/mu_y >= 4");
  require(Delta > 0.0 && eps > 0.0, "ncsc: need Delta, eps > 0");
  const double n2 = double(n) * n;
  const double alpha = std::min({1.0, n2 * mu_y / (90.0 * L),
                                 8.0 * (std::sqrt(3.0) + 1.0) * n2 * mu_x * mu_y / (45.0 * L * L)});
  require(eps * eps <= Delta * L * L * alpha / (435456.0 * n2 * mu_y),
          "ncsc: eps too large for the construction");
  const int m = static_cast<int>(
      std::floor(Delta * L * L * std::sqrt(alpha) / (217728.0 * n2 * eps * eps * mu_y)));
  require(m >= 2, "ncsc: derived m < 2");
  const double c1 = 4.0 * n * mu_y / L;
  const double c2 = std::sqrt(alpha) * L / (4.0 * n * mu_y);
  const double lambda = 82944.0 * n2 * n * mu_y * mu_y * eps * eps / (L * L * L * alpha);
  const double beta = 2.0 * std::sqrt(lambda * n / L);
  const double s = lambda / (beta * beta);
  const double c3 = std::pow(alpha, 0.25);
  const double L_cert =
      s * (std::sqrt(4.0 * n2 + 2.0 * c1 * c1) + 180.0 * c2 * c3 * c3);
  const double L_avg_cert =
      s * 2.0 * std::sqrt(4.0 * n + c1 * c1 + 16200.0 * c2 * c2 * c3 * c3 * c3 * c3);
  return build_ncsc(Kind::NCSC, alpha, c1, c2, lambda, m + 1, n, std::min(L, L_cert),
                    L_avg_cert, mu_x, mu_y, beta, Delta, eps, dist);
}

FiniteSumInstance make_ncsc_avg(double L_prime, double mu_x, double mu_y, double Delta,
                                double eps, int n, const Dist& dist) {
  require(n >= 2, "ncsc_avg: need n >= 2");
  require(mu_x > 0.0 && mu_y > 0.0 && L_prime / mu_y >= 4.0, "ncsc_avg: need L'/mu_y >= 4");
  require(Delta > 0.0 && eps > 0.0, "ncsc_avg: need Delta, eps > 0");
  const double rn = std::sqrt(double(n));
  const double alpha =
      std::min({1.0, 32.0 * n * mu_y / (135.0 * L_prime),
                128.0 * (std::sqrt(3.0) + 1.0) * n * mu_x * mu_y / (45.0 * L_prime * L_prime)});
  require(eps * eps <= Delta * L_prime * L_prime * alpha / (6967296.0 * n * mu_y),
          "ncsc_avg: eps too large for the construction");
  const int m = static_cast<int>(std::floor(Delta * L_prime * L_prime * std::sqrt(alpha) /
                                            (3483648.0 * n * eps * eps * mu_y)));
  require(m >= 2, "ncsc_avg: derived m < 2");
  const double c1 = 16.0 * rn * mu_y / L_prime;
  const double c2 = std::sqrt(alpha) * L_prime / (16.0 * rn * mu_y);
  const double lambda =
      5308416.0 * n * rn * mu_y * mu_y * eps * eps / (L_prime * L_prime * L_prime * alpha);
  const double beta = 4.0 * std::sqrt(lambda * rn / L_prime);
  const double s = lambda / (beta * beta);
  const double c3 = std::pow(alpha, 0.25);
  const double L_cert =
      s * (std::sqrt(4.0 * double(n) * n + 2.0 * c1 * c1) + 180.0 * c2 * c3 * c3);
  FiniteSumInstance inst =
      build_ncsc(Kind::NCSC_AVG, alpha, c1, c2, lambda, m + 1, n, L_cert, L_prime, mu_x, mu_y,
                 beta, Delta, eps, dist);
  return inst;
}

// -------------------------------------------------------------------------
// Minimization cases
// -------------------------------------------------------------------------

FiniteSumInstance make_sc(double L, double mu, double R, int n, int m, const Dist& dist) {
  require(n >= 2 && m >= 2, "sc: need n >= 2, m >= 2");
  require(mu > 0.0 && L / mu >= 2.0, "sc: need L/mu >= 2");
  require(R > 0.0 && R < kInf, "sc: need finite radius");
  const double kappa = L / mu;
  const double alpha = std::sqrt(2.0 * (kappa - 1.0) / n + 1.0);
  const double zeta = std::sqrt(2.0 / (alpha + 1.0));
  const double c1 = 2.0 * n / (kappa - 1.0);
  const double lambda = 2.0 * mu * R * R * alpha * n / (kappa - 1.0);
  const double beta = 2.0 * R * std::sqrt(alpha) * n / (kappa - 1.0);
  FiniteSumInstance inst =
      scaled_quad(Kind::SC, m, 0.0, zeta, c1, 0.0, 1.0, n, lambda, beta, R, dist);
  inst.base.alpha = alpha;
  return inst;
}

FiniteSumInstance make_c(double L, double R, int n, int m, const Dist& dist) {
  require(n >= 2 && m >= 2, "c: need n >= 2, m >= 2");
  require(L > 0.0 && R > 0.0 && R < kInf, "c: bad parameters");
  const double lambda = 3.0 * L * R * R / (2.0 * n * std::pow(m + 1.0, 3));
  const double beta = std::sqrt(3.0) * R / std::pow(m + 1.0, 1.5);
  return scaled_quad(Kind::C, m, 0.0, 1.0, 0.0, 0.0, 1.0, n, lambda, beta, R, dist);
}

FiniteSumInstance make_nc(double L, double mu, double Delta, double eps, int n,
                          const Dist& dist) {
  require(n >= 2, "nc: need n >= 2");
  require(L > 0.0 && mu > 0.0 && Delta > 0.0 && eps > 0.0, "nc: bad parameters");
  const double alpha =
      std::min({1.0, (std::sqrt(3.0) + 1.0) * n * mu / (30.0 * L), n / 180.0});
  require(eps * eps <= Delta * L * alpha / (81648.0 * n), "nc: eps too large");
  const int m = static_cast<int>(
      std::floor(Delta * L * std::sqrt(alpha) / (40824.0 * n * eps * eps)));
  require(m >= 2, "nc: derived m < 2");
  const double lambda = 3888.0 * n * eps * eps / (L * std::pow(alpha, 1.5));
  const double beta = std::sqrt(3.0 * lambda * n / L);
  FiniteSumInstance inst = scaled_quad(Kind::NC, m + 1, std::pow(alpha, 0.25), 0.0, 0.0, alpha,
                                       std::sqrt(alpha), n, lambda, beta, kInf, dist);
  inst.base.alpha = alpha;
  inst.base.eps = eps;
  inst.base.Delta = Delta;
  inst.regularity.L = std::min(inst.regularity.L, L);
  if (inst.regularity.mu_x < -mu) inst.regularity.mu_x = -mu;
  return inst;
}

FiniteSumInstance make_nc_avg(double L_prime, double mu, double Delta, double eps, int n,
                              const Dist& dist) {
  require(n >= 2, "nc_avg: need n >= 2");
  require(L_prime > 0.0 && mu > 0.0 && Delta > 0.0 && eps > 0.0, "nc_avg: bad parameters");
  const double rn = std::sqrt(double(n));
  const double alpha = std::min({1.0, 8.0 * (std::sqrt(3.0) + 1.0) * rn * mu / (45.0 * L_prime),
                                 std::sqrt(n / 270.0)});
  require(eps * eps <= Delta * L_prime * alpha / (435456.0 * rn), "nc_avg: eps too large");
  const int m = static_cast<int>(
      std::floor(Delta * L_prime * std::sqrt(alpha) / (217728.0 * rn * eps * eps)));
  require(m >= 2, "nc_avg: derived m < 2");
  const double lambda = 20736.0 * rn * eps * eps / (L_prime * std::pow(alpha, 1.5));
  const double beta = 4.0 * std::sqrt(lambda * rn / L_prime);
  FiniteSumInstance inst =
      scaled_quad(Kind::NC_AVG, m + 1, std::pow(alpha, 0.25), 0.0, 0.0, alpha,
                  std::sqrt(alpha), n, lambda, beta, kInf, dist);
  inst.base.alpha = alpha;
  inst.base.eps = eps;
  inst.base.Delta = Delta;
  inst.regularity.L_avg = std::min(inst.regularity.L_avg, L_prime);
  if (inst.regularity.mu_x < -mu) inst.regularity.mu_x = -mu;
  return inst;
}

FiniteSumInstance make_sc_avg(double L_prime, double mu, double R, int n, int m,
                              const Dist& dist) {
  require(n >= 4, "sc_avg: need n >= 4");
  require(mu > 0.0 && L_prime / mu >= 2.0, "sc_avg: need L'/mu >= 2");
  const double L = std::sqrt(n * (L_prime * L_prime - mu * mu) / 2.0 - mu * mu);
  FiniteSumInstance inst = make_sc(L, mu, R, n, m, dist);
  inst.regularity.L_avg = L_prime;
  return inst;
}

FiniteSumInstance make_c_avg(double L_prime, double R, int n, int m, const Dist& dist) {
  FiniteSumInstance inst = make_c(std::sqrt(n / 2.0) * L_prime, R, n, m, dist);
  inst.regularity.L_avg = L_prime;
  return inst;
}

FiniteSumInstance make_scsc_avg(double L_prime, double mu_x, double mu_y, double Rx, double Ry,
                                int n, int m, const Dist& dist) {
  require(n >= 4, "scsc_avg: need n >= 4");
  require(mu_x > 0.0 && L_prime / mu_x >= 2.0, "scsc_avg: need L'/mu_x >= 2");
  const double L = std::sqrt(n * (L_prime * L_prime - 2.0 * mu_x * mu_x) / 2.0 +
                             2.0 * mu_x * mu_x);
  FiniteSumInstance inst = make_scsc(L, mu_x, mu_y, Rx, Ry, n, m, dist);
  inst.regularity.L_avg = L_prime;
  return inst;
}

FiniteSumInstance make_csc_avg(double L_prime, double mu_y, double Rx, double Ry, int n, int m,
                               const Dist& dist) {
  require(n >= 4, "csc_avg: need n >= 4");
  require(mu_y > 0.0 && L_prime / mu_y >= 2.0, "csc_avg: need L'/mu_y >= 2");
  const double L = std::sqrt(n * (L_prime * L_prime - 2.0 * mu_y * mu_y) / 2.0 +
                             2.0 * mu_y * mu_y);
  FiniteSumInstance inst = make_csc(L, mu_y, Rx, Ry, n, m, dist);
  inst.regularity.L_avg = L_prime;
  return inst;
}

FiniteSumInstance make_cc_avg(double L_prime, double Rx, double Ry, int n, int m,
                              const Dist& dist) {
  FiniteSumInstance inst = make_cc(std::sqrt(n / 2.0) * L_prime, Rx, Ry, n, m, dist);
  inst.regularity.L_avg = L_prime;
  return inst;
}

// -------------------------------------------------------------------------
// Separable and one-dimensional instances
// -------------------------------------------------------------------------

namespace {

FiniteSumInstance make_separable(Kind kind, double x_coef, FiniteSumInstance wrapped,
                                 double Rx, double Ry, bool quad_in_x) {
  FiniteSumInstance inst;
  inst.kind = kind;
  inst.family = Family::Separable;
  inst.n = wrapped.n;
  inst.sep_coef = x_coef;
  auto inner = std::make_shared<FiniteSumInstance>(std::move(wrapped));
  if (quad_in_x) {
    inst.dim_x = inner->dim_x;  // quadratic block in x, wrapped instance in y
    inst.dim_y = inner->dim_x;
  } else {
    inst.dim_x = inner->dim_x;  // wrapped instance in x, quadratic block in y
    inst.dim_y = inner->dim_x;
  }
  inst.feasible = {Rx, Ry};
  inst.distribution = inner->distribution;
  inst.gamma_max = inner->gamma_max;
  inst.scale = inner->scale;
  inst.inner = inner;
  return inst;
}

}  // namespace

FiniteSumInstance make_sep_scsc(double L, double mu_x, double mu_y, double Rx, double Ry,
                                int n, int m, const Dist& dist) {
  require(mu_x > 0.0 && mu_x <= L, "sep_scsc: need 0 < mu_x <= L");
  FiniteSumInstance wrapped = make_sc(L, mu_y, Ry, n, m, dist);
  FiniteSumInstance inst =
      make_separable(Kind::SEP_SCSC, mu_x, std::move(wrapped), Rx, Ry, true);
  inst.regularity = {L, std::max(mu_x, inst.inner->regularity.L_avg), mu_x, mu_y};
  return inst;
}

FiniteSumInstance make_sep_csc(double L, double mu_y, double Rx, double Ry, int n, int m,
                               const Dist& dist) {
  require(mu_y > 0.0 && mu_y <= L, "sep_csc: need 0 < mu_y <= L");
  FiniteSumInstance wrapped = make_c(L, Rx, n, m, dist);
  FiniteSumInstance inst =
      make_separable(Kind::SEP_CSC, mu_y, std::move(wrapped), Rx, Ry, false);
  inst.regularity = {L, std::max(mu_y, inst.inner->regularity.L_avg), 0.0, mu_y};
  return inst;
}

FiniteSumInstance make_sep_csc_xquad(double L, double mu_y, double Rx, double Ry, int n, int m,
                                     const Dist& dist) {
  require(mu_y > 0.0 && mu_y <= L, "sep_csc_xquad: need 0 < mu_y <= L");
  FiniteSumInstance wrapped = make_sc(L, mu_y, Ry, n, m, dist);
  FiniteSumInstance inst =
      make_separable(Kind::SEP_CSC_XQUAD, L, std::move(wrapped), Rx, Ry, true);
  inst.regularity = {L, std::max(L, inst.inner->regularity.L_avg), 0.0, mu_y};
  return inst;
}

namespace {

FiniteSumInstance make_one_d(Kind kind, double L, int n, double Rx, double Ry,
                             const Dist& dist) {
  require(n >= 2, "one_d: need n >= 2");
  require(L > 0.0 && Rx > 0.0, "one_d: bad parameters");
  FiniteSumInstance inst;
  inst.kind = kind;
  inst.family = Family::Scalar1d;
  inst.n = n;
  inst.dim_x = 1;
  inst.dim_y = (kind == Kind::ONE_D_SC) ? 0 : 1;
  inst.base.c1 = L;
  inst.feasible = {Rx, Ry};
  inst.regularity.L = L;
  inst.regularity.L_avg = L;  // identical quadratic parts, linear shifts drop out
  inst.distribution = sorted_distribution(n, dist);
  inst.gamma_max = kInf;
  return inst;
}

}  // namespace

FiniteSumInstance make_one_d_scsc(double L, int n, double Rx, double Ry, const Dist& dist) {
  FiniteSumInstance inst = make_one_d(Kind::ONE_D_SCSC, L, n, Rx, Ry, dist);
  inst.regularity.mu_x = L;
  inst.regularity.mu_y = L;
  return inst;
}

FiniteSumInstance make_one_d_cc(double L, int n, double Rx, double Ry, const Dist& dist) {
  return make_one_d(Kind::ONE_D_CC, L, n, Rx, Ry, dist);
}

FiniteSumInstance make_one_d_sc(double L, double R, int n, const Dist& dist) {
  FiniteSumInstance inst = make_one_d(Kind::ONE_D_SC, L, n, R, kInf, dist);
  inst.regularity.mu_x = L;
  return inst;
}

// -------------------------------------------------------------------------
// Evaluation
// -------------------------------------------------------------------------

namespace {

// tilde family base terms at (xb, yb); b rows built with (m, 0, zeta).
double tilde_value_base(const BaseParams& bp, int n, int i, const Vec& xb, const Vec& yb) {
  const int m = bp.m;
  double v = 0.0;
  for (int l = (i - 1) % n; l <= m; l += n) {
    if (l == 0) continue;
    const double rd = (l < m) ? xb[l - 1] - xb[l] : bp.zeta * xb[m - 1];
    v += double(n) * yb[l - 1] * rd;
  }
  v += 0.5 * bp.c1 * xb.squaredNorm() - 0.5 * bp.c2 * yb.squaredNorm();
  if (i == 1) v -= double(n) * xb[0];
  return v;
}

void tilde_grad_base(const BaseParams& bp, int n, int i, const Vec& xb, const Vec& yb, Vec& gx,
                     Vec& gy) {
  const int m = bp.m;
  gx = bp.c1 * xb;
  gy = -bp.c2 * yb;
  for (int l = (i - 1) % n; l <= m; l += n) {
    if (l == 0) continue;
    if (l < m) {
      const double yl = yb[l - 1];
      gx[l - 1] += double(n) * yl;
      gx[l] -= double(n) * yl;
      gy[l - 1] += double(n) * (xb[l - 1] - xb[l]);
    } else {
      gx[m - 1] += double(n) * bp.zeta * yb[m - 1];
      gy[m - 1] += double(n) * bp.zeta * xb[m - 1];
    }
  }
  if (i == 1) gx[0] -= double(n);
}

// hat family base terms; b rows built with (m, omega, 0); the coupling pairs
// row l with coordinate l+1 and the potential skips the last coordinate.
double hat_value_base(const BaseParams& bp, int n, int i, const Vec& xb, const Vec& yb) {
  const int m = bp.m;
  double v = 0.0;
  for (int l = (i - 1) % n; l < m; l += n) {
    const double rd = (l == 0) ? bp.omega * xb[0] : xb[l - 1] - xb[l];
    v += double(n) * yb[l] * rd;
  }
  v -= 0.5 * bp.c1 * yb.squaredNorm();
  for (int j = 0; j + 1 < m; ++j) v += bp.c2 * gamma_value(bp.c3 * xb[j]);
  if (i == 1) v -= double(n) * yb[0];
  return v;
}

void hat_grad_base(const BaseParams& bp, int n, int i, const Vec& xb, const Vec& yb, Vec& gx,
                   Vec& gy) {
  const int m = bp.m;
  gx = Vec::Zero(m);
  gy = -bp.c1 * yb;
  for (int l = (i - 1) % n; l < m; l += n) {
    if (l == 0) {
      gx[0] += double(n) * bp.omega * yb[0];
      gy[0] += double(n) * bp.omega * xb[0];
    } else {
      const double yl = yb[l];
      gx[l - 1] += double(n) * yl;
      gx[l] -= double(n) * yl;
      gy[l] += double(n) * (xb[l - 1] - xb[l]);
    }
  }
  for (int j = 0; j + 1 < m; ++j) gx[j] += bp.c2 * bp.c3 * gamma_deriv(bp.c3 * xb[j]);
  if (i == 1) gy[0] -= double(n);
}

// quad (minimization) family base terms; rows built with (m, omega, zeta).
double quad_value_base(const BaseParams& bp, int n, int i, const Vec& xb) {
  const int m = bp.m;
  double v = 0.0;
  for (int l = (i - 1) % n; l <= m; l += n) {
    double rd;
    if (l == 0) rd = bp.omega * xb[0];
    else if (l == m) rd = bp.zeta * xb[m - 1];
    else rd = xb[l - 1] - xb[l];
    v += 0.5 * double(n) * rd * rd;
  }
  v += 0.5 * bp.c1 * xb.squaredNorm();
  if (bp.c2 != 0.0)
    for (int j = 0; j + 1 < m; ++j) v += bp.c2 * gamma_value(xb[j]);
  if (i == 1) v -= bp.c3 * double(n) * xb[0];
  return v;
}

void quad_grad_base(const BaseParams& bp, int n, int i, const Vec& xb, Vec& gx) {
  const int m = bp.m;
  gx = bp.c1 * xb;
  for (int l = (i - 1) % n; l <= m; l += n) {
    if (l == 0) {
      gx[0] += double(n) * bp.omega * bp.omega * xb[0];
    } else if (l == m) {
      gx[m - 1] += double(n) * bp.zeta * bp.zeta * xb[m - 1];
    } else {
      const double rd = xb[l - 1] - xb[l];
      gx[l - 1] += double(n) * rd;
      gx[l] -= double(n) * rd;
    }
  }
  if (bp.c2 != 0.0)
    for (int j = 0; j + 1 < m; ++j) gx[j] += bp.c2 * gamma_deriv(xb[j]);
  if (i == 1) gx[0] -= bp.c3 * double(n);
}

double one_d_value(const FiniteSumInstance& inst, int i, double x, double y) {
  const double L = inst.base.c1;
  const double n = inst.n;
  switch (inst.kind) {
    case Kind::ONE_D_SCSC: {
      double v = 0.5 * L * (x * x - y * y);
      if (i == 1) v -= n * L * inst.feasible.Rx * x;
      return v;
    }
    case Kind::ONE_D_CC: {
      double v = L * x * y;
      if (i == 1) v -= n * L * inst.feasible.Rx * y;
      return v;
    }
    case Kind::ONE_D_SC: {
      double v = 0.5 * L * x * x;
      if (i == 1) v -= n * L * inst.feasible.Rx * x;
      return v;
    }
    default: throw std::logic_error("one_d_value: not a 1-D kind");
  }
}

}  // namespace

double component_value(const FiniteSumInstance& inst, int i, const Vec& x, const Vec& y) {
  if (i < 1 || i > inst.n) throw std::out_of_range("component index out of range");
  const double lb = inst.scale.lambda;
  switch (inst.family) {
    case Family::BilinearChain:
      return lb * tilde_value_base(inst.base, inst.n, i, x / inst.scale.beta,
                                   y / inst.scale.beta);
    case Family::NonconvexChain:
      return lb * hat_value_base(inst.base, inst.n, i, x / inst.scale.beta,
                                 y / inst.scale.beta);
    case Family::QuadChain:
      return lb * quad_value_base(inst.base, inst.n, i, x / inst.scale.beta);
    case Family::Separable: {
      const bool quad_in_x = inst.kind != Kind::SEP_CSC;
      if (quad_in_x)
        return 0.5 * inst.sep_coef * x.squaredNorm() - component_value(*inst.inner, i, y);
      return component_value(*inst.inner, i, x) - 0.5 * inst.sep_coef * y.squaredNorm();
    }
    case Family::Scalar1d:
      return one_d_value(inst, i, x[0], inst.dim_y > 0 ? y[0] : 0.0);
  }
  throw std::logic_error("component_value: unknown family");
}

ComponentEval component_eval(const FiniteSumInstance& inst, int i, const Vec& x,
                             const Vec& y) {
  if (i < 1 || i > inst.n) throw std::out_of_range("component index out of range");
  ComponentEval out;
  out.index = i;
  out.value = component_value(inst, i, x, y);
  const double lb = inst.scale.lambda, beta = inst.scale.beta;
  const double gscale = lb / beta;
  switch (inst.family) {
    case Family::BilinearChain: {
      Vec gx, gy;
      tilde_grad_base(inst.base, inst.n, i, x / beta, y / beta, gx, gy);
      out.grad_x = gscale * gx;
      out.grad_y = gscale * gy;
      break;
    }
    case Family::NonconvexChain: {
      Vec gx, gy;
      hat_grad_base(inst.base, inst.n, i, x / beta, y / beta, gx, gy);
      out.grad_x = gscale * gx;
      out.grad_y = gscale * gy;
      break;
    }
    case Family::QuadChain: {
      Vec gx;
      quad_grad_base(inst.base, inst.n, i, x / beta, gx);
      out.grad_x = gscale * gx;
      out.grad_y = Vec();
      break;
    }
    case Family::Separable: {
      const bool quad_in_x = inst.kind != Kind::SEP_CSC;
      if (quad_in_x) {
        ComponentEval innerv = component_eval(*inst.inner, i, y, Vec());
        out.grad_x = inst.sep_coef * x;
        out.grad_y = -innerv.grad_x;
      } else {
        ComponentEval innerv = component_eval(*inst.inner, i, x, Vec());
        out.grad_x = innerv.grad_x;
        out.grad_y = -inst.sep_coef * y;
      }
      break;
    }
    case Family::Scalar1d: {
      const double L = inst.base.c1;
      const double nn = inst.n;
      out.grad_x = Vec::Zero(1);
      if (inst.dim_y > 0) out.grad_y = Vec::Zero(1);
      if (inst.kind == Kind::ONE_D_SCSC) {
        out.grad_x[0] = L * x[0] - (i == 1 ? nn * L * inst.feasible.Rx : 0.0);
        out.grad_y[0] = -L * y[0];
      } else if (inst.kind == Kind::ONE_D_CC) {
        out.grad_x[0] = L * y[0];
        out.grad_y[0] = L * x[0] - (i == 1 ? nn * L * inst.feasible.Rx : 0.0);
      } else {
        out.grad_x[0] = L * x[0] - (i == 1 ? nn * L * inst.feasible.Rx : 0.0);
      }
      break;
    }
  }
  return out;
}

double aggregate_value(const FiniteSumInstance& inst, const Vec& x, const Vec& y) {
  const double lb = inst.scale.lambda, beta = inst.scale.beta;
  switch (inst.family) {
    case Family::BilinearChain: {
      const Vec xb = x / beta, yb = y / beta;
      const BaseParams& bp = inst.base;
      double v = 0.0;
      for (int l = 1; l <= bp.m; ++l) {
        const double rd = (l < bp.m) ? xb[l - 1] - xb[l] : bp.zeta * xb[bp.m - 1];
        v += yb[l - 1] * rd;
      }
      v += 0.5 * bp.c1 * xb.squaredNorm() - 0.5 * bp.c2 * yb.squaredNorm() - xb[0];
      return lb * v;
    }
    case Family::NonconvexChain: {
      const Vec xb = x / beta, yb = y / beta;
      const BaseParams& bp = inst.base;
      double v = 0.0;
      for (int l = 0; l < bp.m; ++l) {
        const double rd = (l == 0) ? bp.omega * xb[0] : xb[l - 1] - xb[l];
        v += yb[l] * rd;
      }
      v -= 0.5 * bp.c1 * yb.squaredNorm();
      for (int j = 0; j + 1 < bp.m; ++j) v += bp.c2 * gamma_value(bp.c3 * xb[j]);
      v -= yb[0];
      return lb * v;
    }
    case Family::QuadChain: {
      const Vec xb = x / beta;
      const BaseParams& bp = inst.base;
      double v = 0.0;
      for (int l = 0; l <= bp.m; ++l) {
        double rd;
        if (l == 0) rd = bp.omega * xb[0];
        else if (l == bp.m) rd = bp.zeta * xb[bp.m - 1];
        else rd = xb[l - 1] - xb[l];
        v += 0.5 * rd * rd;
      }
      v += 0.5 * bp.c1 * xb.squaredNorm();
      if (bp.c2 != 0.0)
        for (int j = 0; j + 1 < bp.m; ++j) v += bp.c2 * gamma_value(xb[j]);
      v -= bp.c3 * xb[0];
      return lb * v;
    }
    case Family::Separable: {
      const bool quad_in_x = inst.kind != Kind::SEP_CSC;
      if (quad_in_x) return 0.5 * inst.sep_coef * x.squaredNorm() - aggregate_value(*inst.inner, y);
      return aggregate_value(*inst.inner, x) - 0.5 * inst.sep_coef * y.squaredNorm();
    }
    case Family::Scalar1d: {
      const double L = inst.base.c1, Rx = inst.feasible.Rx;
      if (inst.kind == Kind::ONE_D_SCSC) return 0.5 * L * (x[0] * x[0] - y[0] * y[0]) - L * Rx * x[0];
      if (inst.kind == Kind::ONE_D_CC) return L * x[0] * y[0] - L * Rx * y[0];
      return 0.5 * L * x[0] * x[0] - L * Rx * x[0];
    }
  }
  throw std::logic_error("aggregate_value: unknown family");
}

void aggregate_grad(const FiniteSumInstance& inst, const Vec& x, const Vec& y, Vec& gx,
                    Vec& gy) {
  gx = Vec::Zero(inst.dim_x);
  gy = Vec::Zero(inst.dim_y);
  for (int i = 1; i <= inst.n; ++i) {
    ComponentEval e = component_eval(inst, i, x, y);
    gx += e.grad_x;
    if (inst.dim_y > 0) gy += e.grad_y;
  }
  gx /= inst.n;
  if (inst.dim_y > 0) gy /= inst.n;
}

double aggregate_value(const FiniteSumInstance& inst, const Vec& x) {
  return aggregate_value(inst, x, Vec());
}

Vec aggregate_grad(const FiniteSumInstance& inst, const Vec& x) {
  Vec gx, gy;
  aggregate_grad(inst, x, Vec(), gx, gy);
  return gx;
}

std::vector<double> distribution_cdf(const FiniteSumInstance& inst) {
  std::vector<double> cdf(inst.distribution.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < cdf.size(); ++i) {
    acc += inst.distribution[i];
    cdf[i] = acc;
  }
  cdf.back() = 1.0;
  return cdf;
}

// -------------------------------------------------------------------------
// Serialization
// -------------------------------------------------------------------------

namespace {

nlohmann::json instance_record(const FiniteSumInstance& inst) {
  nlohmann::json j;
  j["kind"] = kind_name(inst.kind);
  j["n"] = inst.n;
  j["dim_x"] = inst.dim_x;
  j["dim_y"] = inst.dim_y;
  j["scale"] = {{"lambda", inst.scale.lambda}, {"beta", inst.scale.beta}};
  j["base"] = {{"m", inst.base.m},     {"omega", inst.base.omega}, {"zeta", inst.base.zeta},
               {"c1", inst.base.c1},   {"c2", inst.base.c2},       {"c3", inst.base.c3},
               {"alpha", inst.base.alpha}, {"eps", inst.base.eps}, {"Delta", inst.base.Delta}};
  j["feasible"] = {{"Rx", inst.feasible.Rx == kInf ? -1.0 : inst.feasible.Rx},
                   {"Ry", inst.feasible.Ry == kInf ? -1.0 : inst.feasible.Ry}};
  j["regularity"] = {{"L", inst.regularity.L},
                     {"L_avg", inst.regularity.L_avg},
                     {"mu_x", inst.regularity.mu_x},
                     {"mu_y", inst.regularity.mu_y}};
  j["distribution"] = inst.distribution;
  j["gamma_max"] = inst.gamma_max == kInf ? -1.0 : inst.gamma_max;
  j["sep_coef"] = inst.sep_coef;
  if (inst.inner) j["inner"] = instance_record(*inst.inner);
  return j;
}

FiniteSumInstance instance_from_record(const nlohmann::json& j) {
  FiniteSumInstance inst;
  inst.kind = kind_from_name(j.at("kind").get<std::string>());
  switch (inst.kind) {
    case Kind::BILINEAR_BASE: case Kind::SCSC: case Kind::CSC: case Kind::CC:
      inst.family = Family::BilinearChain; break;
    case Kind::NONCONVEX_BASE: case Kind::NCSC: case Kind::NCSC_AVG:
      inst.family = Family::NonconvexChain; break;
    case Kind::QUAD_BASE: case Kind::SC: case Kind::C: case Kind::NC: case Kind::NC_AVG:
      inst.family = Family::QuadChain; break;
    case Kind::SEP_SCSC: case Kind::SEP_CSC: case Kind::SEP_CSC_XQUAD:
      inst.family = Family::Separable; break;
    default: inst.family = Family::Scalar1d; break;
  }
  inst.n = j.at("n").get<int>();
  inst.dim_x = j.at("dim_x").get<int>();
  inst.dim_y = j.at("dim_y").get<int>();
  inst.scale.lambda = j.at("scale").at("lambda").get<double>();
  inst.scale.beta = j.at("scale").at("beta").get<double>();
  const auto& b = j.at("base");
  inst.base.m = b.at("m").get<int>();
  inst.base.omega = b.at("omega").get<double>();
  inst.base.zeta = b.at("zeta").get<double>();
  inst.base.c1 = b.at("c1").get<double>();
  inst.base.c2 = b.at("c2").get<double>();
  inst.base.c3 = b.at("c3").get<double>();
  inst.base.alpha = b.at("alpha").get<double>();
  inst.base.eps = b.at("eps").get<double>();
  inst.base.Delta = b.at("Delta").get<double>();
  const double rx = j.at("feasible").at("Rx").get<double>();
  const double ry = j.at("feasible").at("Ry").get<double>();
  inst.feasible.Rx = rx < 0 ? kInf : rx;
  inst.feasible.Ry = ry < 0 ? kInf : ry;
  inst.regularity.L = j.at("regularity").at("L").get<double>();
  inst.regularity.L_avg = j.at("regularity").at("L_avg").get<double>();
  inst.regularity.mu_x = j.at("regularity").at("mu_x").get<double>();
  inst.regularity.mu_y = j.at("regularity").at("mu_y").get<double>();
  inst.distribution = j.at("distribution").get<std::vector<double>>();
  const double gm = j.at("gamma_max").get<double>();
  inst.gamma_max = gm < 0 ? kInf : gm;
  inst.sep_coef = j.at("sep_coef").get<double>();
  if (j.contains("inner"))
    inst.inner = std::make_shared<FiniteSumInstance>(instance_from_record(j.at("inner")));
  return inst;
}

}  // namespace

std::string instance_to_json(const FiniteSumInstance& inst, std::uint64_t seed) {
  nlohmann::json j;
  j["schema"] = "pifolab-instance-v1";
  j["seed"] = seed;
  j["instance"] = instance_record(inst);
  return j.dump(2);
}

FiniteSumInstance instance_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  if (j.at("schema").get<std::string>() != "pifolab-instance-v1")
    throw std::invalid_argument("unsupported instance schema");
  return instance_from_record(j.at("instance"));
}

}  // namespace pifo
