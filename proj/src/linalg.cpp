#include "pifolab/linalg.hpp"

#include <cmath>
#include <stdexcept>

namespace pifo {

Vec project_ball(const Vec& v, double R) {
  if (!(R > 0.0)) throw std::invalid_argument("project_ball: R must be positive");
  if (R == kInf) return v;
  const double nrm = v.norm();
  // a few ulps of slack keep the map exactly idempotent on its own output
  if (nrm <= R * (1.0 + 4.0 * std::numeric_limits<double>::epsilon())) return v;
  return (R / nrm) * v;
}

Vec solve_tridiagonal(const std::vector<double>& diag, const std::vector<double>& sub,
                      const std::vector<double>& sup, const std::vector<double>& rhs) {
  const std::size_t n = diag.size();
  if (sub.size() + 1 != n || sup.size() + 1 != n || rhs.size() != n)
    throw std::invalid_argument("solve_tridiagonal: size mismatch");
  std::vector<double> cp(n, 0.0), dp(n, 0.0);
  double den = diag[0];
  if (std::abs(den) < 1e-300) throw std::runtime_error("solve_tridiagonal: singular system");
  cp[0] = (n > 1) ? sup[0] / den : 0.0;
  dp[0] = rhs[0] / den;
  for (std::size_t i = 1; i < n; ++i) {
    den = diag[i] - sub[i - 1] * cp[i - 1];
    if (std::abs(den) < 1e-300) throw std::runtime_error("solve_tridiagonal: singular system");
    if (i + 1 < n) cp[i] = sup[i] / den;
    dp[i] = (rhs[i] - sub[i - 1] * dp[i - 1]) / den;
  }
  Vec x(n);
  x[n - 1] = dp[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = dp[i] - cp[i] * x[i + 1];
  return x;
}

double ball_max_quadratic(const Vec& c, double mu, double R) {
  const double nc = c.norm();
  if (mu <= 0.0) {
    if (R == kInf) throw std::invalid_argument("ball_max_quadratic: unbounded problem");
    return R * nc - 0.5 * mu * R * R;
  }
  if (nc / mu <= R) return 0.5 * nc * nc / mu;
  return R * nc - 0.5 * mu * R * R;
}

Vec ball_max_quadratic_arg(const Vec& c, double mu, double R) {
  const double nc = c.norm();
  if (mu <= 0.0) {
    if (R == kInf) throw std::invalid_argument("ball_max_quadratic: unbounded problem");
    if (nc == 0.0) return Vec::Zero(c.size());
    return (R / nc) * c;
  }
  if (nc / mu <= R) return c / mu;
  return (R / nc) * c;
}

}  // namespace pifo
