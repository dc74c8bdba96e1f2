#ifndef PIFOLAB_GAMMA_HPP
#define PIFOLAB_GAMMA_HPP

#include <cmath>

namespace pifo {

// Scalar nonconvex potential used by the nonconvex chain instances:
// an antiderivative of 120 t^2 (t - 1) / (1 + t^2), normalized so the
// value at 1 is zero.  It is 180-smooth and -45(sqrt(3)-1)-weakly convex.

inline double gamma_deriv(double x) {
  return 120.0 * x * x * (x - 1.0) / (1.0 + x * x);
}

inline double gamma_second(double x) {
  const double s = 1.0 + x * x;
  return 120.0 * (x * x * x * x + 3.0 * x * x - 2.0 * x) / (s * s);
}

inline double gamma_value(double x) {
  // Exact closed form of the integral from 1 to x.
  const double at_x = 0.5 * x * x - x - 0.5 * std::log1p(x * x) + std::atan(x);
  const double at_1 = 0.5 - 1.0 - 0.5 * std::log(2.0) + std::atan(1.0);
  return 120.0 * (at_x - at_1);
}

inline constexpr double kGammaSmoothness = 180.0;
// -45 (sqrt(3) - 1): the weak convexity modulus of the potential.
inline const double kGammaWeakConvexity = -45.0 * (std::sqrt(3.0) - 1.0);

}  // namespace pifo

#endif
