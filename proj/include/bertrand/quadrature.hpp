#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "bertrand/error.hpp"

namespace bertrand::quadrature {

struct Rule {
  std::vector<double> nodes;  // on [-1, 1], ascending
  std::vector<double> weights;
};

inline constexpr int kMinOrder = 8;
inline constexpr int kMaxOrder = 1024;

// Gauss-Legendre rule with n nodes. Power-of-two orders in
// [kMinOrder, kMaxOrder] are computed once and cached.
const Rule& gauss_legendre(int n);

struct Estimate {
  double value = 0.0;
  double err_est = 0.0;
  int order = 0;
};

// Integral of f over [a, b] with Gauss-Legendre order doubling 8, 16, ...,
// 1024 until two successive estimates differ by less than tol (absolute).
// err_est is that last difference. Throws ToleranceNotMet otherwise.
template <class F>
Estimate integrate(F&& f, double a, double b, double tol) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double previous = NAN;
  double last_diff = INFINITY;
  for (int n = kMinOrder; n <= kMaxOrder; n *= 2) {
    const Rule& rule = gauss_legendre(n);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
    const double value = half * sum;
    if (!std::isfinite(value)) {
      throw Error(ErrorCode::ToleranceNotMet, "non-finite quadrature estimate at order " + num(n));
    }
    if (n > kMinOrder) {
      last_diff = std::abs(value - previous);
      if (last_diff < tol) return {value, last_diff, n};
    }
    previous = value;
  }
  throw Error(ErrorCode::ToleranceNotMet, "order " + num(kMaxOrder) + " reached, last difference " +
                                              num(last_diff) + " vs tol " + num(tol));
}

// Integrals with inverse-square-root endpoint behavior over [lo, hi] are
// taken in theta after lo + (hi - lo) sin^2(theta), theta in [0, pi/2].
// `f(theta)` must already include the Jacobian.
template <class F>
Estimate integrate_sin2(F&& f, double tol) {
  return integrate(std::forward<F>(f), 0.0, 0.5 * std::numbers::pi, tol);
}

// Offsets of the mapped point from both ends, computed without forming
// lo + u and subtracting lo again.
struct Sin2Point {
  double from_lo;  // (hi - lo) sin^2
  double from_hi;  // (hi - lo) cos^2
  double jacobian; // (hi - lo) sin(2 theta)
};

inline Sin2Point sin2_point(double width, double theta) {
  const double s = std::sin(theta);
  const double c = std::cos(theta);
  return {width * s * s, width * c * c, 2.0 * width * s * c};
}

}  // namespace bertrand::quadrature
