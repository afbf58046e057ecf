#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <string>

#include "bertrand/error.hpp"

namespace bertrand::ode {

// Dormand-Prince 5(4) with error control on the embedded 4th-order
// solution. Fixed-size Eigen states; the right-hand side is f(t, y).
template <int N>
class Dopri5 {
 public:
  using State = Eigen::Matrix<double, N, 1>;

  struct Options {
    double rtol = 1e-10;
    double atol = 1e-10;
    double h_init = 0.0;  // 0 picks a start step from the tolerance
    double h_max = INFINITY;
    long max_steps = 10'000'000;
  };

  struct Trial {
    State y;
    double err;  // scaled error norm, accept when <= 1
  };

  // One trial step of size h from (t, y).
  template <class F>
  static Trial step(F&& f, double t, const State& y, double h, const Options& opt) {
    const State k1 = f(t, y);
    const State k2 = f(t + c2 * h, y + h * (a21 * k1));
    const State k3 = f(t + c3 * h, y + h * (a31 * k1 + a32 * k2));
    const State k4 = f(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const State k5 = f(t + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const State k6 = f(t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const State y1 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const State k7 = f(t + h, y1);
    const State e = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    double err = 0.0;
    for (int i = 0; i < N; ++i) {
      const double scale = opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(y1[i]));
      err = std::max(err, std::abs(e[i]) / scale);
    }
    return {y1, err};
  }

  // Adaptive integration from t0 towards t1 (t1 > t0). After every
  // accepted step calls on_step(t_prev, y_prev, t, y); returning false
  // stops the run. Returns the last accepted time.
  template <class F, class OnStep>
  static double integrate(F&& f, double t0, double t1, State y, const Options& opt, OnStep&& on_step) {
    double t = t0;
    double h = opt.h_init > 0.0 ? opt.h_init : std::min(1e-2 * (t1 - t0), std::cbrt(opt.rtol));
    h = std::min(h, opt.h_max);
    for (long n = 0; n < opt.max_steps && t < t1; ++n) {
      const bool last = t + h >= t1;
      const double hh = last ? t1 - t : h;
      const Trial trial = step(f, t, y, hh, opt);
      if (!std::isfinite(trial.err)) {
        h *= 0.1;
      } else if (trial.err <= 1.0) {
        const double t_prev = t;
        const State y_prev = y;
        t = last ? t1 : t + hh;
        y = trial.y;
        if (!on_step(t_prev, y_prev, t, y)) return t;
        h = hh * std::clamp(0.9 * std::pow(std::max(trial.err, 1e-10), -0.2), 0.2, 5.0);
        h = std::min(h, opt.h_max);
        continue;
      } else {
        h = hh * std::clamp(0.9 * std::pow(trial.err, -0.25), 0.1, 0.9);
      }
      if (h < 1e-14 * std::max(1.0, std::abs(t))) {
        throw Error(ErrorCode::IntegrationFailure, "step size underflow at t = " + num(t));
      }
    }
    if (t < t1) throw Error(ErrorCode::IntegrationFailure, "step budget exhausted at t = " + num(t));
    return t;
  }

  // Root of g(y(t + s)) for s in (0, h], given a sign change over the step.
  // Each trial state is a fresh single step of size s from (t, y).
  template <class F, class G>
  static double locate(F&& f, G&& g, double t, const State& y, double h, const Options& opt) {
    double lo = 0.0;
    double hi = h;
    double g_lo = g(y);
    double g_hi = g(step(f, t, y, h, opt).y);
    int side = 0;
    for (int i = 0; i < 100 && hi - lo > 4e-16 * std::max(1.0, std::abs(t + hi)); ++i) {
      double s = lo + (hi - lo) * g_lo / (g_lo - g_hi);
      if (!(s > lo && s < hi)) s = 0.5 * (lo + hi);
      const double g_s = g(step(f, t, y, s, opt).y);
      if (g_s == 0.0) return s;
      // Illinois variant of regula falsi
      if ((g_s < 0.0) == (g_lo < 0.0)) {
        lo = s;
        g_lo = g_s;
        if (side == -1) g_hi *= 0.5;
        side = -1;
      } else {
        hi = s;
        g_hi = g_s;
        if (side == 1) g_lo *= 0.5;
        side = 1;
      }
    }
    return std::abs(g_lo) < std::abs(g_hi) ? lo : hi;
  }

 private:
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                          b6 = 11.0 / 84;
  // b - b_hat
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                          e6 = 22.0 / 525, e7 = -1.0 / 40;
};

}  // namespace bertrand::ode
