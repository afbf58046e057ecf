#include "bertrand/fractional.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "bertrand/error.hpp"

namespace bertrand {

namespace {

const double kInvSqrtPi = 1.0 / std::sqrt(std::numbers::pi);

void check_energy(const EnergyFunction& g, double E) {
  if (!g.eval) throw Error(ErrorCode::DomainError, "energy function has no evaluator");
  if (!std::isfinite(E) || E < g.base) {
    throw Error(ErrorCode::DomainError,
                "E = " + num(E) + " below base " + num(g.base));
  }
}

}  // namespace

quadrature::Estimate abel_kernel(const std::function<double(double)>& f_of_offset, double span, double tol) {
  const double scale = 2.0 * std::sqrt(span);
  return quadrature::integrate_sin2(
      [&](double theta) {
        const double s = std::sin(theta);
        return scale * s * f_of_offset(span * s * s);
      },
      tol);
}

double central_derivative(const EnergyFunction& g, double w, double E) {
  double h = std::max(1e-6, 1e-6 * std::abs(E - g.base));
  // Near the base the step scales with the offset, so the stencil error
  // stays a fixed small fraction for power-like g (2h = u / 50).
  h = std::min(h, 0.01 * (w - g.base));
  if (!(h > 0.0)) throw Error(ErrorCode::DomainError, "derivative requested at the base point");
  // A power of two at or above ulp(w) makes w +- h and w +- 2h exact.
  h = std::max(std::exp2(std::floor(std::log2(h))), 2.0 * std::numeric_limits<double>::epsilon() * std::abs(w));
  const auto& f = g.eval;
  return (f(w - 2.0 * h) - 8.0 * f(w - h) + 8.0 * f(w + h) - f(w + 2.0 * h)) / (12.0 * h);
}

double semi_derivative(const EnergyFunction& g, double E, double tol) {
  if (g.regularity != Regularity::VanishesAtBase) {
    throw Error(ErrorCode::RegularityViolation, "semi-derivative needs g(base) = 0");
  }
  check_energy(g, E);
  if (E == g.base) return 0.0;
  const double at_base = g.eval(g.base);
  if (std::isfinite(at_base) && std::abs(at_base) > 1e-10 * std::max(1.0, std::abs(g.eval(E)))) {
    throw Error(ErrorCode::RegularityViolation, "g(base) = " + num(at_base));
  }
  const double span = E - g.base;
  std::function<double(double)> slope;
  if (g.derivative) {
    slope = [&](double u) { return g.derivative(g.base + u); };
  } else {
    // Offsets below the floor are not resolved in w = base + u; there the
    // mean slope over [base, base + floor] stands in for g'.
    const double floor_w = g.base + 1e4 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(g.base));
    const double floor_u = floor_w - g.base;
    const double mean_slope = (g.eval(floor_w) - (std::isfinite(at_base) ? at_base : 0.0)) / floor_u;
    slope = [&, floor_u, mean_slope](double u) {
      if (u < floor_u) return mean_slope;
      return central_derivative(g, g.base + u, E);
    };
  }
  return kInvSqrtPi * abel_kernel(slope, span, tol * std::sqrt(std::numbers::pi)).value;
}

double semi_integral(const EnergyFunction& g, double E, double tol) {
  check_energy(g, E);
  if (E == g.base) return 0.0;
  const double at_base = g.eval(g.base);
  if (!std::isfinite(at_base)) {
    throw Error(ErrorCode::RegularityViolation, "g is unbounded at the base point");
  }
  const double span = E - g.base;
  return kInvSqrtPi *
         abel_kernel([&](double u) { return g.eval(g.base + u); }, span, tol * std::sqrt(std::numbers::pi)).value;
}

double invert_period(const EnergyFunction& phi, const RadialProblem& problem, double E, double tol) {
  if (std::abs(phi.base - problem.V_R) > 1e-12 * std::max(1.0, std::abs(problem.V_R))) {
    throw Error(ErrorCode::DomainError, "period law base " + num(phi.base) +
                                            " differs from V_R = " + num(problem.V_R));
  }
  if (E < problem.V_R) {
    throw Error(ErrorCode::EnergyBelowMinimum,
                "E = " + num(E) + " < V_R = " + num(problem.V_R));
  }
  const double prefactor = std::sqrt(2.0 / (problem.m * std::numbers::pi));
  EnergyFunction law = phi;
  law.base = problem.V_R;
  return prefactor * semi_integral(law, E, tol / prefactor);
}

TurningPair symmetric_branches(const EnergyFunction& phi, const RadialProblem& problem, double E, double tol) {
  const double width = invert_period(phi, problem, E, tol);
  TurningPair pair;
  pair.E = E;
  pair.delta_x = width;
  pair.x_lt = problem.x0 - 0.5 * width;
  pair.x_gt = problem.x0 + 0.5 * width;
  pair.degenerate = width == 0.0;
  pair.r_min = problem.to_radius(pair.x_gt);
  pair.r_max = pair.x_lt > 0.0 ? problem.to_radius(pair.x_lt) : INFINITY;
  return pair;
}

EnergyFunction constant_period_law(const RadialProblem& problem, double phi) {
  EnergyFunction law;
  law.eval = [phi](double) { return phi; };
  law.derivative = [](double) { return 0.0; };
  law.base = problem.V_R;
  law.regularity = Regularity::BoundedAtBase;
  return law;
}

}  // namespace bertrand
