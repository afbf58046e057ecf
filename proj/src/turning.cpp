#include "bertrand/turning.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "bertrand/error.hpp"

namespace bertrand {

namespace {

double tabulated_circular_radius(const PotentialSpec& spec, double m, double L) {
  const double l2m = L * L / m;
  auto slope = [&](double r) { return eval_potential(spec, r, 1) - l2m / (r * r * r); };

  const auto& rs = spec.table_r;
  int minima = 0;
  double lo = 0.0, hi = 0.0;
  double previous = slope(rs.front());
  for (std::size_t i = 1; i < rs.size(); ++i) {
    const double current = slope(rs[i]);
    if (previous < 0.0 && current >= 0.0) {
      ++minima;
      lo = rs[i - 1];
      hi = rs[i];
    }
    previous = current;
  }
  if (minima == 0) throw Error(ErrorCode::NoCircularOrbit, "V_L' has no sign change on the table");
  if (minima > 1) {
    throw Error(ErrorCode::MultipleMinima,
                num(minima) + " minima of V_L on the table; single-well input required");
  }
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (slope(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

struct BranchRoot {
  double x;
  int bracket_steps;
  int bisection_steps;
};

// Root of well_depth(x) = depth on one side of x0. `direction` is -1 for the
// left branch (x < x0), +1 for the right.
BranchRoot solve_branch(const RadialProblem& problem, double depth, int direction) {
  auto f = [&](double x) { return well_depth(problem, x) - depth; };

  double x_min = 0.0;
  double x_max = INFINITY;
  if (problem.potential.family == Family::Tabulated) {
    x_min = problem.to_clairaut(problem.potential.table_r.back());
    x_max = problem.to_clairaut(problem.potential.table_r.front());
  }

  BranchRoot root{problem.x0, 0, 0};
  double inner = problem.x0;
  double outer = direction < 0 ? 0.5 * problem.x0 : 2.0 * problem.x0;
  for (;;) {
    if (direction < 0 && outer <= x_min) outer = x_min;
    if (direction > 0 && outer >= x_max) outer = x_max;
    ++root.bracket_steps;
    const double value = (outer > 0.0) ? f(outer) : -1.0;
    if (!(value < 0.0)) break;
    if (outer == x_min || outer == x_max || outer < 1e-300 || outer > 1e300) {
      throw Error(ErrorCode::UnboundedOrbit,
                  "level set not closed on the " + std::string(direction < 0 ? "outer" : "inner") +
                      " side (depth " + num(depth) + ")");
    }
    inner = outer;
    outer = direction < 0 ? 0.5 * outer : 2.0 * outer;
  }

  double lo = std::min(inner, outer);
  double hi = std::max(inner, outer);
  // Invariant: f < 0 at `inner`, f >= 0 at `outer`.
  while (hi - lo > 1e-14 * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    ++root.bisection_steps;
    const bool below = f(mid) < 0.0;
    // On the left branch f decreases with x, on the right it increases.
    if ((direction > 0) == below) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  double x = 0.5 * (lo + hi);
  const double fx = f(x);
  const double slope = clairaut_potential(problem, x, 1);
  if (slope != 0.0 && std::isfinite(slope)) {
    const double polished = x - fx / slope;
    if (polished >= lo && polished <= hi && std::abs(f(polished)) <= std::abs(fx)) x = polished;
  }
  root.x = x;
  return root;
}

}  // namespace

double circular_radius(const PotentialSpec& spec, double m, double L) {
  spec.validate();
  if (!(m > 0.0) || !(L > 0.0) || !std::isfinite(m) || !std::isfinite(L)) {
    throw Error(ErrorCode::DomainError, "mass and angular momentum must be positive");
  }
  const double l2 = L * L;
  switch (spec.family) {
    case Family::PowerLawPositive:
      return std::pow(l2 / (spec.nu * spec.k * m), 1.0 / (spec.nu + 2.0));
    case Family::PowerLawAttractive:
      return std::pow(l2 / (spec.nu * spec.k * m), 1.0 / (2.0 - spec.nu));
    case Family::Logarithmic:
      return L / std::sqrt(spec.k * m);
    case Family::Tabulated:
      return tabulated_circular_radius(spec, m, L);
  }
  return 0.0;
}

RadialProblem make_problem(PotentialSpec spec, double m, double L) {
  const double R = circular_radius(spec, m, L);
  RadialProblem problem;
  problem.potential = std::move(spec);
  problem.m = m;
  problem.L = L;
  problem.R = R;
  problem.x0 = L / (m * R);
  problem.V_R = effective_potential(problem, R, 0);
  if (!(effective_potential(problem, R, 2) > 0.0)) {
    throw Error(ErrorCode::UnstableCircularOrbit, "V_L''(R) <= 0 at R = " + num(R));
  }
  return problem;
}

bool in_degenerate_window(const RadialProblem& problem, double E) {
  const double depth = E - problem.V_R;
  return depth >= 0.0 && depth <= kDegenerateWindow * std::max(1.0, std::abs(problem.V_R));
}

TurningPair turning_points(const RadialProblem& problem, double E) {
  if (!std::isfinite(E)) throw Error(ErrorCode::DomainError, "energy must be finite");
  if (E < problem.V_R) {
    throw Error(ErrorCode::EnergyBelowMinimum,
                "E = " + num(E) + " < V_R = " + num(problem.V_R));
  }
  if (problem.potential.family == Family::PowerLawAttractive && E >= 0.0) {
    throw Error(ErrorCode::UnboundedOrbit, "attractive power law with E >= 0");
  }
  TurningPair pair = turning_points_at_depth(problem, E - problem.V_R);
  pair.E = E;
  return pair;
}

TurningPair turning_points_at_depth(const RadialProblem& problem, double depth) {
  if (!(depth >= 0.0)) {
    throw Error(ErrorCode::EnergyBelowMinimum, "negative depth " + num(depth));
  }
  if (problem.potential.family == Family::PowerLawAttractive && problem.V_R + depth >= 0.0) {
    throw Error(ErrorCode::UnboundedOrbit, "attractive power law with E >= 0");
  }
  TurningPair pair;
  pair.E = problem.V_R + depth;
  if (depth <= kDegenerateWindow * std::max(1.0, std::abs(problem.V_R))) {
    pair.x_lt = pair.x_gt = problem.x0;
    pair.r_min = pair.r_max = problem.R;
    pair.degenerate = true;
    return pair;
  }
  const BranchRoot left = solve_branch(problem, depth, -1);
  const BranchRoot right = solve_branch(problem, depth, +1);
  pair.x_lt = left.x;
  pair.x_gt = right.x;
  pair.delta_x = right.x - left.x;
  pair.r_min = problem.to_radius(right.x);
  pair.r_max = problem.to_radius(left.x);
  pair.bracket_steps = left.bracket_steps + right.bracket_steps;
  pair.bisection_steps = left.bisection_steps + right.bisection_steps;
  return pair;
}

double circular_apsidal(const PotentialSpec& spec, double R) {
  const double u1 = eval_potential(spec, R, 1);
  const double u2 = eval_potential(spec, R, 2);
  const double denominator = R * u2 + 3.0 * u1;
  if (!(u1 > 0.0) || !(denominator > 0.0)) {
    throw Error(ErrorCode::UnstableCircularOrbit,
                "R U''(R) + 3 U'(R) = " + num(denominator) + " at R = " + num(R));
  }
  return std::numbers::pi * std::sqrt(u1 / denominator);
}

Curvature curvature(const RadialProblem& problem) {
  const double w2 = clairaut_potential(problem, problem.x0, 2);
  if (!(w2 > 0.0)) {
    throw Error(ErrorCode::UnstableCircularOrbit, "W''(x0) = " + num(w2));
  }
  return {w2 / problem.m, w2};
}

}  // namespace bertrand
