#pragma once

#include "bertrand/potentials.hpp"

namespace bertrand {

// Turning points of the Clairaut motion at energy E, x_lt <= x0 <= x_gt.
// r_max = L/(m x_lt) is the apocentral radius, r_min = L/(m x_gt) the
// pericentral one.
struct TurningPair {
  double x_lt = 0.0;
  double x_gt = 0.0;
  double E = 0.0;
  double delta_x = 0.0;
  double r_min = 0.0;
  double r_max = 0.0;
  bool degenerate = false;
  // Root-search diagnostics: geometric bracket expansions and bisection
  // steps, summed over both branches.
  int bracket_steps = 0;
  int bisection_steps = 0;
};

struct Curvature {
  double omega2 = 0.0;  // W''(x0) / m
  double w2 = 0.0;      // W''(x0)
};

// Relative width of the energy window treated as the circular orbit itself.
inline constexpr double kDegenerateWindow = 1e-12;

// Solves L^2/m = R^3 U'(R). Closed form for the analytic families.
double circular_radius(const PotentialSpec& spec, double m = 1.0, double L = 1.0);

// Validates inputs and fills R, x0 and V_R.
RadialProblem make_problem(PotentialSpec spec, double m = 1.0, double L = 1.0);

// 0 <= E - V_R <= kDegenerateWindow * max(1, |V_R|)
bool in_degenerate_window(const RadialProblem& problem, double E);

TurningPair turning_points(const RadialProblem& problem, double E);

// Same level set parametrized by its depth E - V_R >= 0, which avoids
// rounding E to V_R + depth for very shallow levels.
TurningPair turning_points_at_depth(const RadialProblem& problem, double depth);

// pi sqrt(U'(R) / (R U''(R) + 3 U'(R)))
double circular_apsidal(const PotentialSpec& spec, double R);

Curvature curvature(const RadialProblem& problem);

}  // namespace bertrand
