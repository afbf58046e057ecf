#pragma once

#include <vector>

namespace bertrand {

enum class Family { PowerLawPositive, PowerLawAttractive, Logarithmic, Tabulated };

// Central potential U(r).
//   PowerLawPositive:    U = k r^nu,    nu > 0
//   PowerLawAttractive:  U = -k r^-nu,  0 < nu < 2
//   Logarithmic:         U = k ln r
//   Tabulated:           samples (table_r, table_u), local cubic fits
// `offset` is the additive constant B. It is reported by eval_potential at
// order 0 and ignored everywhere else.
struct PotentialSpec {
  Family family = Family::PowerLawAttractive;
  double k = 1.0;
  double nu = 1.0;
  double offset = 0.0;
  std::vector<double> table_r;
  std::vector<double> table_u;

  static PotentialSpec power_law_positive(double nu, double k = 1.0, double offset = 0.0);
  static PotentialSpec power_law_attractive(double nu, double k = 1.0, double offset = 0.0);
  static PotentialSpec logarithmic(double k = 1.0, double offset = 0.0);
  static PotentialSpec tabulated(std::vector<double> r, std::vector<double> u);

  static PotentialSpec kepler(double k = 1.0) { return power_law_attractive(1.0, k); }
  static PotentialSpec hooke(double k = 1.0) { return power_law_positive(2.0, k); }

  // Throws InvalidPotential when the family invariants do not hold.
  void validate() const;

  bool is_power_law() const {
    return family == Family::PowerLawPositive || family == Family::PowerLawAttractive;
  }
  bool is_analytic() const { return family != Family::Tabulated; }

  // Highest derivative order of U (resp. W_L) the library evaluates.
  int max_potential_order() const { return is_analytic() ? 4 : 2; }
  int max_clairaut_order() const { return is_analytic() ? 5 : 2; }
};

// d^order U / dr^order at r. Order 0 includes the offset.
double eval_potential(const PotentialSpec& spec, double r, int order = 0);

// A potential together with mass and angular momentum, and the circular
// orbit it selects. Build with make_problem (turning.hpp).
struct RadialProblem {
  PotentialSpec potential;
  double m = 1.0;
  double L = 1.0;
  double R = 1.0;    // circular radius, V_L'(R) = 0
  double x0 = 1.0;   // L / (m R)
  double V_R = 0.0;  // V_L(R)

  // r = (L/m) / x
  double length_scale() const { return L / m; }
  double to_radius(double x) const { return length_scale() / x; }
  double to_clairaut(double r) const { return length_scale() / r; }
};

// V_L(r) = U(r) + L^2/(2 m r^2), orders 0..max_potential_order().
double effective_potential(const RadialProblem& problem, double r, int order = 0);

// W_L(x) = m x^2 / 2 + U(L/(m x)), orders 0..max_clairaut_order().
double clairaut_potential(const RadialProblem& problem, double x, int order = 0);

// W_L(x + dx) - W_L(x) with dx supplied exactly. Analytic families use
// expm1/log1p so the result keeps its relative accuracy for small dx.
double clairaut_difference(const RadialProblem& problem, double x, double dx);

// W_L(x) - W_L(x0), i.e. clairaut_difference(problem, x0, x - x0).
double well_depth(const RadialProblem& problem, double x);

// A_+- = 2 (k/m) (L/m)^(+-nu) so that W = m (x^2 +- A x^(-+nu)) / 2.
// Power-law families only.
double clairaut_amplitude(const PotentialSpec& spec, double m, double L);

}  // namespace bertrand
