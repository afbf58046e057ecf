#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "bertrand/fractional.hpp"
#include "bertrand/potentials.hpp"
#include "bertrand/turning.hpp"

namespace bertrand {

struct ApsidalResult {
  double phi = 0.0;
  double E = 0.0;
  double L = 0.0;
  int quad_order = 0;
  double err_est = 0.0;
  bool near_circular = false;  // answered by the circular limit
};

// Below this relative depth E - V_R the circular limit Phi_C is returned.
inline constexpr double kNearCircularWindow = 1e-9;

// Phi(E, L) = sqrt(m/2) int_{x_lt}^{x_gt} dx / sqrt(E - W_L(x)).
ApsidalResult apsidal_angle(const RadialProblem& problem, double E, double tol = 1e-10);

// Same angle through the radial variable,
// sqrt(m/2) int_{r_min}^{r_max} (L/(m r^2)) dr / sqrt(E - V_L(r)).
ApsidalResult apsidal_angle_radial(const RadialProblem& problem, double E, double tol = 1e-10);

// sqrt(m pi / 2) D^{1/2} Delta x (E).
double apsidal_semiderivative(const RadialProblem& problem, double E, double tol = 1e-8);

// d(Delta x)/dw at depth w - V_R = depth, from 1/W'(x_gt) - 1/W'(x_lt);
// harmonic asymptote inside the degenerate window.
double width_derivative(const RadialProblem& problem, double depth);

// T/2 = sqrt(m/2) int_{r_min}^{r_max} dr / sqrt(E - V_L(r)).
quadrature::Estimate radial_half_period(const RadialProblem& problem, double E, double tol = 1e-10);

// Phi(., L) of the problem as an energy function, for invert_period.
EnergyFunction apsidal_period_law(const RadialProblem& problem, double tol = 1e-10);

enum class SweepStatus { Ok, BelowMin, Unbounded, TolFail };

std::string_view to_string(SweepStatus status);

struct SweepCell {
  double L = 0.0;
  double E = 0.0;
  SweepStatus status = SweepStatus::Ok;
  ApsidalResult result;
};

// Energies for one angular momentum; receives the problem at that L.
using EnergyGrid = std::function<std::vector<double>(const RadialProblem&)>;

EnergyGrid fixed_energies(std::vector<double> energies);

// Rows ordered by (L index, E index) regardless of `threads`.
std::vector<SweepCell> apsidal_sweep(const PotentialSpec& spec, double m, std::span<const double> momenta,
                                     const EnergyGrid& energies, double tol, unsigned threads = 1);

}  // namespace bertrand
