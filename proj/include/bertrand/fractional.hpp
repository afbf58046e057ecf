#pragma once

#include <functional>

#include "bertrand/potentials.hpp"
#include "bertrand/quadrature.hpp"
#include "bertrand/turning.hpp"

namespace bertrand {

enum class Regularity { VanishesAtBase, BoundedAtBase };

// A function of energy on [base, E]. `derivative` is optional; when empty
// the semi-derivative falls back to 4th-order central differences.
// Implementations must tolerate concurrent calls.
struct EnergyFunction {
  std::function<double(double)> eval;
  double base = 0.0;
  Regularity regularity = Regularity::BoundedAtBase;
  std::function<double(double)> derivative;
};

// D^{1/2} g(E) = (1/sqrt(pi)) int_base^E g'(w) / sqrt(E - w) dw, g(base) = 0.
double semi_derivative(const EnergyFunction& g, double E, double tol);

// D^{-1/2} g(E) = (1/sqrt(pi)) int_base^E g(w) / sqrt(E - w) dw.
double semi_integral(const EnergyFunction& g, double E, double tol);

// Abel kernels in the offset variable u = w - base on [0, span], after
// u = span sin^2(theta). Shared by the public operators and by callers that
// already hold offsets (e.g. energies measured from V_R).
quadrature::Estimate abel_kernel(const std::function<double(double)>& f_of_offset, double span, double tol);

// 4th-order central difference of g at w, step max(1e-6, 1e-6 |E - base|)
// shrunk to 0.01 (w - base) so the stencil stays well above the base point.
double central_derivative(const EnergyFunction& g, double w, double E);

// Delta x(E) = x_gt - x_lt = sqrt(2/(m pi)) D^{-1/2} Phi(E, L).
// `phi.base` must coincide with problem.V_R.
double invert_period(const EnergyFunction& phi, const RadialProblem& problem, double E, double tol);

// Branches of a potential assumed symmetric about x0:
// x_gt = x0 + Delta x / 2, x_lt = x0 - Delta x / 2.
TurningPair symmetric_branches(const EnergyFunction& phi, const RadialProblem& problem, double E, double tol);

// Phi(E) = phi for every E >= V_R.
EnergyFunction constant_period_law(const RadialProblem& problem, double phi);

}  // namespace bertrand
