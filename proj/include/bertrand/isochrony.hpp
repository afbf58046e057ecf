#pragma once

#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "bertrand/potentials.hpp"

namespace bertrand {

enum class IsoFamily { Attractive, Positive };
enum class Verdict { Isochronous, NotIsochronous, Inconclusive };

std::string_view to_string(IsoFamily family);
std::string_view to_string(Verdict verdict);

// alpha_L = sqrt(2/m) 2 Phi_C / pi: width of an isochronous well at depth h
// is alpha_L sqrt(h).
double alpha_coefficient(double m, double phi_c);

// W_L(x + alpha sqrt(W_L(x) - V_R)) - W_L(x) for 0 < x <= x0. Vanishes for
// every probe iff the Clairaut motion is isochronous with angle phi_c.
double isochrony_residual(const RadialProblem& problem, double phi_c, double x);

// Probe points as fractions of x0.
inline constexpr double kDefaultProbeFractions[] = {1.0 / 8.0, 1.0 / 4.0, 1.0 / 2.0, 3.0 / 4.0, 15.0 / 16.0};

double residual_sup(const RadialProblem& problem, double phi_c,
                    std::span<const double> probe_fractions = kDefaultProbeFractions);

// (nu/4)^(-nu/2) - 2; the x -> 0+ probe of the attractive family.
// Roots at nu = 1 and nu = 2.
double bertrand_transcendental(double nu);

// 4/(2+nu) - 1; the x -> infinity balance of the positive family.
double asymptotic_condition(double nu);

struct Thresholds {
  double accept = 1e-10;  // residual_sup <= accept |V_R|
  double reject = 1e-3;   // residual_sup >= reject |V_R|
};

struct ScanConfig {
  double k = 1.0;
  double m = 1.0;
  double L = 1.0;
  Thresholds thresholds;
  std::vector<double> probe_fractions{std::begin(kDefaultProbeFractions), std::end(kDefaultProbeFractions)};
};

struct IsochronyReport {
  double nu = 0.0;
  IsoFamily family = IsoFamily::Attractive;
  double V_R = 0.0;
  double residual_sup = 0.0;
  double transcendental_value = 0.0;
  double constraint_violation = 0.0;  // |W4 - (5/3) W3^2 / (m omega^2)|
  Verdict verdict = Verdict::Inconclusive;
};

struct ScanRoot {
  double nu = 0.0;
  bool admissible = false;
  IsochronyReport report;  // filled when admissible
};

struct ScanResult {
  std::vector<IsochronyReport> reports;
  std::vector<ScanRoot> roots;
};

// Closed-form condition of the family: transcendental (attractive) or
// asymptotic (positive).
double family_condition(IsoFamily family, double nu);

IsochronyReport isochrony_report(IsoFamily family, double nu, const ScanConfig& config = {});

// One report per grid nu, plus the roots of the family condition bracketed
// by the grid and refined by bisection to machine precision.
ScanResult bertrand_scan(IsoFamily family, std::span<const double> nus, const ScanConfig& config = {});

// a_n = 2 W^(n+2)(x0) / ((n+2)! m omega^2), n = 1..max_n.
std::vector<double> perturbative_coefficients(const RadialProblem& problem, int max_n);

struct LateralDisplacement {
  double exact = 0.0;   // eps_plus from the right-branch root
  double series = 0.0;  // expansion in eps_minus, isochronous relation
  double gamma = 0.0;   // omega Phi_C / pi
  int series_order = 0;
};

LateralDisplacement lateral_map(const RadialProblem& problem, double phi_c, double eps_minus);

struct IsochronyConstraints {
  double gamma_check = 0.0;  // omega Phi_C / pi - 1
  bool a1_free = true;       // the first-order equation reads 0 a_1 = 0
  double fourth_order_violation = 0.0;  // W4 - (5/3) W3^2 / (m omega^2)
  double a2_residual = 0.0;             // a_2 - (5/4) a_1^2
};

IsochronyConstraints isochrony_constraints(const RadialProblem& problem);

struct PotentialSample {
  double r = 0.0;
  double U = 0.0;
  double dU = 0.0;
};

// U(r) from a circular apsidal law Phi_C(rho):
//   U'(r) = exp(int^r ((pi/Phi_C)^2 - 3) / rho d rho),  U = int^r U'.
// Gauge: U = 0 and U' = 1 at the middle grid sample.
std::vector<PotentialSample> reconstruct_potential(const std::function<double(double)>& phi_c_law,
                                                   std::span<const double> r_grid, double tol = 1e-12);

// d ln U' / d ln r at each sample (central differences inside, one-sided at
// the two ends).
std::vector<double> local_exponents(std::span<const PotentialSample> samples);

}  // namespace bertrand
