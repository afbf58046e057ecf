#pragma once

#include <iosfwd>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "bertrand/potentials.hpp"

namespace bertrand {

enum class Formulation { Binet, Radial };

std::string_view to_string(Formulation formulation);

enum class SampleKind { Start, Step, Apocenter, Pericenter, Requested };

// Binet: param = phi, coord = x, deriv = dx/dphi, other = t.
// Radial: param = t, coord = r, deriv = dr/dt, other = phi.
struct OrbitSample {
  double param = 0.0;
  double coord = 0.0;
  double deriv = 0.0;
  double other = 0.0;
  double energy = 0.0;
  SampleKind kind = SampleKind::Step;
};

enum class ClosureKind { Circular, Closed, Rosette, Unbounded };

std::string_view to_string(ClosureKind kind);

struct Closure {
  ClosureKind kind = ClosureKind::Rosette;
  int p = 0;
  int q = 0;
  double phi = 0.0;  // apsidal angle behind the verdict; 0 when unbounded
};

struct OrbitTrace {
  Formulation formulation = Formulation::Binet;
  std::vector<OrbitSample> samples;
  double E0 = 0.0;
  double L = 0.0;
  double energy_drift = 0.0;    // max |E(sample) - E0|
  double momentum_drift = 0.0;  // max |m r^2 phi_dot - L| / L, radial only
  Closure closure;

  std::vector<OrbitSample> of_kind(SampleKind kind) const;
};

struct OrbitOptions {
  double escape_factor = 1e6;   // unbounded once r > escape_factor * R
  std::vector<double> angles;   // extra samples at these phi, inside the span
  int q_max = 20;               // closure classification
  double closure_tol = 1e-6;
};

// x'' = -W_L'(x)/m, t' = L/(m x^2), from x(0) = x_lt, x'(0) = 0.
OrbitTrace integrate_binet(const RadialProblem& problem, double E, double phi_span, double tol = 1e-10,
                           const OrbitOptions& options = {});

// Polar equations of motion in (r, r_dot, phi, phi_dot) from the apocenter.
// With phi_dot = L/(m r^2) substituted they reduce to r'' = -V_L'(r)/m;
// keeping phi_dot as a state makes m r^2 phi_dot = L a real check.
OrbitTrace integrate_radial(const RadialProblem& problem, double E, double t_span, double tol = 1e-10,
                            const OrbitOptions& options = {});

// Smallest-q fraction p/q with |phi/pi - p/q| <= tol and q <= q_max,
// searched over continued-fraction convergents and semiconvergents.
std::optional<std::pair<int, int>> closure_check(double phi, int q_max, double tol);

Closure classify_orbit(const RadialProblem& problem, double E, int q_max, double tol);

// "# formulation=binet" then param,r_or_x,deriv,phi_or_t,energy rows.
void write_trace_csv(std::ostream& out, const OrbitTrace& trace);

}  // namespace bertrand
