#include "bertrand/orbit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <string>

#include "bertrand/apsidal.hpp"
#include "bertrand/csv.hpp"
#include "bertrand/error.hpp"
#include "bertrand/ode.hpp"
#include "bertrand/turning.hpp"

namespace bertrand {

namespace {

// Internal integrator tolerance relative to the requested one; the
// requested tol bounds the energy drift over many periods, which the
// per-step error control alone does not.
constexpr double kStepTolFactor = 1e-2;
constexpr double kDriftLimitFactor = 100.0;

template <int N>
using Solver = ode::Dopri5<N>;

template <int N>
typename Solver<N>::State nan_state() {
  return Solver<N>::State::Constant(NAN);
}

struct Pending {
  double s;  // offset into the step
  SampleKind kind;
};

class Recorder {
 public:
  Recorder(const RadialProblem& problem, double E, double tol, OrbitTrace& trace)
      : problem_(problem), depth_(E - problem.V_R), limit_(kDriftLimitFactor * tol * std::max(1.0, std::abs(E))),
        trace_(trace) {}

  void add(double param, double coord, double deriv, double other, double deviation, SampleKind kind) {
    trace_.energy_drift = std::max(trace_.energy_drift, std::abs(deviation));
    trace_.samples.push_back({param, coord, deriv, other, trace_.E0 + deviation, kind});
    if (trace_.energy_drift > limit_) {
      throw Error(ErrorCode::IntegrationFailure, "energy drift " + csv::format(trace_.energy_drift) +
                                                     " exceeds " + csv::format(limit_) + " at " +
                                                     std::string(to_string(trace_.formulation)) +
                                                     " parameter " + csv::format(param));
    }
  }

  // (1/2) m v^2 + W_L(x) - E, with W_L(x) - V_R taken as an offset from x0.
  double deviation(double x, double v) const {
    return 0.5 * problem_.m * v * v + clairaut_difference(problem_, problem_.x0, x - problem_.x0) - depth_;
  }

 private:
  const RadialProblem& problem_;
  double depth_;
  double limit_;
  OrbitTrace& trace_;
};

void check_escape(const RadialProblem& problem, double E, double r, double escape_factor) {
  if (!(r > 0.0)) throw Error(ErrorCode::IntegrationFailure, "radius left r > 0: " + csv::format(r));
  if (r > escape_factor * problem.R) {
    if (E >= 0.0) throw Error(ErrorCode::UnboundedOrbit, "r passed the escape radius " + csv::format(r));
    throw Error(ErrorCode::IntegrationFailure, "bound orbit reached r = " + csv::format(r));
  }
}

void sort_pending(std::vector<Pending>& pending) {
  std::sort(pending.begin(), pending.end(), [](const Pending& a, const Pending& b) { return a.s < b.s; });
}

}  // namespace

std::string_view to_string(Formulation formulation) {
  return formulation == Formulation::Binet ? "binet" : "radial";
}

std::string_view to_string(ClosureKind kind) {
  switch (kind) {
    case ClosureKind::Circular: return "circular";
    case ClosureKind::Closed: return "closed";
    case ClosureKind::Rosette: return "rosette";
    case ClosureKind::Unbounded: return "unbounded";
  }
  return "unknown";
}

std::vector<OrbitSample> OrbitTrace::of_kind(SampleKind kind) const {
  std::vector<OrbitSample> out;
  for (const auto& s : samples) {
    if (s.kind == kind) out.push_back(s);
  }
  return out;
}

OrbitTrace integrate_binet(const RadialProblem& problem, double E, double phi_span, double tol,
                           const OrbitOptions& options) {
  if (!(phi_span > 0.0) || !(tol > 0.0)) throw Error(ErrorCode::DomainError, "span and tol must be positive");
  const TurningPair pair = turning_points(problem, E);
  using S = Solver<3>;
  using State = S::State;

  OrbitTrace trace;
  trace.formulation = Formulation::Binet;
  trace.E0 = E;
  trace.L = problem.L;
  trace.closure = classify_orbit(problem, E, options.q_max, options.closure_tol);
  Recorder recorder(problem, E, tol, trace);

  const double m = problem.m;
  const double L = problem.L;
  auto rhs = [&](double, const State& y) -> State {
    if (!(y[0] > 0.0)) return nan_state<3>();
    try {
      return State(y[1], -clairaut_potential(problem, y[0], 1) / m, L / (m * y[0] * y[0]));
    } catch (const Error&) {
      return nan_state<3>();
    }
  };

  S::Options opt;
  opt.rtol = opt.atol = kStepTolFactor * tol;
  opt.h_max = std::numbers::pi / std::sqrt(curvature(problem).omega2) / 8.0;

  State y0(pair.degenerate ? problem.x0 : pair.x_lt, 0.0, 0.0);
  auto record = [&](double phi, const State& y, SampleKind kind) {
    recorder.add(phi, y[0], y[1], y[2], recorder.deviation(y[0], y[1]), kind);
  };
  record(0.0, y0, SampleKind::Start);

  std::vector<double> angles;
  for (double a : options.angles) {
    if (a > 0.0 && a <= phi_span) angles.push_back(a);
  }
  std::sort(angles.begin(), angles.end());
  std::size_t next_angle = 0;

  S::integrate(rhs, 0.0, phi_span, y0, opt, [&](double t0, const State& ya, double t1, const State& yb) {
    check_escape(problem, E, problem.to_radius(yb[0]), options.escape_factor);
    const double h = t1 - t0;
    std::vector<Pending> pending;
    if (!pair.degenerate) {
      if (ya[1] < 0.0 && yb[1] >= 0.0) {
        pending.push_back({S::locate(rhs, [](const State& y) { return y[1]; }, t0, ya, h, opt),
                           SampleKind::Apocenter});
      } else if (ya[1] > 0.0 && yb[1] <= 0.0) {
        pending.push_back({S::locate(rhs, [](const State& y) { return y[1]; }, t0, ya, h, opt),
                           SampleKind::Pericenter});
      }
    }
    for (; next_angle < angles.size() && angles[next_angle] <= t1; ++next_angle) {
      pending.push_back({angles[next_angle] - t0, SampleKind::Requested});
    }
    sort_pending(pending);
    bool end_recorded = false;
    for (const auto& p : pending) {
      const bool at_end = p.s >= h;
      record(at_end ? t1 : t0 + p.s, at_end ? yb : S::step(rhs, t0, ya, p.s, opt).y, p.kind);
      end_recorded = end_recorded || at_end;
    }
    if (!end_recorded) record(t1, yb, SampleKind::Step);
    return true;
  });
  return trace;
}

OrbitTrace integrate_radial(const RadialProblem& problem, double E, double t_span, double tol,
                            const OrbitOptions& options) {
  if (!(t_span > 0.0) || !(tol > 0.0)) throw Error(ErrorCode::DomainError, "span and tol must be positive");
  const TurningPair pair = turning_points(problem, E);
  using S = Solver<4>;
  using State = S::State;

  OrbitTrace trace;
  trace.formulation = Formulation::Radial;
  trace.E0 = E;
  trace.L = problem.L;
  trace.closure = classify_orbit(problem, E, options.q_max, options.closure_tol);
  Recorder recorder(problem, E, tol, trace);

  const double m = problem.m;
  const double L = problem.L;
  auto rhs = [&](double, const State& y) -> State {
    const double r = y[0];
    if (!(r > 0.0)) return nan_state<4>();
    try {
      const double du = eval_potential(problem.potential, r, 1);
      return State(y[1], r * y[3] * y[3] - du / m, y[3], -2.0 * y[1] * y[3] / r);
    } catch (const Error&) {
      return nan_state<4>();
    }
  };

  S::Options opt;
  opt.rtol = opt.atol = kStepTolFactor * tol;
  opt.h_max = std::numbers::pi / std::sqrt(effective_potential(problem, problem.R, 2) / m) / 8.0;

  const double r0 = pair.degenerate ? problem.R : pair.r_max;
  State y0(r0, 0.0, 0.0, L / (m * r0 * r0));
  auto record = [&](double t, const State& y, SampleKind kind) {
    const double r = y[0];
    const double ls = m * r * r * y[3];
    const double deviation =
        recorder.deviation(problem.to_clairaut(r), y[1]) + (ls * ls - L * L) / (2.0 * m * r * r);
    trace.momentum_drift = std::max(trace.momentum_drift, std::abs(ls - L) / L);
    recorder.add(t, r, y[1], y[2], deviation, kind);
  };
  record(0.0, y0, SampleKind::Start);

  std::vector<double> angles;
  for (double a : options.angles) {
    if (a > 0.0) angles.push_back(a);
  }
  std::sort(angles.begin(), angles.end());
  std::size_t next_angle = 0;

  S::integrate(rhs, 0.0, t_span, y0, opt, [&](double t0, const State& ya, double t1, const State& yb) {
    check_escape(problem, E, yb[0], options.escape_factor);
    const double h = t1 - t0;
    std::vector<Pending> pending;
    if (!pair.degenerate) {
      auto rdot = [](const State& y) { return y[1]; };
      if (ya[1] > 0.0 && yb[1] <= 0.0) {
        pending.push_back({S::locate(rhs, rdot, t0, ya, h, opt), SampleKind::Apocenter});
      } else if (ya[1] < 0.0 && yb[1] >= 0.0) {
        pending.push_back({S::locate(rhs, rdot, t0, ya, h, opt), SampleKind::Pericenter});
      }
    }
    for (; next_angle < angles.size() && angles[next_angle] <= yb[2]; ++next_angle) {
      const double target = angles[next_angle];
      pending.push_back({S::locate(rhs, [target](const State& y) { return y[2] - target; }, t0, ya, h, opt),
                         SampleKind::Requested});
    }
    sort_pending(pending);
    bool end_recorded = false;
    for (const auto& p : pending) {
      const bool at_end = p.s >= h;
      record(at_end ? t1 : t0 + p.s, at_end ? yb : S::step(rhs, t0, ya, p.s, opt).y, p.kind);
      end_recorded = end_recorded || at_end;
    }
    if (!end_recorded) record(t1, yb, SampleKind::Step);
    return true;
  });
  return trace;
}

std::optional<std::pair<int, int>> closure_check(double phi, int q_max, double tol) {
  if (!(phi > 0.0)) throw Error(ErrorCode::DomainError, "apsidal angle must be positive");
  if (q_max < 1) throw Error(ErrorCode::DomainError, "q_max must be at least 1");
  const double v = phi / std::numbers::pi;
  // Convergents h_n / k_n; the candidates between two convergents are the
  // semiconvergents (h_{n-2} + j h_{n-1}) / (k_{n-2} + j k_{n-1}).
  long h_prev2 = 0, k_prev2 = 1;  // h_{-2}, k_{-2}
  long h_prev1 = 1, k_prev1 = 0;  // h_{-1}, k_{-1}
  double rest = v;
  for (int n = 0; n < 64; ++n) {
    const double a_real = std::floor(rest);
    const long a = static_cast<long>(a_real);
    // q grows with j, so the first q past q_max ends the search.
    for (long j = (n == 0 ? a : 1); j <= a; ++j) {
      const long p = h_prev2 + j * h_prev1;
      const long q = k_prev2 + j * k_prev1;
      if (q > q_max) return std::nullopt;
      if (std::abs(v - static_cast<double>(p) / static_cast<double>(q)) <= tol) {
        return std::make_pair(static_cast<int>(p), static_cast<int>(q));
      }
    }
    const long h = h_prev2 + a * h_prev1;
    const long k = k_prev2 + a * k_prev1;
    h_prev2 = h_prev1;
    k_prev2 = k_prev1;
    h_prev1 = h;
    k_prev1 = k;
    const double frac = rest - a_real;
    if (!(frac > 0.0)) return std::nullopt;
    rest = 1.0 / frac;
  }
  return std::nullopt;
}

Closure classify_orbit(const RadialProblem& problem, double E, int q_max, double tol) {
  Closure closure;
  if (in_degenerate_window(problem, E)) {
    closure.kind = ClosureKind::Circular;
    closure.phi = circular_apsidal(problem.potential, problem.R);
    return closure;
  }
  ApsidalResult result;
  try {
    result = apsidal_angle(problem, E);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::UnboundedOrbit) throw;
    closure.kind = ClosureKind::Unbounded;
    return closure;
  }
  closure.phi = result.phi;
  if (const auto pq = closure_check(result.phi, q_max, tol)) {
    closure.kind = ClosureKind::Closed;
    closure.p = pq->first;
    closure.q = pq->second;
  } else {
    closure.kind = ClosureKind::Rosette;
  }
  return closure;
}

void write_trace_csv(std::ostream& out, const OrbitTrace& trace) {
  out << "# formulation=" << to_string(trace.formulation) << '\n';
  out << "param,r_or_x,deriv,phi_or_t,energy\n";
  for (const auto& s : trace.samples) {
    csv::write_row(out, {csv::format(s.param), csv::format(s.coord), csv::format(s.deriv), csv::format(s.other),
                         csv::format(s.energy)});
  }
}

}  // namespace bertrand
