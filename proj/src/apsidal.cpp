#include "bertrand/apsidal.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <numbers>
#include <thread>

#include "bertrand/error.hpp"

namespace bertrand {

namespace {

// int_lo^hi weight(y) dy / sqrt(gap), where the gap vanishes linearly at
// both ends. The gap is measured from whichever end is nearer, by offset,
// so nodes crowding an endpoint keep their relative accuracy.
template <class GapLo, class GapHi, class Weight>
quadrature::Estimate well_integral(double lo, double hi, GapLo&& gap_from_lo, GapHi&& gap_from_hi,
                                   Weight&& weight, double tol) {
  const double width = hi - lo;
  return quadrature::integrate_sin2(
      [&](double theta) {
        const auto p = quadrature::sin2_point(width, theta);
        const bool near_lo = p.from_lo <= p.from_hi;
        const double y = near_lo ? lo + p.from_lo : hi - p.from_hi;
        const double gap = near_lo ? gap_from_lo(p.from_lo) : gap_from_hi(p.from_hi);
        if (!(gap > 0.0)) {
          throw Error(ErrorCode::ToleranceNotMet, "non-positive gap inside the turning interval");
        }
        return weight(y) * p.jacobian / std::sqrt(gap);
      },
      tol);
}

quadrature::Estimate clairaut_integral(const RadialProblem& problem, const TurningPair& pair, double tol) {
  // Each turning point is taken as an exact root: the gap near it is
  // W(end) - W(end + offset). The root residuals (~1e-20 for shallow wells)
  // would otherwise dominate the gap at the nodes closest to the ends.
  const double weight = std::sqrt(0.5 * problem.m);
  return well_integral(
      pair.x_lt, pair.x_gt,
      [&](double u) { return -clairaut_difference(problem, pair.x_lt, u); },
      [&](double v) { return -clairaut_difference(problem, pair.x_gt, -v); },
      [&](double) { return weight; }, tol);
}

template <class Weight>
quadrature::Estimate radial_integral(const RadialProblem& problem, const TurningPair& pair, Weight&& weight,
                                     double tol) {
  const double s = problem.length_scale();
  const double x_in = s / pair.r_min;
  const double x_out = s / pair.r_max;
  // x(r + h) - x(r) = -s h / (r (r + h))
  return well_integral(
      pair.r_min, pair.r_max,
      [&](double u) {
        const double r = pair.r_min;
        return -clairaut_difference(problem, x_in, -s * u / (r * (r + u)));
      },
      [&](double v) {
        const double r = pair.r_max;
        return -clairaut_difference(problem, x_out, s * v / (r * (r - v)));
      },
      weight, tol);
}

// Phi_C with err_est scaled linearly from the quadrature at the window edge.
ApsidalResult near_circular(const RadialProblem& problem, double E, double depth, double window, double tol) {
  ApsidalResult result;
  result.E = E;
  result.L = problem.L;
  result.near_circular = true;
  result.phi = circular_apsidal(problem.potential, problem.R);
  if (depth > 0.0) {
    const TurningPair edge = turning_points_at_depth(problem, window);
    const double at_window = clairaut_integral(problem, edge, tol).value;
    result.err_est = std::abs(at_window - result.phi) * (depth / window);
  }
  return result;
}

}  // namespace

ApsidalResult apsidal_angle(const RadialProblem& problem, double E, double tol) {
  const TurningPair pair = turning_points(problem, E);
  const double depth = E - problem.V_R;
  const double window = kNearCircularWindow * std::max(1.0, std::abs(problem.V_R));
  if (depth < window) {
    ApsidalResult shortcut = near_circular(problem, E, depth, window, tol);
    if (shortcut.err_est <= tol) return shortcut;
    if (pair.degenerate) {
      throw Error(ErrorCode::ToleranceNotMet, "circular limit error " + num(shortcut.err_est));
    }
    // Not certified by the limit: integrate at this depth instead.
  }
  const auto estimate = clairaut_integral(problem, pair, tol);
  return {estimate.value, E, problem.L, estimate.order, estimate.err_est, false};
}

ApsidalResult apsidal_angle_radial(const RadialProblem& problem, double E, double tol) {
  const TurningPair pair = turning_points(problem, E);
  if (pair.degenerate) {
    return {circular_apsidal(problem.potential, problem.R), E, problem.L, 0, 0.0, true};
  }
  const double scale = std::sqrt(0.5 * problem.m) * problem.L / problem.m;
  const auto estimate = radial_integral(
      problem, pair, [&](double r) { return scale / (r * r); }, tol);
  return {estimate.value, E, problem.L, estimate.order, estimate.err_est, false};
}

double width_derivative(const RadialProblem& problem, double depth) {
  const TurningPair pair = turning_points_at_depth(problem, depth);
  if (pair.degenerate) {
    const double w2 = curvature(problem).w2;
    return std::sqrt(2.0 / w2) / std::sqrt(depth);
  }
  return 1.0 / clairaut_potential(problem, pair.x_gt, 1) - 1.0 / clairaut_potential(problem, pair.x_lt, 1);
}

double apsidal_semiderivative(const RadialProblem& problem, double E, double tol) {
  const TurningPair pair = turning_points(problem, E);
  if (pair.degenerate) return circular_apsidal(problem.potential, problem.R);
  const double depth = E - problem.V_R;
  // sqrt(m pi / 2) / sqrt(pi) = sqrt(m / 2)
  const double prefactor = std::sqrt(0.5 * problem.m);
  const auto estimate =
      abel_kernel([&](double u) { return width_derivative(problem, u); }, depth, tol / prefactor);
  return prefactor * estimate.value;
}

quadrature::Estimate radial_half_period(const RadialProblem& problem, double E, double tol) {
  const TurningPair pair = turning_points(problem, E);
  if (pair.degenerate) {
    const double v2 = effective_potential(problem, problem.R, 2);
    return {std::numbers::pi / std::sqrt(v2 / problem.m), 0.0, 0};
  }
  const double weight = std::sqrt(0.5 * problem.m);
  return radial_integral(
      problem, pair, [&](double) { return weight; }, tol);
}

EnergyFunction apsidal_period_law(const RadialProblem& problem, double tol) {
  EnergyFunction law;
  law.eval = [problem, tol](double w) { return apsidal_angle(problem, w, tol).phi; };
  law.base = problem.V_R;
  law.regularity = Regularity::BoundedAtBase;
  return law;
}

std::string_view to_string(SweepStatus status) {
  switch (status) {
    case SweepStatus::Ok: return "ok";
    case SweepStatus::BelowMin: return "below_min";
    case SweepStatus::Unbounded: return "unbounded";
    case SweepStatus::TolFail: return "tol_fail";
  }
  return "unknown";
}

EnergyGrid fixed_energies(std::vector<double> energies) {
  return [energies = std::move(energies)](const RadialProblem&) { return energies; };
}

std::vector<SweepCell> apsidal_sweep(const PotentialSpec& spec, double m, std::span<const double> momenta,
                                     const EnergyGrid& energies, double tol, unsigned threads) {
  std::vector<RadialProblem> problems;
  std::vector<SweepCell> cells;
  std::vector<std::size_t> owner;
  for (const double L : momenta) {
    problems.push_back(make_problem(spec, m, L));
    for (const double E : energies(problems.back())) {
      cells.push_back({L, E, SweepStatus::Ok, {}});
      owner.push_back(problems.size() - 1);
    }
  }

  std::vector<std::exception_ptr> failures(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      SweepCell& cell = cells[i];
      try {
        cell.result = apsidal_angle(problems[owner[i]], cell.E, tol);
      } catch (const Error& e) {
        cell.result.E = cell.E;
        cell.result.L = cell.L;
        cell.result.phi = NAN;
        switch (e.code()) {
          case ErrorCode::EnergyBelowMinimum: cell.status = SweepStatus::BelowMin; break;
          case ErrorCode::UnboundedOrbit: cell.status = SweepStatus::Unbounded; break;
          case ErrorCode::ToleranceNotMet: cell.status = SweepStatus::TolFail; break;
          default: failures[i] = std::current_exception();
        }
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };

  const unsigned count = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(cells.size())));
  if (count == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < count; ++t) pool.emplace_back(worker);
  }
  for (const auto& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }
  return cells;
}

}  // namespace bertrand
