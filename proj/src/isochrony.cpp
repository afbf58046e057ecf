#include "bertrand/isochrony.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "bertrand/error.hpp"
#include "bertrand/quadrature.hpp"
#include "bertrand/turning.hpp"

namespace bertrand {

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

PotentialSpec family_spec(IsoFamily family, double nu, double k) {
  return family == IsoFamily::Attractive ? PotentialSpec::power_law_attractive(nu, k)
                                         : PotentialSpec::power_law_positive(nu, k);
}

bool admissible(IsoFamily family, double nu) {
  return family == IsoFamily::Attractive ? (nu > 0.0 && nu < 2.0) : nu > 0.0;
}

// Bisection on a sign change of f over [lo, hi] down to adjacent doubles.
template <class F>
double bisect(F&& f, double lo, double hi) {
  double f_lo = f(lo);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double f_mid = f(mid);
    if (f_mid == 0.0) return mid;
    if ((f_mid < 0.0) == (f_lo < 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::string_view to_string(IsoFamily family) {
  return family == IsoFamily::Attractive ? "attractive" : "positive";
}

std::string_view to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::Isochronous: return "isochronous";
    case Verdict::NotIsochronous: return "not_isochronous";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

double alpha_coefficient(double m, double phi_c) {
  return std::sqrt(2.0 / m) * 2.0 * phi_c / std::numbers::pi;
}

double isochrony_residual(const RadialProblem& problem, double phi_c, double x) {
  if (!(x > 0.0) || x > problem.x0 * (1.0 + 1e-12)) {
    throw Error(ErrorCode::ProbeOutOfDomain,
                "probe x = " + num(x) + " outside (0, x0 = " + num(problem.x0) + "]");
  }
  const double depth = std::max(0.0, well_depth(problem, x));
  const double shift = alpha_coefficient(problem.m, phi_c) * std::sqrt(depth);
  if (!(x + shift > 0.0)) {
    throw Error(ErrorCode::DisplacedPointNonPositive, "x + alpha sqrt(W - V_R) = " + num(x + shift));
  }
  return clairaut_difference(problem, x, shift);
}

double residual_sup(const RadialProblem& problem, double phi_c, std::span<const double> probe_fractions) {
  double sup = 0.0;
  for (const double f : probe_fractions) {
    sup = std::max(sup, std::abs(isochrony_residual(problem, phi_c, f * problem.x0)));
  }
  return sup;
}

double bertrand_transcendental(double nu) {
  if (!(nu > 0.0)) throw Error(ErrorCode::DomainError, "nu must be positive");
  return std::pow(nu / 4.0, -nu / 2.0) - 2.0;
}

double asymptotic_condition(double nu) {
  if (!(nu > 0.0)) throw Error(ErrorCode::DomainError, "nu must be positive");
  return 4.0 / (2.0 + nu) - 1.0;
}

double family_condition(IsoFamily family, double nu) {
  return family == IsoFamily::Attractive ? bertrand_transcendental(nu) : asymptotic_condition(nu);
}

IsochronyReport isochrony_report(IsoFamily family, double nu, const ScanConfig& config) {
  const RadialProblem problem = make_problem(family_spec(family, nu, config.k), config.m, config.L);
  const double phi_c = circular_apsidal(problem.potential, problem.R);

  IsochronyReport report;
  report.nu = nu;
  report.family = family;
  report.V_R = problem.V_R;
  report.transcendental_value = family_condition(family, nu);
  report.residual_sup = residual_sup(problem, phi_c, config.probe_fractions);
  report.constraint_violation = std::abs(isochrony_constraints(problem).fourth_order_violation);

  const double scale = std::abs(problem.V_R);
  if (report.residual_sup <= config.thresholds.accept * scale) {
    report.verdict = Verdict::Isochronous;
  } else if (report.residual_sup >= config.thresholds.reject * scale) {
    report.verdict = Verdict::NotIsochronous;
  } else {
    report.verdict = Verdict::Inconclusive;
  }
  return report;
}

ScanResult bertrand_scan(IsoFamily family, std::span<const double> nus, const ScanConfig& config) {
  ScanResult result;
  for (const double nu : nus) {
    if (!admissible(family, nu)) {
      throw Error(ErrorCode::DomainError, "nu = " + num(nu) + " outside the " +
                                              std::string(to_string(family)) + " family");
    }
    result.reports.push_back(isochrony_report(family, nu, config));
  }

  auto condition = [family](double nu) { return family_condition(family, nu); };
  auto add_root = [&](double nu) {
    ScanRoot root;
    root.nu = nu;
    root.admissible = admissible(family, nu);
    if (root.admissible) root.report = isochrony_report(family, nu, config);
    result.roots.push_back(root);
  };
  for (std::size_t i = 0; i < result.reports.size(); ++i) {
    const double value = result.reports[i].transcendental_value;
    if (value == 0.0) {
      add_root(result.reports[i].nu);
      continue;
    }
    if (i + 1 == result.reports.size()) break;
    const double next = result.reports[i + 1].transcendental_value;
    if (next != 0.0 && (value < 0.0) != (next < 0.0)) {
      add_root(bisect(condition, result.reports[i].nu, result.reports[i + 1].nu));
    }
  }
  return result;
}

std::vector<double> perturbative_coefficients(const RadialProblem& problem, int max_n) {
  if (max_n < 0) throw Error(ErrorCode::DomainError, "max_n must be non-negative");
  if (max_n + 2 > problem.potential.max_clairaut_order()) {
    throw Error(ErrorCode::UnsupportedDerivativeOrder,
                "a_" + num(max_n) + " needs W^(" + num(max_n + 2) + ")");
  }
  const double w2 = clairaut_potential(problem, problem.x0, 2);
  std::vector<double> a;
  for (int n = 1; n <= max_n; ++n) {
    a.push_back(2.0 * clairaut_potential(problem, problem.x0, n + 2) / (factorial(n + 2) * w2));
  }
  return a;
}

LateralDisplacement lateral_map(const RadialProblem& problem, double phi_c, double eps_minus) {
  if (!(eps_minus >= 0.0) || !(eps_minus < problem.x0)) {
    throw Error(ErrorCode::ProbeOutOfDomain,
                "eps_minus = " + num(eps_minus) + " outside [0, x0)");
  }
  LateralDisplacement out;
  const double omega = std::sqrt(curvature(problem).omega2);
  out.gamma = omega * phi_c / std::numbers::pi;

  const int available = std::min(3, problem.potential.max_clairaut_order() - 2);
  const std::vector<double> a = perturbative_coefficients(problem, std::max(0, available));
  out.series_order = 1 + static_cast<int>(a.size());
  const double e = eps_minus;
  const double g = out.gamma;
  out.series = e * (2.0 * g - 1.0);
  if (a.size() >= 1) out.series += -e * e * g * a[0];
  if (a.size() >= 2) out.series += e * e * e * g * (a[1] - a[0] * a[0] / 4.0);
  if (a.size() >= 3) {
    out.series += e * e * e * e * g * (-a[2] + a[0] * a[1] / 2.0 - a[0] * a[0] * a[0] / 8.0);
  }

  if (eps_minus == 0.0) return out;
  const double depth = clairaut_difference(problem, problem.x0, -eps_minus);
  const TurningPair pair = turning_points_at_depth(problem, depth);
  double eps_plus = pair.x_gt - problem.x0;
  // Newton on the displacement itself, so eps_plus keeps full relative
  // precision rather than that of x_gt.
  for (int i = 0; i < 3 && eps_plus > 0.0; ++i) {
    const double f = clairaut_difference(problem, problem.x0, eps_plus) - depth;
    const double slope = clairaut_potential(problem, problem.x0 + eps_plus, 1);
    if (!(slope > 0.0)) break;
    eps_plus -= f / slope;
  }
  out.exact = eps_plus;
  return out;
}

IsochronyConstraints isochrony_constraints(const RadialProblem& problem) {
  if (problem.potential.max_clairaut_order() < 4) {
    throw Error(ErrorCode::UnsupportedDerivativeOrder, "constraints need W^(4)");
  }
  const Curvature c = curvature(problem);
  const double phi_c = circular_apsidal(problem.potential, problem.R);
  const double w3 = clairaut_potential(problem, problem.x0, 3);
  const double w4 = clairaut_potential(problem, problem.x0, 4);
  const std::vector<double> a = perturbative_coefficients(problem, 2);

  IsochronyConstraints out;
  out.gamma_check = std::sqrt(c.omega2) * phi_c / std::numbers::pi - 1.0;
  out.a1_free = true;
  out.fourth_order_violation = w4 - (5.0 / 3.0) * w3 * w3 / c.w2;
  out.a2_residual = a[1] - 1.25 * a[0] * a[0];
  return out;
}

std::vector<PotentialSample> reconstruct_potential(const std::function<double(double)>& phi_c_law,
                                                   std::span<const double> r_grid, double tol) {
  if (r_grid.size() < 3) throw Error(ErrorCode::InvalidGrid, "need at least 3 radii");
  if (!(r_grid.front() > 0.0)) throw Error(ErrorCode::InvalidGrid, "radii must be positive");
  for (std::size_t i = 1; i < r_grid.size(); ++i) {
    if (!(r_grid[i] > r_grid[i - 1])) throw Error(ErrorCode::InvalidGrid, "radii must be strictly increasing");
  }

  // d ln U' / d rho
  auto log_slope_rate = [&](double rho) {
    const double phi = phi_c_law(rho);
    if (!(phi > 0.0)) {
      throw Error(ErrorCode::DomainError, "Phi_C(" + num(rho) + ") = " + num(phi));
    }
    const double ratio = std::numbers::pi / phi;
    return (ratio * ratio - 3.0) / rho;
  };
  auto log_slope_between = [&](double a, double b) {
    return quadrature::integrate(log_slope_rate, a, b, tol).value;
  };

  const std::size_t n = r_grid.size();
  const std::size_t ref = n / 2;
  std::vector<double> log_du(n, 0.0);
  for (std::size_t i = ref + 1; i < n; ++i) log_du[i] = log_du[i - 1] + log_slope_between(r_grid[i - 1], r_grid[i]);
  for (std::size_t i = ref; i-- > 0;) log_du[i] = log_du[i + 1] - log_slope_between(r_grid[i], r_grid[i + 1]);

  // U increment over [r_j, r_{j+1}] starting from ln U'(r_j).
  auto segment = [&](std::size_t j) {
    const double a = r_grid[j];
    return quadrature::integrate(
               [&](double rho) { return std::exp(log_du[j] + log_slope_between(a, rho)); }, a, r_grid[j + 1],
               tol * std::max(1.0, std::exp(log_du[j]) * (r_grid[j + 1] - a)))
        .value;
  };

  std::vector<PotentialSample> samples(n);
  for (std::size_t i = 0; i < n; ++i) {
    samples[i].r = r_grid[i];
    samples[i].dU = std::exp(log_du[i]);
  }
  for (std::size_t i = ref + 1; i < n; ++i) samples[i].U = samples[i - 1].U + segment(i - 1);
  for (std::size_t i = ref; i-- > 0;) samples[i].U = samples[i + 1].U - segment(i);
  return samples;
}

std::vector<double> local_exponents(std::span<const PotentialSample> samples) {
  const std::size_t n = samples.size();
  std::vector<double> out(n, NAN);
  if (n < 2) return out;
  auto slope = [&](std::size_t i, std::size_t j) {
    return (std::log(samples[j].dU) - std::log(samples[i].dU)) / (std::log(samples[j].r) - std::log(samples[i].r));
  };
  out[0] = slope(0, 1);
  out[n - 1] = slope(n - 2, n - 1);
  for (std::size_t i = 1; i + 1 < n; ++i) out[i] = slope(i - 1, i + 1);
  return out;
}

}  // namespace bertrand
