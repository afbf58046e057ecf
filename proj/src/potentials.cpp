#include "bertrand/potentials.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

#include "bertrand/error.hpp"

namespace bertrand {

namespace {

// p (p-1) ... (p-n+1)
double falling_factorial(double p, int n) {
  double f = 1.0;
  for (int i = 0; i < n; ++i) f *= p - i;
  return f;
}

// d^n/dx^n of -ln x for n >= 1: (-1)^n (n-1)! x^-n
double neg_log_derivative(double x, int n) {
  double f = 1.0;
  for (int i = 2; i < n; ++i) f *= i;
  return ((n % 2 == 0) ? f : -f) * std::pow(x, -n);
}

void check_order(int order, int max_order, const char* what) {
  if (order < 0 || order > max_order) {
    throw Error(ErrorCode::UnsupportedDerivativeOrder,
                std::string(what) + " order " + num(order) + " (max " +
                    num(max_order) + ")");
  }
}

// Cubic through the four samples nearest to r, differentiated `order` times.
double tabulated_eval(const PotentialSpec& spec, double r, int order) {
  const auto& rs = spec.table_r;
  const auto& us = spec.table_u;
  if (r < rs.front() || r > rs.back()) {
    throw Error(ErrorCode::OutOfTableRange,
                "r = " + num(r) + " outside [" + num(rs.front()) + ", " +
                    num(rs.back()) + "]");
  }
  const auto n = static_cast<std::ptrdiff_t>(rs.size());
  auto cell = std::upper_bound(rs.begin(), rs.end(), r) - rs.begin() - 1;
  const std::ptrdiff_t first = std::clamp<std::ptrdiff_t>(cell - 1, 0, n - 4);

  const double center = rs[first + 1];
  const double scale = rs[first + 2] - rs[first + 1];
  Eigen::Matrix4d vandermonde;
  Eigen::Vector4d values;
  for (int i = 0; i < 4; ++i) {
    const double s = (rs[first + i] - center) / scale;
    vandermonde(i, 0) = 1.0;
    vandermonde(i, 1) = s;
    vandermonde(i, 2) = s * s;
    vandermonde(i, 3) = s * s * s;
    values(i) = us[first + i];
  }
  const Eigen::Vector4d c = vandermonde.partialPivLu().solve(values);
  const double s = (r - center) / scale;
  switch (order) {
    case 0: return c(0) + s * (c(1) + s * (c(2) + s * c(3)));
    case 1: return (c(1) + s * (2.0 * c(2) + 3.0 * s * c(3))) / scale;
    default: return (2.0 * c(2) + 6.0 * s * c(3)) / (scale * scale);
  }
}

// U^(order)(r) without the additive constant.
double potential_derivative(const PotentialSpec& spec, double r, int order) {
  switch (spec.family) {
    case Family::PowerLawPositive:
      return spec.k * falling_factorial(spec.nu, order) * std::pow(r, spec.nu - order);
    case Family::PowerLawAttractive:
      return -spec.k * falling_factorial(-spec.nu, order) * std::pow(r, -spec.nu - order);
    case Family::Logarithmic:
      return order == 0 ? spec.k * std::log(r) : -spec.k * neg_log_derivative(r, order);
    case Family::Tabulated:
      return tabulated_eval(spec, r, order);
  }
  return 0.0;
}

}  // namespace

PotentialSpec PotentialSpec::power_law_positive(double nu, double k, double offset) {
  PotentialSpec spec;
  spec.family = Family::PowerLawPositive;
  spec.nu = nu;
  spec.k = k;
  spec.offset = offset;
  spec.validate();
  return spec;
}

PotentialSpec PotentialSpec::power_law_attractive(double nu, double k, double offset) {
  PotentialSpec spec;
  spec.family = Family::PowerLawAttractive;
  spec.nu = nu;
  spec.k = k;
  spec.offset = offset;
  spec.validate();
  return spec;
}

PotentialSpec PotentialSpec::logarithmic(double k, double offset) {
  PotentialSpec spec;
  spec.family = Family::Logarithmic;
  spec.nu = 0.0;
  spec.k = k;
  spec.offset = offset;
  spec.validate();
  return spec;
}

PotentialSpec PotentialSpec::tabulated(std::vector<double> r, std::vector<double> u) {
  PotentialSpec spec;
  spec.family = Family::Tabulated;
  spec.nu = 0.0;
  spec.k = 0.0;
  spec.table_r = std::move(r);
  spec.table_u = std::move(u);
  spec.validate();
  return spec;
}

void PotentialSpec::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::InvalidPotential, msg); };
  if (!std::isfinite(offset)) fail("offset must be finite");
  switch (family) {
    case Family::PowerLawPositive:
      if (!(k > 0.0) || !std::isfinite(k)) fail("k must be positive");
      if (!(nu > 0.0) || !std::isfinite(nu)) fail("positive power law requires nu > 0");
      break;
    case Family::PowerLawAttractive:
      if (!(k > 0.0) || !std::isfinite(k)) fail("k must be positive");
      if (!(nu > 0.0 && nu < 2.0)) fail("attractive power law requires 0 < nu < 2");
      break;
    case Family::Logarithmic:
      if (!(k > 0.0) || !std::isfinite(k)) fail("k must be positive");
      break;
    case Family::Tabulated:
      if (table_r.size() != table_u.size()) fail("table_r and table_u differ in length");
      if (table_r.size() < 4) fail("tabulated potential needs at least 4 samples");
      if (!(table_r.front() > 0.0)) fail("tabulated radii must be positive");
      for (std::size_t i = 0; i < table_r.size(); ++i) {
        if (!std::isfinite(table_r[i]) || !std::isfinite(table_u[i])) fail("non-finite sample");
        if (i > 0 && !(table_r[i] > table_r[i - 1])) fail("tabulated radii must be strictly increasing");
      }
      break;
  }
}

double eval_potential(const PotentialSpec& spec, double r, int order) {
  if (!(r > 0.0)) throw Error(ErrorCode::NonPositiveRadius, "r = " + num(r));
  check_order(order, spec.max_potential_order(), "potential");
  const double value = potential_derivative(spec, r, order);
  return order == 0 ? value + spec.offset : value;
}

double effective_potential(const RadialProblem& problem, double r, int order) {
  if (!(r > 0.0)) throw Error(ErrorCode::NonPositiveRadius, "r = " + num(r));
  check_order(order, problem.potential.max_potential_order(), "effective potential");
  const double barrier = problem.L * problem.L / (2.0 * problem.m);
  return potential_derivative(problem.potential, r, order) +
         barrier * falling_factorial(-2.0, order) * std::pow(r, -2.0 - order);
}

double clairaut_potential(const RadialProblem& problem, double x, int order) {
  if (!(x > 0.0)) throw Error(ErrorCode::NonPositiveClairautVariable, "x = " + num(x));
  const auto& spec = problem.potential;
  check_order(order, spec.max_clairaut_order(), "Clairaut potential");

  const double m = problem.m;
  const double s = problem.length_scale();
  double kinetic = 0.0;
  if (order == 0) kinetic = 0.5 * m * x * x;
  if (order == 1) kinetic = m * x;
  if (order == 2) kinetic = m;

  switch (spec.family) {
    case Family::PowerLawPositive: {
      const double c = spec.k * std::pow(s, spec.nu);
      return kinetic + c * falling_factorial(-spec.nu, order) * std::pow(x, -spec.nu - order);
    }
    case Family::PowerLawAttractive: {
      const double c = -spec.k * std::pow(s, -spec.nu);
      return kinetic + c * falling_factorial(spec.nu, order) * std::pow(x, spec.nu - order);
    }
    case Family::Logarithmic:
      if (order == 0) return kinetic + spec.k * (std::log(s) - std::log(x));
      return kinetic + spec.k * neg_log_derivative(x, order);
    case Family::Tabulated: {
      // Chain rule through r = s / x.
      const double r = s / x;
      const double g1 = -s / (x * x);
      const double g2 = 2.0 * s / (x * x * x);
      if (order == 0) return kinetic + potential_derivative(spec, r, 0);
      const double u1 = potential_derivative(spec, r, 1);
      if (order == 1) return kinetic + u1 * g1;
      const double u2 = potential_derivative(spec, r, 2);
      return kinetic + u2 * g1 * g1 + u1 * g2;
    }
  }
  return 0.0;
}

double clairaut_difference(const RadialProblem& problem, double x, double dx) {
  if (!(x > 0.0) || !(x + dx > 0.0)) {
    throw Error(ErrorCode::NonPositiveClairautVariable, "x = " + num(x + dx));
  }
  const auto& spec = problem.potential;
  const double m = problem.m;
  const double s = problem.length_scale();
  const double kinetic = 0.5 * m * dx * (2.0 * x + dx);
  // y^p - x^p = x^p expm1(p log1p(dx / x))
  auto power_difference = [&](double p) { return std::pow(x, p) * std::expm1(p * std::log1p(dx / x)); };
  switch (spec.family) {
    case Family::PowerLawPositive:
      return kinetic + spec.k * std::pow(s, spec.nu) * power_difference(-spec.nu);
    case Family::PowerLawAttractive:
      return kinetic - spec.k * std::pow(s, -spec.nu) * power_difference(spec.nu);
    case Family::Logarithmic:
      return kinetic - spec.k * std::log1p(dx / x);
    case Family::Tabulated:
      return clairaut_potential(problem, x + dx, 0) - clairaut_potential(problem, x, 0);
  }
  return 0.0;
}

double well_depth(const RadialProblem& problem, double x) {
  if (!(x > 0.0)) throw Error(ErrorCode::NonPositiveClairautVariable, "x = " + num(x));
  return clairaut_difference(problem, problem.x0, x - problem.x0);
}

double clairaut_amplitude(const PotentialSpec& spec, double m, double L) {
  switch (spec.family) {
    case Family::PowerLawPositive: return 2.0 * (spec.k / m) * std::pow(L / m, spec.nu);
    case Family::PowerLawAttractive: return 2.0 * (spec.k / m) * std::pow(L / m, -spec.nu);
    default: throw Error(ErrorCode::DomainError, "Clairaut amplitude is defined for power laws only");
  }
}

}  // namespace bertrand
