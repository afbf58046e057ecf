// One PASS/FAIL line per acceptance criterion. Tolerances are fixed here;
// exit status is the number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "bertrand/apsidal.hpp"
#include "bertrand/cli.hpp"
#include "bertrand/fractional.hpp"
#include "bertrand/isochrony.hpp"
#include "bertrand/orbit.hpp"
#include "bertrand/turning.hpp"
#include "oracles.hpp"

using namespace bertrand;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

std::vector<double> grid(double lo, double hi, double step) {
  std::vector<double> out;
  const int n = static_cast<int>(std::floor((hi - lo) / step + 1e-9));
  for (int i = 0; i <= n; ++i) out.push_back(lo + i * step);
  return out;
}

// Sweep of Phi over L in {0.5, 1, 2} and 20 automatic energies per L.
double isochrony_sweep(const PotentialSpec& spec, double expected, int& cells) {
  const double momenta[] = {0.5, 1.0, 2.0};
  const auto sweep = apsidal_sweep(spec, 1.0, momenta, cli::parse_energy_grid("auto:20"), 1e-12, 4);
  double worst = 0.0;
  cells = 0;
  for (const auto& cell : sweep) {
    ++cells;
    worst = std::max(worst, cell.status == SweepStatus::Ok ? std::abs(cell.result.phi - expected) : INFINITY);
  }
  return worst;
}

Outcome kepler_isochrony() {
  constexpr double tol = 1e-8, budget_s = 5.0;
  const auto start = std::chrono::steady_clock::now();
  int cells = 0;
  const double worst = isochrony_sweep(PotentialSpec::kepler(), oracle::pi, cells);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {cells == 60 && worst <= tol && seconds < budget_s,
          fmt("max|phi-pi|=%.3g over %.0f cells, %.3f s", worst, cells, seconds)};
}

Outcome hooke_isochrony() {
  constexpr double tol = 1e-8;
  int cells = 0;
  const double worst = isochrony_sweep(PotentialSpec::hooke(), oracle::pi / 2, cells);
  return {cells == 60 && worst <= tol, fmt("max|phi-pi/2|=%.3g over %.0f cells", worst, cells)};
}

Outcome near_circular() {
  constexpr double tol = 1e-4;
  double worst = 0.0;
  for (double nu : {0.3, 0.7, 1.3, 1.7}) {
    const auto p = make_problem(PotentialSpec::power_law_attractive(nu));
    const double phi = apsidal_angle(p, p.V_R + 1e-8).phi;
    worst = std::max(worst, std::abs(phi - oracle::pi / std::sqrt(2.0 - nu)));
  }
  return {worst <= tol, fmt("max|phi(V_R+1e-8)-pi/sqrt(2-nu)|=%.3g", worst)};
}

Outcome global_selection() {
  constexpr double attractive_tol = 1e-10, positive_tol = 1e-12;
  auto admissible = [](const ScanResult& scan) {
    std::vector<double> roots;
    for (const auto& root : scan.roots) {
      if (root.admissible) roots.push_back(root.nu);
    }
    return roots;
  };
  const auto a = admissible(bertrand_scan(IsoFamily::Attractive, grid(0.05, 1.95, 0.01)));
  const auto p = admissible(bertrand_scan(IsoFamily::Positive, grid(0.05, 5.0, 0.01)));
  const bool ok = a.size() == 1 && std::abs(a[0] - 1.0) <= attractive_tol && p.size() == 1 &&
                  std::abs(p[0] - 2.0) <= positive_tol;
  return {ok, fmt("attractive roots=%.0f (%.15g), positive roots=%.0f", a.size(), a.empty() ? NAN : a[0], p.size()) +
                  fmt(" (%.15g)", p.empty() ? NAN : p[0])};
}

Outcome functional_certificate() {
  constexpr double accept = 1e-10, reject = 1e-3;
  const auto at_one = isochrony_report(IsoFamily::Attractive, 1.0);
  const auto at_two = isochrony_report(IsoFamily::Positive, 2.0);
  const double on_root = std::max(at_one.residual_sup / std::abs(at_one.V_R), at_two.residual_sup / std::abs(at_two.V_R));
  double off_root = INFINITY;
  for (const auto& [family, nus, root] : {std::tuple{IsoFamily::Attractive, grid(0.05, 1.95, 0.01), 1.0},
                                           std::tuple{IsoFamily::Positive, grid(0.05, 5.0, 0.01), 2.0}}) {
    for (const auto& r : bertrand_scan(family, nus).reports) {
      if (std::abs(r.nu - root) >= 0.05) off_root = std::min(off_root, r.residual_sup / std::abs(r.V_R));
    }
  }
  return {on_root <= accept && off_root >= reject,
          fmt("sup/|V_R| at roots=%.3g, min off-root=%.3g", on_root, off_root)};
}

Outcome abel_round_trip() {
  constexpr double tol = 1e-6;
  const auto p = make_problem(PotentialSpec::kepler());
  const auto law = constant_period_law(p, oracle::pi);
  double worst = 0.0;
  for (int i = 1; i <= 20; ++i) {
    const double E = p.V_R * (1.0 - i / 21.0);
    worst = std::max(worst, std::abs(invert_period(law, p, E, 1e-10) - oracle::kepler_width(E)));
  }
  return {worst <= tol, fmt("max|dx - 2 sqrt(2E+1)|=%.3g over 20 energies", worst)};
}

Outcome fractional_identities() {
  constexpr double unit_tol = 1e-8, inverse_tol = 1e-6;
  const double base = -0.5;
  double unit = 0.0;
  EnergyFunction one{[](double) { return 1.0; }, base};
  for (int i = 1; i <= 10; ++i) {
    const double E = base + 0.3 * i;
    unit = std::max(unit, std::abs(semi_integral(one, E, 1e-12) - 2.0 / std::sqrt(oracle::pi) * std::sqrt(E - base)));
  }
  double inverse = 0.0;
  for (double p : {0.5, 1.0, 1.5, 2.0}) {
    EnergyFunction g{[=](double w) { return std::pow(std::max(0.0, w - base), p); }, base, Regularity::VanishesAtBase};
    EnergyFunction half{[&](double w) { return semi_derivative(g, w, 1e-9); }, base};
    for (int i = 1; i <= 10; ++i) {
      const double E = base + 0.2 * i;
      inverse = std::max(inverse, std::abs(semi_integral(half, E, 1e-8) - std::pow(E - base, p)));
    }
  }
  return {unit <= unit_tol && inverse <= inverse_tol,
          fmt("D^-1/2 1 err=%.3g, D^-1/2 D^1/2 err=%.3g", unit, inverse)};
}

Outcome perturbative_constraints() {
  constexpr double tol = 1e-9, floor_factor = 0.1;
  const auto kep = isochrony_constraints(make_problem(PotentialSpec::kepler()));
  const auto hk_problem = make_problem(PotentialSpec::hooke(0.5));  // A_+ = 1
  const auto hk = isochrony_constraints(hk_problem);
  const bool fixture = std::abs(clairaut_potential(hk_problem, hk_problem.x0, 3) + 12.0) <= 1e-9 &&
                       std::abs(clairaut_potential(hk_problem, hk_problem.x0, 4) - 60.0) <= 1e-9 &&
                       std::abs(clairaut_potential(hk_problem, hk_problem.x0, 2) - 4.0) <= 1e-9;
  const double zero = std::max({std::abs(kep.fourth_order_violation), std::abs(hk.fourth_order_violation),
                                std::abs(kep.a2_residual), std::abs(hk.a2_residual)});
  const auto p15 = make_problem(PotentialSpec::power_law_attractive(1.5));
  const double ratio = std::abs(isochrony_constraints(p15).fourth_order_violation) /
                       (std::abs(p15.V_R) / (p15.x0 * p15.x0));
  return {fixture && zero <= tol && ratio >= floor_factor,
          fmt("max violation/a2 residual at Kepler,Hooke=%.3g; nu=1.5 violation x0^2/|V_R|=%.4g", zero, ratio)};
}

Outcome series_agreement() {
  constexpr double lo = 25.0, hi = 40.0;
  const auto hk = make_problem(PotentialSpec::hooke(0.5));
  std::vector<double> errors;
  for (double eps = 0.05; errors.size() < 4; eps /= 2) {
    const auto lat = lateral_map(hk, oracle::pi / 2, eps);
    errors.push_back(std::abs(lat.exact - lat.series));
  }
  bool ok = true;
  std::string ratios;
  for (std::size_t i = 1; i < errors.size(); ++i) {
    const double ratio = errors[i - 1] / errors[i];
    ok = ok && ratio >= lo && ratio <= hi;
    ratios += fmt(i == 1 ? "%.3f" : ",%.3f", ratio);
  }
  return {ok, "error ratios under halving " + ratios};
}

Outcome orbit_closure() {
  constexpr double state_tol = 1e-6, period_tol = 1e-3;
  const double two_pi = 2.0 * oracle::pi;
  OrbitOptions at_2pi;
  at_2pi.angles = {two_pi};
  auto return_error = [&](const RadialProblem& p, double E) -> double {
    const auto trace = integrate_binet(p, E, two_pi, 1e-10, at_2pi);
    const double x_start = trace.samples.front().coord;
    for (const auto& s : trace.samples) {
      if (s.kind == SampleKind::Requested) return std::max(std::abs(s.coord - x_start), std::abs(s.deriv));
    }
    return INFINITY;
  };
  const auto kep = make_problem(PotentialSpec::kepler());
  const auto hk = make_problem(PotentialSpec::hooke());
  const double kep_err = return_error(kep, -0.3);
  const double hk_err = return_error(hk, 3.0);
  const auto hk_trace = integrate_binet(hk, 3.0, two_pi * (1.0 + 1e-9));
  const auto oscillations = hk_trace.of_kind(SampleKind::Apocenter).size();

  const auto rosette = classify_orbit(make_problem(PotentialSpec::power_law_attractive(0.5)), -0.3 * 0.5, 20, 1e-6);

  const double E = -3.0 / 8.0;
  const double expected = two_pi * std::pow(4.0 / 3.0, 1.5);
  const auto radial = integrate_radial(kep, E, 1.5 * expected);
  const auto apo = radial.of_kind(SampleKind::Apocenter);
  const double period = apo.empty() ? NAN : apo.front().param;
  const double period_err = std::abs(period - expected);

  const bool ok = kep_err <= state_tol && hk_err <= state_tol && oscillations == 2 &&
                  rosette.kind == ClosureKind::Rosette && period_err <= period_tol;
  return {ok, fmt("return error Kepler=%.3g Hooke=%.3g, ", kep_err, hk_err) +
                  fmt("Hooke oscillations=%.0f, nu=0.5 ", oscillations) +
                  std::string(to_string(rosette.kind)) + fmt(", Kepler period err=%.3g", period_err)};
}

Outcome reconstruction() {
  constexpr double tol = 1e-3;
  std::vector<double> r;
  for (int i = 0; i < 200; ++i) r.push_back(0.5 + 1.5 * i / 199.0);
  double worst = 0.0;
  for (const auto& [phi_c, expected] : {std::pair{oracle::pi / 2, 1.0}, std::pair{oracle::pi, -2.0},
                                        std::pair{oracle::pi / std::sqrt(2.0), -1.0}}) {
    const auto ex = local_exponents(reconstruct_potential([phi_c](double) { return phi_c; }, r));
    for (std::size_t i = 1; i + 1 < ex.size(); ++i) worst = std::max(worst, std::abs(ex[i] - expected));
  }
  return {worst <= tol, fmt("max|d ln U'/d ln r - target|=%.3g", worst)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"kepler-isochrony", kepler_isochrony},
      {"hooke-isochrony", hooke_isochrony},
      {"near-circular-limit", near_circular},
      {"global-selection", global_selection},
      {"functional-certificate", functional_certificate},
      {"abel-round-trip", abel_round_trip},
      {"fractional-identities", fractional_identities},
      {"perturbative-constraints", perturbative_constraints},
      {"series-agreement", series_agreement},
      {"orbit-closure", orbit_closure},
      {"reconstruction", reconstruction},
  };
  int failed = 0;
  int index = 0;
  for (const auto& [name, check] : criteria) {
    Outcome outcome;
    try {
      outcome = check();
    } catch (const std::exception& e) {
      outcome = {false, std::string("threw ") + e.what()};
    }
    failed += !outcome.pass;
    std::printf("%s %2d %s: %s\n", outcome.pass ? "PASS" : "FAIL", ++index, name, outcome.detail.c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed;
}
