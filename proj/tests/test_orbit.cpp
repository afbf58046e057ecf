#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "bertrand/apsidal.hpp"
#include "bertrand/csv.hpp"
#include "bertrand/error.hpp"
#include "bertrand/orbit.hpp"
#include "bertrand/turning.hpp"
#include "oracles.hpp"

using namespace bertrand;

TEST_CASE("Kepler Binet orbit is x = 1 - cos(phi)/2") {
  const auto kep = make_problem(PotentialSpec::kepler());
  OrbitOptions options;
  for (int i = 1; i <= 50; ++i) options.angles.push_back(2.0 * oracle::pi * i / 50.0);
  const auto trace = integrate_binet(kep, -0.375, 2.0 * oracle::pi, 1e-10, options);
  CHECK(trace.samples.front().coord == doctest::Approx(0.5).epsilon(1e-14));
  for (const auto& s : trace.of_kind(SampleKind::Requested)) {
    CHECK(std::abs(s.coord - (1.0 - 0.5 * std::cos(s.param))) <= 1e-8);
    CHECK(std::abs(s.deriv - 0.5 * std::sin(s.param)) <= 1e-8);
  }
  const auto& last = trace.samples.back();
  CHECK(last.param == doctest::Approx(2.0 * oracle::pi).epsilon(1e-15));
  CHECK(std::abs(last.coord - 0.5) <= 1e-6);
  CHECK(std::abs(last.deriv) <= 1e-6);
  CHECK(trace.closure.kind == ClosureKind::Closed);
  CHECK(trace.closure.p == 1);
  CHECK(trace.closure.q == 1);
}

TEST_CASE("samples increase strictly and stay positive") {
  const auto p = make_problem(PotentialSpec::power_law_attractive(0.5));
  OrbitOptions options;
  options.angles = {1.0, 2.0, 2.0000001, 10.0};
  for (const auto& trace : {integrate_binet(p, p.V_R + 0.1, 40.0, 1e-10, options),
                            integrate_radial(p, p.V_R + 0.1, 40.0, 1e-10, options)}) {
    for (std::size_t i = 1; i < trace.samples.size(); ++i) {
      CHECK(trace.samples[i].param > trace.samples[i - 1].param);
      CHECK(trace.samples[i].coord > 0.0);
    }
    CHECK(trace.of_kind(SampleKind::Requested).size() == 4);
  }
}

TEST_CASE("circular orbit stays put") {
  const auto hk = make_problem(PotentialSpec::hooke());
  const auto trace = integrate_binet(hk, hk.V_R, 4.0 * oracle::pi);
  for (const auto& s : trace.samples) CHECK(s.coord == doctest::Approx(hk.x0).epsilon(1e-12));
  CHECK(trace.closure.kind == ClosureKind::Circular);
  CHECK(trace.of_kind(SampleKind::Apocenter).empty());
}

TEST_CASE("radial periods against Kepler's third law and the oscillator") {
  const auto kep = make_problem(PotentialSpec::kepler());
  const auto trace = integrate_radial(kep, -0.375, 12.0);
  const auto apo = trace.of_kind(SampleKind::Apocenter);
  REQUIRE(!apo.empty());
  CHECK(std::abs(apo[0].param - 2.0 * oracle::pi * std::pow(4.0 / 3.0, 1.5)) <= 1e-3);
  CHECK(apo[0].param == doctest::Approx(oracle::kepler_radial_period(-0.375)).epsilon(1e-9));
  CHECK(apo[0].coord == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(apo[0].other == doctest::Approx(2.0 * oracle::pi).epsilon(1e-9));

  const auto hk = make_problem(PotentialSpec::hooke());
  const auto osc = integrate_radial(hk, 3.0, 5.0).of_kind(SampleKind::Apocenter);
  REQUIRE(osc.size() >= 2);
  CHECK(std::abs(osc[0].param - oracle::hooke_radial_period()) <= 1e-6);
  CHECK(std::abs(osc[1].param - osc[0].param - oracle::hooke_radial_period()) <= 1e-6);
}

TEST_CASE("the two formulations trace the same orbit") {
  for (const auto& spec : {PotentialSpec::kepler(), PotentialSpec::hooke()}) {
    const auto p = make_problem(spec);
    const double E = p.V_R + 0.3 * std::abs(p.V_R);
    OrbitOptions options;
    for (int i = 1; i <= 100; ++i) options.angles.push_back(4.0 * oracle::pi * i / 101.0);
    const auto binet = integrate_binet(p, E, 4.0 * oracle::pi, 1e-10, options).of_kind(SampleKind::Requested);
    const auto radial = integrate_radial(p, E, 40.0, 1e-10, options).of_kind(SampleKind::Requested);
    REQUIRE(binet.size() == 100);
    REQUIRE(radial.size() == 100);
    for (std::size_t i = 0; i < 100; ++i) {
      CHECK(radial[i].other == doctest::Approx(binet[i].param).epsilon(1e-12));
      CHECK(std::abs(radial[i].coord - p.to_radius(binet[i].coord)) <= 1e-6);
    }
  }
}

TEST_CASE("conservation over ten radial periods") {
  for (const auto& spec : {PotentialSpec::kepler(), PotentialSpec::hooke(), PotentialSpec::power_law_attractive(0.5),
                           PotentialSpec::power_law_positive(3.0), PotentialSpec::logarithmic()}) {
    const auto p = make_problem(spec);
    const double E = p.V_R + 0.2 * std::abs(p.V_R);
    const double period = 2.0 * radial_half_period(p, E).value;
    const double phi = apsidal_angle(p, E).phi;
    const auto radial = integrate_radial(p, E, 10.0 * period, 1e-10);
    const auto binet = integrate_binet(p, E, 20.0 * phi, 1e-10);
    CHECK(radial.energy_drift <= 1e-9 * std::max(1.0, std::abs(E)));
    CHECK(binet.energy_drift <= 1e-9 * std::max(1.0, std::abs(E)));
    CHECK(radial.momentum_drift <= 1e-9);
  }
}

TEST_CASE("extremes of x match the turning points; apocenters are 2 Phi apart") {
  for (double nu : {0.5, 1.0, 1.5}) {
    const auto p = make_problem(PotentialSpec::power_law_attractive(nu));
    const double E = p.V_R * 0.7;
    const auto pair = turning_points(p, E);
    const double phi = apsidal_angle(p, E).phi;
    const auto trace = integrate_binet(p, E, 6.5 * phi);
    double lo = INFINITY, hi = -INFINITY;
    for (const auto& s : trace.samples) {
      if (s.param > 2.0 * phi) break;
      lo = std::min(lo, s.coord);
      hi = std::max(hi, s.coord);
    }
    CHECK(std::abs(lo - pair.x_lt) <= 1e-8);
    CHECK(std::abs(hi - pair.x_gt) <= 1e-8);
    const auto apo = trace.of_kind(SampleKind::Apocenter);
    REQUIRE(apo.size() >= 3);
    CHECK(std::abs(apo[0].param - 2.0 * phi) <= 1e-6);
    CHECK(std::abs(apo[2].param - apo[1].param - 2.0 * phi) <= 1e-6);
    const auto peri = trace.of_kind(SampleKind::Pericenter);
    REQUIRE(!peri.empty());
    CHECK(std::abs(peri[0].param - phi) <= 1e-6);
    CHECK(std::abs(peri[0].coord - pair.x_gt) <= 1e-8);
  }
}

TEST_CASE("closure search against a brute-force scan") {
  CHECK(closure_check(oracle::pi, 20, 1e-6) == std::make_pair(1, 1));
  CHECK(closure_check(oracle::pi / 2, 20, 1e-6) == std::make_pair(1, 2));
  CHECK(!closure_check(oracle::pi / std::sqrt(2.0), 64, 1e-6));
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> angle(0.05, 12.0);
  for (int i = 0; i < 3000; ++i) {
    const double phi = angle(rng);
    for (double tol : {1e-2, 1e-4, 1e-6}) {
      CHECK(closure_check(phi, 64, tol) == oracle::closure_brute(phi, 64, tol));
    }
  }
  for (int q = 1; q <= 30; ++q) {
    for (int p = 1; p <= 2 * q; ++p) {
      const double phi = oracle::pi * p / q;
      CHECK(closure_check(phi, 30, 1e-12) == oracle::closure_brute(phi, 30, 1e-12));
    }
  }
}

TEST_CASE("classification") {
  const auto kep = make_problem(PotentialSpec::kepler());
  CHECK(classify_orbit(kep, -0.375, 20, 1e-6).kind == ClosureKind::Closed);
  CHECK(classify_orbit(kep, kep.V_R, 20, 1e-6).kind == ClosureKind::Circular);
  CHECK(classify_orbit(kep, 0.2, 20, 1e-6).kind == ClosureKind::Unbounded);
  const auto att = make_problem(PotentialSpec::power_law_attractive(0.5));
  CHECK(classify_orbit(att, att.V_R + 0.1, 20, 1e-6).kind == ClosureKind::Rosette);
  const auto lg = make_problem(PotentialSpec::logarithmic());
  CHECK(classify_orbit(lg, lg.V_R + 1e-13, 20, 1e-6).kind == ClosureKind::Circular);
  CHECK(!closure_check(circular_apsidal(lg.potential, lg.R), 64, 1e-6));
}

TEST_CASE("failures") {
  const auto kep = make_problem(PotentialSpec::kepler());
  auto code = [](auto&& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::DomainError;
  };
  CHECK(code([&] { integrate_radial(kep, 0.1, 10.0); }) == ErrorCode::UnboundedOrbit);
  CHECK(code([&] { integrate_binet(kep, -0.6, 10.0); }) == ErrorCode::EnergyBelowMinimum);
  CHECK(code([&] { integrate_binet(kep, -0.3, 10.0, 1e-17); }) == ErrorCode::IntegrationFailure);
}

TEST_CASE("trace CSV layout") {
  const auto kep = make_problem(PotentialSpec::kepler());
  const auto trace = integrate_radial(kep, -0.375, 1.0);
  std::stringstream out;
  write_trace_csv(out, trace);
  const auto table = csv::read(out);
  REQUIRE(table.comments.size() == 1);
  CHECK(table.comments[0] == " formulation=radial");
  CHECK(table.header == std::vector<std::string>{"param", "r_or_x", "deriv", "phi_or_t", "energy"});
  REQUIRE(table.rows.size() == trace.samples.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    CHECK(csv::to_double(table.rows[i][1]) == trace.samples[i].coord);
    CHECK(csv::to_double(table.rows[i][4]) == trace.samples[i].energy);
  }
}
