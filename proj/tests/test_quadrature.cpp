#include <doctest.h>

#include <cmath>

#include "bertrand/error.hpp"
#include "bertrand/quadrature.hpp"

using namespace bertrand;

TEST_CASE("8-point Gauss-Legendre nodes and weights") {
  // Abramowitz & Stegun table 25.4
  const double nodes[] = {0.1834346424956498, 0.5255324099163290, 0.7966664774136267, 0.9602898564975363};
  const double weights[] = {0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};
  const auto& rule = quadrature::gauss_legendre(8);
  REQUIRE(rule.nodes.size() == 8);
  for (int i = 0; i < 4; ++i) {
    CHECK(rule.nodes[4 + i] == doctest::Approx(nodes[i]).epsilon(1e-15));
    CHECK(rule.nodes[3 - i] == doctest::Approx(-nodes[i]).epsilon(1e-15));
    CHECK(rule.weights[4 + i] == doctest::Approx(weights[i]).epsilon(1e-14));
    CHECK(rule.weights[3 - i] == doctest::Approx(weights[i]).epsilon(1e-14));
  }
}

TEST_CASE("n-point rules integrate monomials up to degree 2n - 1") {
  for (int n : {3, 8, 17, 64, 1024}) {
    const auto& rule = quadrature::gauss_legendre(n);
    double wsum = 0.0;
    for (double w : rule.weights) wsum += w;
    CHECK(wsum == doctest::Approx(2.0).epsilon(1e-13));
    for (int d : {0, 2, 2 * n - 2}) {
      double sum = 0.0;
      for (int i = 0; i < n; ++i) sum += rule.weights[i] * std::pow(rule.nodes[i], d);
      CHECK(sum == doctest::Approx(2.0 / (d + 1)).epsilon(1e-12));
    }
  }
}

TEST_CASE("order doubling converges and reports its estimate") {
  const auto est = quadrature::integrate([](double x) { return std::exp(x); }, 0.0, 1.0, 1e-14);
  CHECK(est.value == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-15));
  CHECK(est.err_est < 1e-14);
  CHECK(est.order == 16);

  const auto sin2 = quadrature::integrate_sin2(
      [](double t) {
        const auto p = quadrature::sin2_point(2.0, t);
        return p.jacobian / std::sqrt(p.from_lo * p.from_hi);  // int_0^2 du / sqrt(u (2 - u)) = pi
      },
      1e-13);
  CHECK(sin2.value == doctest::Approx(M_PI).epsilon(1e-14));
}

TEST_CASE("unreachable tolerance is an error") {
  auto kink = [](double x) { return std::sqrt(std::abs(x - 0.3)); };
  CHECK_THROWS_AS(quadrature::integrate(kink, 0.0, 1.0, 1e-15), Error);
  try {
    quadrature::integrate(kink, 0.0, 1.0, 1e-15);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ToleranceNotMet);
  }
  try {
    quadrature::integrate([](double x) { return 1.0 / x; }, -1.0, 1.0, 1e-8);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ToleranceNotMet);
  }
}
