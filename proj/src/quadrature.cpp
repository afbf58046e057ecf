#include "bertrand/quadrature.hpp"

#include <array>
#include <bit>

namespace bertrand::quadrature {

namespace {

// Newton iteration on P_n from the standard cosine initial guesses.
Rule compute_rule(int n) {
  Rule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = z;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double step = p1 / dp;
      z -= step;
      if (std::abs(step) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    rule.nodes[i] = -z;
    rule.nodes[n - 1 - i] = z;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

constexpr int kCachedRules = std::countr_zero(static_cast<unsigned>(kMaxOrder)) -
                             std::countr_zero(static_cast<unsigned>(kMinOrder)) + 1;

const std::array<Rule, kCachedRules>& cached_rules() {
  static const std::array<Rule, kCachedRules> rules = [] {
    std::array<Rule, kCachedRules> out;
    for (int i = 0; i < kCachedRules; ++i) out[i] = compute_rule(kMinOrder << i);
    return out;
  }();
  return rules;
}

}  // namespace

const Rule& gauss_legendre(int n) {
  if (n >= kMinOrder && n <= kMaxOrder && std::has_single_bit(static_cast<unsigned>(n))) {
    const int index = std::countr_zero(static_cast<unsigned>(n)) - std::countr_zero(static_cast<unsigned>(kMinOrder));
    return cached_rules()[index];
  }
  if (n < 1) throw Error(ErrorCode::DomainError, "quadrature order must be positive");
  thread_local Rule scratch;
  scratch = compute_rule(n);
  return scratch;
}

}  // namespace bertrand::quadrature
