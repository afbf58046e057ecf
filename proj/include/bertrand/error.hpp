#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bertrand {

enum class ErrorCode {
  NonPositiveRadius,
  UnsupportedDerivativeOrder,
  NonPositiveClairautVariable,
  InvalidPotential,
  OutOfTableRange,
  NoCircularOrbit,
  MultipleMinima,
  UnstableCircularOrbit,
  EnergyBelowMinimum,
  UnboundedOrbit,
  ToleranceNotMet,
  RegularityViolation,
  ProbeOutOfDomain,
  DisplacedPointNonPositive,
  DomainError,
  InvalidGrid,
  IntegrationFailure,
  ParseError,
};

std::string_view to_string(ErrorCode code);

// Compact number text for diagnostics (%.10g).
std::string num(double value);

// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace bertrand
