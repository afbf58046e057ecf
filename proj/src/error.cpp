#include "bertrand/error.hpp"

#include <cstdio>

namespace bertrand {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonPositiveRadius: return "NonPositiveRadius";
    case ErrorCode::UnsupportedDerivativeOrder: return "UnsupportedDerivativeOrder";
    case ErrorCode::NonPositiveClairautVariable: return "NonPositiveClairautVariable";
    case ErrorCode::InvalidPotential: return "InvalidPotential";
    case ErrorCode::OutOfTableRange: return "OutOfTableRange";
    case ErrorCode::NoCircularOrbit: return "NoCircularOrbit";
    case ErrorCode::MultipleMinima: return "MultipleMinima";
    case ErrorCode::UnstableCircularOrbit: return "UnstableCircularOrbit";
    case ErrorCode::EnergyBelowMinimum: return "EnergyBelowMinimum";
    case ErrorCode::UnboundedOrbit: return "UnboundedOrbit";
    case ErrorCode::ToleranceNotMet: return "ToleranceNotMet";
    case ErrorCode::RegularityViolation: return "RegularityViolation";
    case ErrorCode::ProbeOutOfDomain: return "ProbeOutOfDomain";
    case ErrorCode::DisplacedPointNonPositive: return "DisplacedPointNonPositive";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::InvalidGrid: return "InvalidGrid";
    case ErrorCode::IntegrationFailure: return "IntegrationFailure";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

std::string num(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", value);
  return buf;
}

}  // namespace bertrand
