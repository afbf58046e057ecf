#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "bertrand/apsidal.hpp"
#include "bertrand/potentials.hpp"

namespace bertrand::cli {

// Exit codes of run().
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// powerlaw:+,nu=<f>,k=<f>[,b=<f>] | powerlaw:-,... | log:k=<f>[,b=<f>]
// Case-insensitive; unknown or repeated keys are rejected.
PotentialSpec parse_potential(std::string_view text);

// <min>:<max>:<step> (inclusive of max up to rounding) or a comma list.
std::vector<double> parse_grid(std::string_view text);

// A number, optionally scaled by pi: "2.5", "4pi", "pi/2", "0.5pi/3".
double parse_scalar(std::string_view text);

// parse_grid, plus auto:<N> which picks N energies per problem spaced
// geometrically in depth between the degenerate window and the top of the
// bound range.
EnergyGrid parse_energy_grid(std::string_view text);

}  // namespace bertrand::cli
