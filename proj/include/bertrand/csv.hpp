#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace bertrand::csv {

// 17 significant digits, so every double survives a round trip.
std::string format(double value);

void write_row(std::ostream& out, const std::vector<std::string>& cells);

struct Table {
  std::vector<std::string> comments;  // lines starting with '#', without it
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Column index by name; throws ParseError when absent.
  std::size_t column(std::string_view name) const;
};

// Plain comma-separated text, no quoting. The first non-comment line is
// the header; comment lines after it are kept in `comments` as well.
Table read(std::istream& in);

double to_double(std::string_view cell);

}  // namespace bertrand::csv
