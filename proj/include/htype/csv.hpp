#pragma once

#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace htype {

/// Shortest representation that parses back to the same double.
std::string format_double(double x);

/// Strict parse of a whole field; throws Error(InvalidArgument) otherwise.
double parse_double(std::string_view text);

/// Comma-separated values, LF terminated.
void write_csv_row(std::ostream& out, std::span<const double> values);
void write_csv_header(std::ostream& out, const std::vector<std::string>& names);

}  // namespace htype
