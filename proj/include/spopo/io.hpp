#pragma once

#include <string>
#include <vector>

namespace spopo::io {

// Scientific notation with 17 significant digits: lossless for doubles.
std::string format_double(double value);

// Comma-joined record of formatted numbers.
std::string csv_row(const std::vector<double>& values);

// Parses a number written by format_double (or any strtod-compatible text).
double parse_double(const std::string& text);

// Splits one CSV line on commas; no quoting support.
std::vector<std::string> split_csv(const std::string& line);

}  // namespace spopo::io
