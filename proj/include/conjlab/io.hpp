// Function files, atomic output, and plot data.
#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "conjlab/function_models.hpp"

namespace conjlab {

struct FunctionFile {
  std::vector<double> knots;
  std::vector<double> values;
};

// CSV with the header line `knot,value` and one pair per row. Throws
// ParseError with the 1-based line number.
FunctionFile read_function_csv(std::istream& in);
FunctionFile read_function_csv(const std::filesystem::path& path);
void write_function_csv(std::ostream& out, std::span<const double> knots, std::span<const double> values);

Interpolation parse_interpolation(std::string_view text);  // linear | step
Tail parse_tail(std::string_view text);                    // const | power:<exp>

// Writes to a sibling temporary file and renames it over the target.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

// %.{digits}g
std::string format_number(double value, int digits);

// Two-column CSV with the given header.
std::string xy_csv(std::string_view header, std::span<const std::pair<double, double>> points);

// Minimal standalone SVG polyline, log-scaled x axis.
std::string svg_line_plot(std::span<const std::pair<double, double>> points, std::string_view title);

}  // namespace conjlab
