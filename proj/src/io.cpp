#include "conjlab/io.hpp"

#include <unistd.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "conjlab/errors.hpp"

namespace conjlab {
namespace {

std::string_view trim(std::string_view s) {
  const auto ws = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!s.empty() && ws(s.front())) s.remove_prefix(1);
  while (!s.empty() && ws(s.back())) s.remove_suffix(1);
  return s;
}

double parse_double(std::string_view text, std::size_t line) {
  text = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw ParseError("not a number: '" + std::string(text) + "'", line);
  }
  if (!std::isfinite(v)) throw ParseError("non-finite number", line);
  return v;
}

}  // namespace

FunctionFile read_function_csv(std::istream& in) {
  FunctionFile f;
  std::string raw;
  std::size_t line = 0;
  bool header = false;
  while (std::getline(in, raw)) {
    ++line;
    const std::string_view s = trim(raw);
    if (s.empty()) continue;
    if (!header) {
      if (s != "knot,value") throw ParseError("expected header 'knot,value'", line);
      header = true;
      continue;
    }
    const auto comma = s.find(',');
    if (comma == std::string_view::npos || s.find(',', comma + 1) != std::string_view::npos) {
      throw ParseError("expected two comma-separated fields", line);
    }
    f.knots.push_back(parse_double(s.substr(0, comma), line));
    f.values.push_back(parse_double(s.substr(comma + 1), line));
  }
  if (!header) throw ParseError("empty function file", std::max<std::size_t>(line, 1));
  if (f.knots.empty()) throw ParseError("no data rows after the header", line);
  return f;
}

FunctionFile read_function_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string(), 0);
  return read_function_csv(in);
}

void write_function_csv(std::ostream& out, std::span<const double> knots, std::span<const double> values) {
  out << "knot,value\n";
  for (std::size_t i = 0; i < knots.size(); ++i) out << format_number(knots[i], 17) << ',' << format_number(values[i], 17) << '\n';
}

Interpolation parse_interpolation(std::string_view text) {
  if (text == "linear") return Interpolation::kLinear;
  if (text == "step") return Interpolation::kStepLeft;
  throw ConfigError("interpolation must be 'linear' or 'step'");
}

Tail parse_tail(std::string_view text) {
  if (text == "const") return Tail::constant();
  constexpr std::string_view prefix = "power:";
  if (text.substr(0, prefix.size()) == prefix) {
    const std::string_view num = text.substr(prefix.size());
    double p = 0.0;
    const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), p);
    if (ec == std::errc{} && ptr == num.data() + num.size() && !num.empty() && std::isfinite(p)) return Tail::power(p);
  }
  throw ConfigError("tail must be 'const' or 'power:<exponent>'");
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string format_number(double value, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, value);
  return buf;
}

std::string xy_csv(std::string_view header, std::span<const std::pair<double, double>> points) {
  std::string out(header);
  out += '\n';
  for (const auto& [x, y] : points) {
    out += format_number(x, 17);
    out += ',';
    out += format_number(y, 17);
    out += '\n';
  }
  return out;
}

std::string svg_line_plot(std::span<const std::pair<double, double>> points, std::string_view title) {
  constexpr double W = 640, H = 400, pad = 40;
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& [x, y] : points) {
    if (!(x > 0.0) || !std::isfinite(y)) continue;
    x0 = std::min(x0, std::log10(x));
    x1 = std::max(x1, std::log10(x));
    y0 = std::min(y0, y);
    y1 = std::max(y1, y);
  }
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  svg << "<text x=\"" << pad << "\" y=\"20\" font-size=\"14\">" << title << "</text>\n";
  if (x1 > x0) {
    if (!(y1 > y0)) {
      y0 -= 0.5;
      y1 += 0.5;
    }
    svg << "<polyline fill=\"none\" stroke=\"black\" points=\"";
    for (const auto& [x, y] : points) {
      if (!(x > 0.0) || !std::isfinite(y)) continue;
      const double px = pad + (std::log10(x) - x0) / (x1 - x0) * (W - 2 * pad);
      const double py = H - pad - (y - y0) / (y1 - y0) * (H - 2 * pad);
      svg << format_number(px, 6) << ',' << format_number(py, 6) << ' ';
    }
    svg << "\"/>\n";
    svg << "<text x=\"" << pad << "\" y=\"" << H - 10 << "\" font-size=\"11\">log10 t: " << format_number(x0, 4)
        << " .. " << format_number(x1, 4) << "; y: " << format_number(y0, 6) << " .. " << format_number(y1, 6)
        << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace conjlab
