#include "hyperquad/pointfile.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>

namespace hyperquad {

namespace {

bool is_blank(const std::string& line) {
  return line.find_first_not_of(" \t\r") == std::string::npos;
}

/// Parses "# dim=<d>" (spaces allowed around the tokens).
std::optional<std::size_t> header_dim(const std::string& line) {
  std::size_t pos = line.find_first_not_of(" \t");
  if (pos == std::string::npos || line[pos] != '#') return std::nullopt;
  pos = line.find_first_not_of(" \t", pos + 1);
  if (pos == std::string::npos || line.compare(pos, 4, "dim=") != 0) return std::nullopt;
  pos += 4;
  std::size_t d = 0;
  const char* first = line.data() + pos;
  const char* last = line.data() + line.size();
  const auto [ptr, ec] = std::from_chars(first, last, d);
  if (ec != std::errc() || ptr == first) return std::nullopt;
  for (const char* c = ptr; c != last; ++c) {
    if (*c != ' ' && *c != '\t' && *c != '\r') return std::nullopt;
  }
  return d;
}

std::vector<double> parse_values(const std::string& line, std::size_t number) {
  std::vector<double> values;
  const char* p = line.data();
  const char* last = p + line.size();
  for (;;) {
    while (p != last && (*p == ' ' || *p == '\t' || *p == '\r')) ++p;
    if (p == last) break;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(p, last, v);
    if (ec != std::errc() || ptr == p) throw ParseError(number, "malformed number");
    if (ptr != last && *ptr != ' ' && *ptr != '\t' && *ptr != '\r') throw ParseError(number, "malformed number");
    if (!std::isfinite(v)) throw ParseError(number, "non-finite coordinate");
    values.push_back(v);
    p = ptr;
  }
  return values;
}

}  // namespace

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

PointSet read_points(std::istream& in) {
  PointSet set;
  std::string line;
  std::size_t number = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++number;
    if (is_blank(line)) continue;
    if (line[line.find_first_not_of(" \t")] == '#') {
      if (const auto d = header_dim(line)) {
        if (have_header) throw ParseError(number, "duplicate dim header");
        if (*d < 2) throw ParseError(number, "dimension must be at least 2");
        if (!set.points.empty()) throw ParseError(number, "dim header after data");
        set.dim = *d;
        have_header = true;
      }
      continue;
    }
    if (!have_header) throw ParseError(number, "missing '# dim=<d>' header");
    std::vector<double> values = parse_values(line, number);
    if (values.size() != set.dim) {
      throw ParseError(number, "expected " + std::to_string(set.dim) + " values, got " + std::to_string(values.size()));
    }
    const double z = values.back();
    if (!(z > 0.0)) throw ParseError(number, "z must be positive");
    values.pop_back();
    set.points.emplace_back(std::move(values), z);
  }
  if (!have_header) throw ParseError(0, "missing '# dim=<d>' header");
  return set;
}

PointSet read_points(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open " + path.string());
  return read_points(in);
}

std::string format_double(double v) {
  char buf[32];
  const int len = std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf, static_cast<std::size_t>(len));
}

void write_points(std::ostream& out, std::size_t dim, std::span<const Point> points) {
  require_dimension(points, dim);
  out << "# dim=" << dim << '\n';
  for (const Point& p : points) {
    for (double x : p.x()) out << format_double(x) << ' ';
    out << format_double(p.z()) << '\n';
  }
}

void write_points(const std::filesystem::path& path, std::size_t dim, std::span<const Point> points) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_points(out, dim, points);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace hyperquad
