#pragma once

// Text point files: a "# dim=<d>" header, then one point per line as d
// whitespace-separated decimals (x_1 ... x_{d-1} z). Other lines starting
// with '#' and blank lines are ignored. Values are written with 17
// significant digits so every double round-trips exactly.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hyperquad/geometry.hpp"

namespace hyperquad {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what);
  /// 1-based line number, 0 for file-level problems.
  [[nodiscard]] std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

struct PointSet {
  std::size_t dim = 0;
  std::vector<Point> points;
};

[[nodiscard]] PointSet read_points(std::istream& in);
/// Throws ParseError, including for unreadable files (line 0).
[[nodiscard]] PointSet read_points(const std::filesystem::path& path);

/// Throws std::invalid_argument if a point has the wrong dimension.
void write_points(std::ostream& out, std::size_t dim, std::span<const Point> points);
void write_points(const std::filesystem::path& path, std::size_t dim, std::span<const Point> points);

/// A double as 17 significant digits (printf "%.17g").
[[nodiscard]] std::string format_double(double v);

}  // namespace hyperquad
