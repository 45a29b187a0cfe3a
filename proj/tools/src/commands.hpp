#pragma once

// Subcommands of the hyperquad CLI, callable without going through argv.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "hyperquad/geometry.hpp"
#include "hyperquad/pointfile.hpp"

namespace hyperquad::cli {

using nlohmann::json;

/// Raised for bad parameters; the CLI maps it to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GenOptions {
  std::size_t dim = 2;
  std::size_t n = 1000;
  std::string mode = "ball";  // "ball" or "box"
  double radius = 5.0;
  double width = 1.0;
  double height = 8.0;
  std::uint64_t seed = 0;
};

[[nodiscard]] std::vector<Point> cmd_gen(const GenOptions& options);

struct Table1Entry {
  int level = 0;
  double alpha = 1.0;
  double alpha_child = 1.0;
  double computed = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  [[nodiscard]] bool pass() const;
};

/// The nine child/parent diameter ratios with their reference values.
[[nodiscard]] std::vector<Table1Entry> table1_entries();
[[nodiscard]] json cmd_table1();

struct ValidateOptions {
  /// Index scale; estimated from the points when absent.
  std::optional<double> delta;
  std::size_t queries = 100;
  std::uint64_t seed = 0;
};

[[nodiscard]] json cmd_validate(const PointSet& points, const ValidateOptions& options);

struct BenchOptions {
  std::optional<double> delta;
  std::size_t ops = 1000;
  /// Comma-separated weights, e.g. "insert:1,remove:1,query:2". Empty
  /// means build only.
  std::string mix = "insert:1,remove:1,query:2";
  /// Largest log2 n of the query-scaling sweep (from 10); 0 disables it.
  int scaling_max = 17;
  std::uint64_t seed = 0;
};

[[nodiscard]] json cmd_bench(const PointSet& points, const BenchOptions& options);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

/// Least-squares line through (xs[i], ys[i]). Needs two distinct xs.
[[nodiscard]] LinearFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys);

/// True iff every entry of report["pass"] is true.
[[nodiscard]] bool all_pass(const json& report);

/// Full command line entry point; returns the process exit code.
int run(int argc, char** argv);

}  // namespace hyperquad::cli
