// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "commands.hpp"
#include "hyperquad/cover.hpp"
#include "hyperquad/frozen_constants.hpp"
#include "hyperquad/lorder.hpp"
#include "hyperquad/nnindex.hpp"
#include "hyperquad/quadtree.hpp"
#include "hyperquad/sampling.hpp"

using namespace hyperquad;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

Point random_point(std::mt19937_64& rng, std::size_t d, double x_range, double log_z_range) {
  std::uniform_real_distribution<double> x(-x_range, x_range);
  std::uniform_real_distribution<double> lz(-log_z_range, log_z_range);
  std::vector<double> xs(d - 1);
  for (double& c : xs) c = x(rng);
  return Point(xs, std::exp2(lz(rng)));
}

/// Geometry of the cells containing a random point at levels top..bottom.
std::vector<CellGeometry> random_descent(std::mt19937_64& rng, std::size_t d, int top, int bottom) {
  const FixedVector key = transform(random_point(rng, d, 1e3, 100.0));
  std::vector<CellGeometry> cells;
  for (int level = top; level >= bottom; --level) cells.push_back(cell_geometry(cell_address(key, level), d));
  return cells;
}

// 1
Outcome table1() {
  const auto start = Clock::now();
  const nlohmann::json report = cli::cmd_table1();
  const double secs = seconds_since(start);
  std::string failed;
  for (const auto& e : cli::table1_entries()) {
    if (!e.pass()) failed += fmt(" l=%d a'=%.4f computed %.5f expected %.4f;", e.level, e.alpha_child, e.computed, e.expected);
  }
  const bool pass = cli::all_pass(report) && secs < 1.0;
  return {pass, fmt("%.3f s;", secs) + (failed.empty() ? std::string(" all nine within tolerance") : failed)};
}

// 2
Outcome ratio_bounds() {
  const auto start = Clock::now();
  std::mt19937_64 rng(2);
  double lo = 1.0;
  double hi = 0.0;
  std::size_t violations = 0;
  for (int k = 0; k < 10000; ++k) {
    const std::size_t d = 2 + static_cast<std::size_t>(k % 3);
    const auto cells = random_descent(rng, d, 6, -21);
    for (std::size_t i = 0; i + 1 < cells.size(); ++i) {
      const double r = cells[i + 1].diameter / cells[i].diameter;
      lo = std::min(lo, r);
      hi = std::max(hi, r);
      if (!(r > 0.42 && r < 0.561)) ++violations;
    }
  }
  const double secs = seconds_since(start);
  return {violations == 0 && secs < 10.0,
          fmt("ratios in [%.6f, %.6f], %zu outside (0.42, 0.561), %.2f s", lo, hi, violations, secs)};
}

// 3
Outcome fatness_bound() {
  std::mt19937_64 rng(3);
  double worst = 1e300;
  for (std::size_t d = 2; d <= 10; ++d) {
    for (int k = 0; k < 1000; ++k) {
      for (const CellGeometry& c : random_descent(rng, d, 6, -10)) {
        worst = std::min(worst, fatness(c) * std::sqrt(static_cast<double>(d)));
      }
    }
  }
  return {worst >= frozen::kFatnessSqrtD && worst > 0.0,
          fmt("min fatness*sqrt(d) = %.6f, frozen bound %.4f", worst, frozen::kFatnessSqrtD)};
}

// 4
Outcome lorder_equals_dfs() {
  const auto start = Clock::now();
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<std::size_t> size(2, 64);
  std::uniform_real_distribution<double> spread(0.5, 8.0);
  int mismatches = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t d = 2 + static_cast<std::size_t>(trial % 3);
    const double s = spread(rng);
    std::vector<Point> pts;
    const std::size_t n = size(rng);
    while (pts.size() < n) pts.push_back(random_point(rng, d, s, s));
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return lorder_compare(pts[a], pts[b]) == Ordering::Before; });
    if (order != aligned_dfs_order(pts)) ++mismatches;
  }
  const double secs = seconds_since(start);
  return {mismatches == 0 && secs < 30.0, fmt("%d of 200 trials differ, %.2f s", mismatches, secs)};
}

// 5
Outcome comparator_laws() {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> spread(-3.0, 3.0);
  std::size_t antisymmetry = 0;
  std::size_t transitivity = 0;
  for (int k = 0; k < 100000; ++k) {
    const std::size_t d = 2 + static_cast<std::size_t>(k % 3);
    // Mix of far-apart and clustered samples.
    const double s = std::exp2(spread(rng));
    const Point a = random_point(rng, d, s, s);
    const Point b = k % 2 ? random_point(rng, d, s, s) : point_at_distance(a, random_direction(d, rng), 1e-3 * s);
    if (lorder_compare(a, b) != reverse(lorder_compare(b, a))) ++antisymmetry;
  }
  for (int k = 0; k < 100000; ++k) {
    const std::size_t d = 2 + static_cast<std::size_t>(k % 3);
    const double s = std::exp2(spread(rng));
    const Point a = random_point(rng, d, s, s);
    const Point b = point_at_distance(a, random_direction(d, rng), s);
    const Point c = point_at_distance(b, random_direction(d, rng), s);
    const std::vector<const Point*> t = {&a, &b, &c};
    std::vector<int> perm = {0, 1, 2};
    do {
      const Point& x = *t[perm[0]];
      const Point& y = *t[perm[1]];
      const Point& z = *t[perm[2]];
      if (lorder_compare(x, y) == Ordering::Before && lorder_compare(y, z) == Ordering::Before &&
          lorder_compare(x, z) != Ordering::Before) {
        ++transitivity;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return {antisymmetry == 0 && transitivity == 0,
          fmt("%zu antisymmetry and %zu transitivity violations", antisymmetry, transitivity)};
}

// 6
Outcome covering_bounded() {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> log_scale(-12.0, -0.01);
  double worst = 0.0;
  std::size_t infinite = 0;
  std::string first_uncovered;
  for (std::size_t d = 2; d <= 5; ++d) {
    for (double delta : {0.5, 3.0, 10.0}) {
      const ShiftFamily family = shift_family(delta, d);
      const double norm = static_cast<double>(d) * std::sqrt(static_cast<double>(d));
      // Anchors follow the generator's default ball of radius 5.
      const std::vector<Point> anchors = sample_ball(d, 10000, 5.0, 60 + d);
      for (const Point& p : anchors) {
        const Point q = point_at_distance(p, random_direction(d, rng), delta * std::exp2(log_scale(rng)));
        if (p == q) continue;
        const double r = covering_ratio(family, p, q);
        if (!std::isfinite(r)) {
          if (infinite++ == 0) {
            first_uncovered = fmt("; first uncovered pair d=%zu delta=%g x0 %.6g / %.6g, z %.6g / %.6g", d, delta,
                                  p.x()[0], q.x()[0], p.z(), q.z());
          }
          continue;
        }
        worst = std::max(worst, r / norm);
      }
    }
  }
  return {infinite == 0 && worst <= frozen::kCoveringPerDSqrtD,
          fmt("%zu infinite, max finite ratio/(d sqrt d) = %.4f, frozen bound %.4f", infinite, worst,
              frozen::kCoveringPerDSqrtD) +
              first_uncovered};
}

// 7
Outcome shift_property() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::size_t violations = 0;
  for (int k = 0; k < 10000; ++k) {
    const double p = unit(rng);
    // Half the pairs are close together.
    const double q = k % 2 ? unit(rng) : std::clamp(p + (unit(rng) - 0.5) * std::exp2(-20.0 * unit(rng)), 0.0, 0.999999);
    if (p == q) continue;
    bool ok = false;
    for (double shift : {0.0, 1.0 / 3.0, 2.0 / 3.0}) {
      const DyadicCell c = smallest_dyadic_cell(p + shift, q + shift);
      const bool lower_third = std::min(p, q) + shift < c.start + c.length / 3.0 ||
                               std::max(p, q) + shift < c.start + c.length / 3.0;
      ok = ok || (c.length < 3.0 * std::fabs(p - q) && lower_third);
    }
    if (!ok) ++violations;
  }
  return {violations == 0, fmt("%zu violations in 10^4 pairs", violations)};
}

// 8
Outcome centrality_property() {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> level(0, 12);
  std::size_t violations = 0;
  for (std::size_t d : {2U, 4U, 6U}) {
    const double threshold = 1.0 / static_cast<double>(2 * d + 2);
    for (int k = 0; k < 10000; ++k) {
      std::vector<double> point(d);
      for (double& c : point) c = unit(rng);
      const double side = std::exp2(-level(rng));
      bool ok = false;
      for (std::size_t j = 0; j <= d && !ok; ++j) {
        const double offset = side * static_cast<double>(j) / static_cast<double>(d + 1);
        ok = centrality(point, offset, side) >= threshold;
      }
      if (!ok) ++violations;
    }
  }
  return {violations == 0, fmt("%zu violations in 3 x 10^4 cases", violations)};
}

struct NearestAudit {
  std::size_t unsound = 0;
  double max_ratio = 1.0;
};

NearestAudit audit_nearest(std::size_t d, std::uint64_t seed) {
  const std::vector<Point> pts = sample_ball(d, 2000, 5.0, seed);
  const NeighborIndex index = NeighborIndex::build(pts, estimate_delta(pts, seed));
  std::mt19937_64 rng(seed + 1);
  std::uniform_int_distribution<std::size_t> pick(0, pts.size() - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  NearestAudit audit;
  for (int k = 0; k < 500; ++k) {
    const Point q = point_at_distance(pts[pick(rng)], random_direction(d, rng), unit(rng));
    const Neighbor got = *index.nearest(q);
    const Neighbor exact = brute_force_nearest(pts, q);
    if (got.distance < exact.distance || got.distance != distance(got.point, q)) ++audit.unsound;
    if (exact.distance > 0.0) audit.max_ratio = std::max(audit.max_ratio, got.distance / exact.distance);
  }
  return audit;
}

// 9
Outcome nearest_quality() {
  const auto start = Clock::now();
  const NearestAudit a2 = audit_nearest(2, 90);
  const NearestAudit a3 = audit_nearest(3, 91);
  const double secs = seconds_since(start);
  const bool pass = a2.unsound == 0 && a3.unsound == 0 && a2.max_ratio <= frozen::kNearestRatioD2 &&
                    a3.max_ratio <= frozen::kNearestRatioD3 && secs < 60.0;
  return {pass, fmt("unsound %zu/%zu, max ratio d=2 %.4f (bound %.3f), d=3 %.4f (bound %.3f), %.2f s", a2.unsound,
                    a3.unsound, a2.max_ratio, frozen::kNearestRatioD2, a3.max_ratio, frozen::kNearestRatioD3, secs)};
}

// 10
Outcome closest_pair_quality() {
  double worst[2] = {1.0, 1.0};
  std::size_t below_one = 0;
  for (std::size_t d : {2U, 3U}) {
    for (std::uint64_t trial = 0; trial < 50; ++trial) {
      const std::vector<Point> pts = sample_ball(d, 500, 5.0, 1000 * d + trial);
      const NeighborIndex index = NeighborIndex::build(pts, estimate_delta(pts, trial));
      const double ratio = index.closest_pair().distance / brute_force_closest_pair(pts).distance;
      if (ratio < 1.0) ++below_one;
      worst[d - 2] = std::max(worst[d - 2], ratio);
    }
  }
  const std::vector<Point> stack = {Point({0.0}, 1.0), Point({0.0}, 2.0), Point({0.0}, 8.0), Point({0.0}, 64.0)};
  const PointPair pair = NeighborIndex::build(stack, 5.0).closest_pair();
  const bool stack_ok = pair.first == stack[0] && pair.second == stack[1];
  const bool pass = below_one == 0 && stack_ok && worst[0] <= frozen::kClosestPairRatioD2 &&
                    worst[1] <= frozen::kClosestPairRatioD3;
  return {pass, fmt("max ratio d=2 %.4f (bound %.3f), d=3 %.4f (bound %.3f), %zu below 1, vertical stack %s", worst[0],
                    frozen::kClosestPairRatioD2, worst[1], frozen::kClosestPairRatioD3, below_one,
                    stack_ok ? "exact" : "wrong")};
}

// 11
Outcome dynamic_consistency() {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::vector<Point> pool = sample_ball(3, 1500, 4.0, 110);
  std::vector<Point> live(pool.begin(), pool.begin() + 500);
  NeighborIndex index = NeighborIndex::build(live, 4.0);
  std::size_t next = 500;
  for (int op = 0; op < 1000; ++op) {
    if (unit(rng) < 0.5 && next < pool.size()) {
      index.insert(pool[next]);
      live.push_back(pool[next++]);
    } else {
      const std::size_t i = std::uniform_int_distribution<std::size_t>(0, live.size() - 1)(rng);
      index.remove(live[i]);
      live[i] = live.back();
      live.pop_back();
    }
  }
  const NeighborIndex fresh = NeighborIndex::build(live, 4.0);
  std::size_t mismatches = 0;
  for (const Point& q : sample_ball(3, 100, 4.0, 111)) {
    const Neighbor a = *index.nearest(q);
    const Neighbor b = *fresh.nearest(q);
    if (!(a.point == b.point) || a.distance != b.distance) ++mismatches;
  }
  return {mismatches == 0, fmt("%zu of 100 queries differ, %zu live points", mismatches, live.size())};
}

// 12
Outcome complexity_smoke() {
  std::vector<double> log_n;
  std::vector<double> calls;
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::string rows;
  for (int k = 10; k <= 17; ++k) {
    const std::vector<Point> pts = sample_ball(2, std::size_t{1} << k, 5.0, 120 + static_cast<std::uint64_t>(k));
    NeighborIndex index = NeighborIndex::build(pts, 4.0);
    std::uniform_int_distribution<std::size_t> pick(0, pts.size() - 1);
    index.reset_comparator_calls();
    constexpr int kQueries = 1000;
    for (int i = 0; i < kQueries; ++i) {
      (void)index.nearest(point_at_distance(pts[pick(rng)], random_direction(2, rng), unit(rng)));
    }
    log_n.push_back(k);
    calls.push_back(static_cast<double>(index.comparator_calls()) / kQueries);
    rows += fmt(" %.1f", calls.back());
  }
  const cli::LinearFit fit = cli::fit_line(log_n, calls);
  const auto start = Clock::now();
  const NeighborIndex big = NeighborIndex::build(sample_ball(3, 100000, 6.0, 121), 4.0);
  const double build_secs = seconds_since(start);
  return {fit.r2 > 0.99 && build_secs < 10.0 && big.size() == 100000,
          fmt("calls/query for log2 n = 10..17:%s; slope %.2f, R^2 %.5f; build 1e5 at d=3 %.2f s", rows.c_str(),
              fit.slope, fit.r2, build_secs)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"table1 diameter ratios", table1},
      {"child/parent ratio bounds", ratio_bounds},
      {"fatness", fatness_bound},
      {"L-order equals aligned DFS order", lorder_equals_dfs},
      {"comparator laws", comparator_laws},
      {"covering boundedness", covering_bounded},
      {"1-D shift property", shift_property},
      {"centrality property", centrality_property},
      {"nearest neighbour soundness and ratio", nearest_quality},
      {"closest pair ratio", closest_pair_quality},
      {"dynamic consistency", dynamic_consistency},
      {"complexity smoke test", complexity_smoke},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome outcome;
    try {
      outcome = criteria[i].second();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    if (!outcome.pass) ++failures;
    std::printf("%s %2zu %s: %s\n", outcome.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                outcome.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
