#include "hyperquad/cover.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace hyperquad {

namespace {

// Level 6 would put the x shifts at 2^62 sqrt(d-1) / sqrt(d-1), too close to
// the fixed-point limit once scaled by sigma.
constexpr int kMaxShiftLevel = 5;

/// ln(W(L) + 1) without forming W(L).
double log_width_plus_one(int level, std::size_t d) {
  const double log_w =
      (std::exp2(static_cast<double>(level)) - 1.0) * std::numbers::ln2 - 0.5 * std::log(static_cast<double>(d - 1));
  if (log_w < 30.0) return std::log1p(std::exp(log_w));
  return log_w + std::log1p(std::exp(-log_w));
}

CommonCell make_cell(const FixedVector& u, int level) {
  CommonCell out;
  out.kind = CommonCell::Kind::Cell;
  out.level = level;
  out.geometry = cell_geometry(cell_address(u, level), u.size());
  return out;
}

}  // namespace

int level_for_delta(double delta, std::size_t d) {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw std::invalid_argument("delta must be positive");
  if (d < 2) throw std::invalid_argument("dimension must be at least 2");
  for (int level = 0; level <= kMaxShiftLevel; ++level) {
    const bool tall = std::exp2(static_cast<double>(level)) * std::numbers::ln2 >= 2.0 * delta;
    const bool wide = log_width_plus_one(level, d) >= 2.0 * delta;
    if (tall && wide) return level;
  }
  throw std::out_of_range("delta too large for the shift family");
}

double max_shift_delta(std::size_t d) {
  if (d < 2) throw std::invalid_argument("dimension must be at least 2");
  const double tall = std::exp2(static_cast<double>(kMaxShiftLevel)) * std::numbers::ln2;
  return std::min(tall, log_width_plus_one(kMaxShiftLevel, d)) / 2.0;
}

ShiftFamily shift_family(double delta, std::size_t d) {
  ShiftFamily f;
  f.delta = delta;
  f.dim = d;
  f.level = level_for_delta(delta, d);
  f.height = std::exp2(static_cast<double>(f.level));
  f.width = std::exp2(f.height - 1.0) / std::sqrt(static_cast<double>(d - 1));
  f.even_dim = 2 * static_cast<int>(d / 2);
  const int steps = f.even_dim + 1;
  for (int i = 0; i < 3; ++i) {
    const double sigma = std::exp2(f.height * i / 3.0);
    for (int j = 0; j < steps; ++j) {
      f.shifts.emplace_back(sigma, std::vector<double>(d - 1, f.width * j / steps));
    }
  }
  return f;
}

CommonCell smallest_common_cell(const FixedVector& u, const FixedVector& v) {
  if (u.size() != v.size()) throw std::invalid_argument("dimension mismatch");
  const std::size_t d = u.size();
  CommonCell out;
  if (u == v) {
    out.kind = CommonCell::Kind::Identical;
    return out;
  }
  const Fixed& zu = u.back();
  const Fixed& zv = v.back();
  if ((zu.raw < 0) != (zv.raw < 0)) {
    out.kind = CommonCell::Kind::Disjoint;
    return out;
  }

  if (same_level0_tile(u, v)) {
    const std::int64_t b = vertical_tile(u);
    std::int64_t level = std::numeric_limits<std::int64_t>::min();
    for (std::size_t i = 0; i < d; ++i) {
      const int split = msb_split_index(u[i], v[i]);
      if (split == kNoSplit) continue;
      level = std::max<std::int64_t>(level, i + 1 < d ? split - b : split);
    }
    return make_cell(u, static_cast<int>(level));
  }

  const int z_split = msb_split_index(zu, zv);
  const int start = (z_split == kNoSplit || z_split < 1) ? 1 : z_split;
  for (int level = start; level <= kForestLevel; ++level) {
    const std::int64_t span = std::int64_t{1} << level;
    const auto row = static_cast<std::int64_t>(zu.floor_div_pow2(level));
    const std::int64_t side_log = row * span + span - 1;
    bool shared = true;
    for (std::size_t i = 0; i + 1 < d && shared; ++i) {
      const int split = msb_split_index(u[i], v[i]);
      shared = split == kNoSplit || (split != kSignSplit && split <= side_log);
    }
    if (shared) return make_cell(u, level);
  }
  out.kind = CommonCell::Kind::Disjoint;
  return out;
}

CommonCell smallest_common_cell(const Isometry& shift, const Point& p, const Point& q) {
  return smallest_common_cell(transform(shift, p), transform(shift, q));
}

double shift_ratio(const Isometry& shift, const Point& p, const Point& q) {
  const double dist = distance(p, q);
  if (!(dist > 0.0)) throw std::invalid_argument("coincident points");
  const CommonCell cell = smallest_common_cell(shift, p, q);
  if (cell.kind != CommonCell::Kind::Cell) return std::numeric_limits<double>::infinity();
  return cell.geometry.diameter / dist;
}

double covering_ratio(const ShiftFamily& family, const Point& p, const Point& q) {
  const double dist = distance(p, q);
  if (!(dist > 0.0)) throw std::invalid_argument("coincident points");
  if (dist > family.delta * (1.0 + 1e-12)) {
    throw std::invalid_argument("pair farther apart than the family scale");
  }
  double best = std::numeric_limits<double>::infinity();
  for (const Isometry& shift : family.shifts) {
    const CommonCell cell = smallest_common_cell(shift, p, q);
    if (cell.kind == CommonCell::Kind::Cell) best = std::min(best, cell.geometry.diameter / dist);
  }
  return best;
}

DyadicCell smallest_dyadic_cell(double p, double q, double root_length) {
  if (!(root_length > 0.0)) throw std::invalid_argument("root length must be positive");
  if (p < 0.0 || q < 0.0 || p >= root_length || q >= root_length) {
    throw std::invalid_argument("points outside the root cell");
  }
  DyadicCell cell{0.0, root_length};
  for (;;) {
    const double half = cell.length / 2.0;
    const double mid = cell.start + half;
    if ((p < mid) != (q < mid) || half == 0.0) return cell;
    if (p >= mid) cell.start = mid;
    cell.length = half;
  }
}

double centrality(std::span<const double> point, double offset, double side) {
  if (!(side > 0.0)) throw std::invalid_argument("side must be positive");
  double margin = std::numeric_limits<double>::infinity();
  for (double c : point) {
    const double shifted = c + offset;
    const double within = shifted - side * std::floor(shifted / side);
    margin = std::min({margin, within, side - within});
  }
  return margin / side;
}

}  // namespace hyperquad
