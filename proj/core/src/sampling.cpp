#include "hyperquad/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <span>
#include <stdexcept>

namespace hyperquad {

namespace {

constexpr double kMaxRadius = 300.0;
constexpr std::size_t kTableSize = 1 << 14;

double log_sinh(double r) { return r + std::log1p(-std::exp(-2.0 * r)) - std::numbers::ln2; }

/// Unnormalised density sinh^(d-1)(r) / sinh^(d-1)(R), safe for large R.
double scaled_density(double r, double radius, std::size_t d) {
  if (r <= 0.0) return 0.0;
  return std::exp(static_cast<double>(d - 1) * (log_sinh(r) - log_sinh(radius)));
}

/// Cumulative integral of the scaled density on a uniform grid (Simpson on
/// each cell with its midpoint), normalised to end at 1.
std::vector<double> cumulative_table(double radius, std::size_t d) {
  std::vector<double> cdf(kTableSize + 1, 0.0);
  const double step = radius / kTableSize;
  for (std::size_t k = 0; k < kTableSize; ++k) {
    const double a = step * static_cast<double>(k);
    const double fa = scaled_density(a, radius, d);
    const double fm = scaled_density(a + step / 2.0, radius, d);
    const double fb = scaled_density(a + step, radius, d);
    cdf[k + 1] = cdf[k] + step * (fa + 4.0 * fm + fb) / 6.0;
  }
  const double total = cdf.back();
  for (double& c : cdf) c /= total;
  return cdf;
}

/// Inverse of the tabulated CDF: locate the grid cell, then interpolate.
double invert(const std::vector<double>& cdf, double radius, double u) {
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  const std::size_t k = std::clamp<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), 1, kTableSize) - 1;
  const double lo = cdf[k];
  const double hi = cdf[k + 1];
  const double t = hi > lo ? std::clamp((u - lo) / (hi - lo), 0.0, 1.0) : 0.0;
  return radius * (static_cast<double>(k) + t) / kTableSize;
}

void check_dim(std::size_t d) {
  if (d < 2) throw std::invalid_argument("dimension must be at least 2");
}

}  // namespace

Point geodesic_point(std::span<const double> v, double w, double r) {
  const double denom = std::cosh(r) - w * std::sinh(r);
  const double z = 1.0 / denom;
  std::vector<double> x(v.begin(), v.end());
  for (double& c : x) c *= std::sinh(r) * z;
  return Point(std::move(x), z);
}

std::vector<double> random_direction(std::size_t d, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  std::vector<double> dir(d);
  double norm = 0.0;
  do {
    for (double& c : dir) c = gauss(rng);
    norm = std::sqrt(std::inner_product(dir.begin(), dir.end(), dir.begin(), 0.0));
  } while (!(norm > 0.0));
  for (double& c : dir) c /= norm;
  return dir;
}

Point point_at_distance(const Point& p, std::span<const double> direction, double r) {
  if (direction.size() != p.dim()) throw std::invalid_argument("direction has the wrong dimension");
  const Point local = geodesic_point(direction.first(p.dim() - 1), direction.back(), r);
  return Isometry(p.z(), std::vector<double>(p.x().begin(), p.x().end())).apply(local);
}

double ball_radius_cdf(double r, double radius, std::size_t d) {
  check_dim(d);
  if (!(radius > 0.0)) throw std::invalid_argument("radius must be positive");
  if (r <= 0.0) return 0.0;
  if (r >= radius) return 1.0;
  const std::vector<double> cdf = cumulative_table(radius, d);
  const double pos = r / radius * kTableSize;
  const auto k = std::min(static_cast<std::size_t>(pos), kTableSize - 1);
  const double t = pos - static_cast<double>(k);
  return cdf[k] + t * (cdf[k + 1] - cdf[k]);
}

std::vector<Point> sample_ball(std::size_t d, std::size_t n, double radius, std::uint64_t seed) {
  check_dim(d);
  if (!(radius >= 0.0) || radius > kMaxRadius) throw std::invalid_argument("radius must lie in [0, 300]");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::vector<double> cdf = radius > 0.0 ? cumulative_table(radius, d) : std::vector<double>{};

  std::vector<Point> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::vector<double> dir = random_direction(d, rng);
    const double r = radius > 0.0 ? invert(cdf, radius, unit(rng)) : 0.0;
    out.push_back(geodesic_point(std::span<const double>(dir.data(), d - 1), dir.back(), r));
  }
  return out;
}

std::vector<Point> sample_box(std::size_t d, std::size_t n, double width, double height, std::uint64_t seed) {
  check_dim(d);
  if (!(width > 0.0) || !std::isfinite(width)) throw std::invalid_argument("width must be positive");
  if (!(height > 0.0) || height > 1000.0) throw std::invalid_argument("height must lie in (0, 1000]");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> horizontal(0.0, width);
  std::uniform_real_distribution<double> vertical(1.0, std::exp2(height));
  std::vector<Point> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<double> x(d - 1);
    for (double& c : x) c = horizontal(rng);
    const double z = vertical(rng);
    out.emplace_back(std::move(x), z);
  }
  return out;
}

}  // namespace hyperquad
