#pragma once

// Reproducible random point sets.

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "hyperquad/geometry.hpp"

namespace hyperquad {

/// n points uniform in the hyperbolic ball of radius R around (0, ..., 0, 1):
/// uniform direction, radius with density proportional to sinh^(d-1)(r) on
/// [0, R]. R = 0 yields copies of the centre. Throws std::invalid_argument
/// for d < 2, R < 0 or R > 300.
[[nodiscard]] std::vector<Point> sample_ball(std::size_t d, std::size_t n, double radius, std::uint64_t seed);

/// n points uniform in the Euclidean box [0, w]^(d-1) x [1, 2^h].
[[nodiscard]] std::vector<Point> sample_box(std::size_t d, std::size_t n, double width, double height,
                                            std::uint64_t seed);

/// Radial CDF of the ball distribution, interpolated from the same 2^14
/// cell table the sampler inverts (absolute error below 1e-8).
[[nodiscard]] double ball_radius_cdf(double r, double radius, std::size_t d);

/// Point at hyperbolic distance r from (0, ..., 0, 1) in the direction of
/// the unit vector (v, w) of the tangent space (v horizontal, w vertical).
[[nodiscard]] Point geodesic_point(std::span<const double> v, double w, double r);

/// Uniform unit vector in R^d.
[[nodiscard]] std::vector<double> random_direction(std::size_t d, std::mt19937_64& rng);

/// Point at hyperbolic distance r from p along `direction` (a unit vector
/// of length p.dim(), last component vertical).
[[nodiscard]] Point point_at_distance(const Point& p, std::span<const double> direction, double r);

}  // namespace hyperquad
