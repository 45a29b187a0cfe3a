#pragma once

// Shifted copies of Q_inf that together cover every pair of nearby points
// with a small cell. For a scale Delta the family holds 3 (D + 1) <= 3d + 3
// shifts T(sigma_i, tau_j) with
//   sigma_i = 2^(H i / 3),              i in {0, 1, 2}
//   tau_j   = (W j / (D + 1), ...),     j in {0, ..., D}
// where H = 2^L, W = 2^(2^L - 1) / sqrt(d - 1) and D = 2 floor(d / 2).

#include <cstddef>
#include <span>
#include <vector>

#include "hyperquad/fixed_point.hpp"
#include "hyperquad/geometry.hpp"
#include "hyperquad/quadtree.hpp"

namespace hyperquad {

struct ShiftFamily {
  double delta = 0.0;
  std::size_t dim = 0;
  int level = 0;       // L
  double height = 0;   // H = 2^L
  double width = 0;    // W = 2^(2^L - 1) / sqrt(d - 1)
  int even_dim = 0;    // D
  /// shifts[i (D + 1) + j] = T(sigma_i, tau_j).
  std::vector<Isometry> shifts;
};

/// Smallest L >= 0 such that a ball of radius delta fits in a cube-based
/// horobox of width W(L) and height 2^L, using the inscribed-ball test
/// 2^L ln 2 >= 2 delta and ln(W(L) + 1) >= 2 delta. Throws
/// std::out_of_range above max_shift_delta(d).
[[nodiscard]] int level_for_delta(double delta, std::size_t d);

/// Largest delta the fixed-point encoding supports (about 10 for d <= 31).
[[nodiscard]] double max_shift_delta(std::size_t d);

[[nodiscard]] ShiftFamily shift_family(double delta, std::size_t d);

struct CommonCell {
  enum class Kind {
    Cell,       ///< smallest shared cell is `level`
    Identical,  ///< identical transforms: shared at every level
    Disjoint,   ///< different roots of the Q_inf forest
  };
  Kind kind = Kind::Cell;
  int level = 0;
  CellGeometry geometry;
};

/// Smallest Q_inf cell containing both transformed points.
[[nodiscard]] CommonCell smallest_common_cell(const FixedVector& u, const FixedVector& v);
[[nodiscard]] CommonCell smallest_common_cell(const Isometry& shift, const Point& p, const Point& q);

/// diam(smallest common cell under `shift`) / dist(p, q); +inf if the
/// points never share a cell under that shift.
[[nodiscard]] double shift_ratio(const Isometry& shift, const Point& p, const Point& q);

/// Minimum of shift_ratio over the family. Throws std::invalid_argument for
/// coincident points or pairs farther apart than family.delta.
[[nodiscard]] double covering_ratio(const ShiftFamily& family, const Point& p, const Point& q);

// One-dimensional and grid views of the covering argument.

struct DyadicCell {
  double start = 0.0;
  double length = 0.0;
};

/// Smallest cell of the one-dimensional quadtree with root [0, root_length)
/// containing both p and q (both must lie in the root).
[[nodiscard]] DyadicCell smallest_dyadic_cell(double p, double q, double root_length = 2.0);

/// Minimum over axes of the distance from point + offset (added to every
/// coordinate) to the boundary of its grid cell of side `side`, divided by
/// `side`. A point is delta-central iff this is >= delta.
[[nodiscard]] double centrality(std::span<const double> point, double offset, double side);

}  // namespace hyperquad
