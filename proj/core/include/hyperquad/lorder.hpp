#pragma once

// L-order: the depth-first visiting order of Q_inf (top child first at
// levels above 0, Z-order below), decided pairwise with O(d) bit
// operations on the fixed-point transform instead of building a tree.
//
// Comparator correctness is with respect to the quantized coordinates:
// two points whose transforms are identical compare Equal. Callers that
// need a strict order over raw points break ties with lex_less.

#include <span>

#include "hyperquad/fixed_point.hpp"
#include "hyperquad/geometry.hpp"

namespace hyperquad {

enum class Ordering { Before, Equal, After };

[[nodiscard]] constexpr Ordering reverse(Ordering o) noexcept {
  return o == Ordering::Before ? Ordering::After
                               : (o == Ordering::After ? Ordering::Before : Ordering::Equal);
}

/// Euclidean Z-order of two equal-length fixed-point vectors: the axis
/// whose exclusive-or has the highest set bit decides (the higher axis on
/// ties), by the natural order of that coordinate.
[[nodiscard]] Ordering zorder_compare(std::span<const Fixed> u, std::span<const Fixed> v);

/// L-order of two transformed points.
[[nodiscard]] Ordering compare_transformed(const FixedVector& u, const FixedVector& v);

/// L-order with respect to Q_inf. Throws std::invalid_argument on a
/// dimension mismatch and std::out_of_range for unrepresentable points.
[[nodiscard]] Ordering lorder_compare(const Point& p, const Point& q);

/// L-order with respect to the shifted quadtree: both points are mapped by
/// `shift` before comparison.
[[nodiscard]] Ordering shifted_compare(const Isometry& shift, const Point& p, const Point& q);

}  // namespace hyperquad
