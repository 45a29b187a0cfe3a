#include "hyperquad/lorder.hpp"

#include <cstdint>
#include <limits>
#include <stdexcept>

#include "hyperquad/quadtree.hpp"

namespace hyperquad {

namespace {

Ordering natural(const Fixed& a, const Fixed& b) noexcept {
  if (a < b) return Ordering::Before;
  if (b < a) return Ordering::After;
  return Ordering::Equal;
}

// Z-order inside one level-0 tile of height 1 and x~ side 2^b: x~ bits are
// aligned with z~ bits after shifting them down by b.
Ordering tile_zorder(const FixedVector& u, const FixedVector& v, std::int64_t b) {
  const std::size_t d = u.size();
  std::size_t best = d;
  std::int64_t best_split = std::numeric_limits<std::int64_t>::min();
  for (std::size_t i = 0; i < d; ++i) {
    const int split = msb_split_index(u[i], v[i]);
    if (split == kNoSplit) continue;
    const std::int64_t aligned = i + 1 < d ? split - b : split;
    if (aligned >= best_split) {
      best_split = aligned;
      best = i;
    }
  }
  if (best == d) return Ordering::Equal;
  return natural(u[best], v[best]);
}

}  // namespace

Ordering zorder_compare(std::span<const Fixed> u, std::span<const Fixed> v) {
  if (u.size() != v.size()) throw std::invalid_argument("zorder_compare: length mismatch");
  std::size_t best = u.size();
  int best_split = kNoSplit;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const int split = msb_split_index(u[i], v[i]);
    if (split != kNoSplit && split >= best_split) {
      best_split = split;
      best = i;
    }
  }
  if (best == u.size()) return Ordering::Equal;
  return natural(u[best], v[best]);
}

Ordering compare_transformed(const FixedVector& u, const FixedVector& v) {
  if (u.size() != v.size()) throw std::invalid_argument("L-order: dimension mismatch");
  if (u.size() < 2) throw std::invalid_argument("L-order: dimension must be at least 2");
  const std::size_t d = u.size();
  const Fixed& zu = u.back();
  const Fixed& zv = v.back();

  // Q_inf never merges the z < 1 and z >= 1 halves; the upper one leads.
  if ((zu.raw < 0) != (zv.raw < 0)) return zu.raw >= 0 ? Ordering::Before : Ordering::After;

  if (same_level0_tile(u, v)) return tile_zorder(u, v, vertical_tile(u));

  const std::span<const Fixed> xu(u.data(), d - 1);
  const std::span<const Fixed> xv(v.data(), d - 1);
  const int z_split = msb_split_index(zu, zv);
  if (z_split == kNoSplit || z_split <= 0) return zorder_compare(xu, xv);

  // x~ side of the level-z_split cells sharing this z-range is 2^side_log.
  const std::int64_t span = std::int64_t{1} << z_split;
  const auto row = static_cast<std::int64_t>(zu.floor_div_pow2(z_split));
  const std::int64_t side_log = row * span + span - 1;
  for (std::size_t i = 0; i + 1 < d; ++i) {
    const int split = msb_split_index(u[i], v[i]);
    if (split == kSignSplit || (split != kNoSplit && split > side_log)) return zorder_compare(xu, xv);
  }
  // Same cell at level z_split, separated by a horosphere: top child first.
  return zv < zu ? Ordering::Before : Ordering::After;
}

Ordering lorder_compare(const Point& p, const Point& q) {
  if (p.dim() != q.dim()) throw std::invalid_argument("L-order: dimension mismatch");
  return compare_transformed(transform(p), transform(q));
}

Ordering shifted_compare(const Isometry& shift, const Point& p, const Point& q) {
  if (p.dim() != q.dim()) throw std::invalid_argument("L-order: dimension mismatch");
  return compare_transformed(transform(shift, p), transform(shift, q));
}

}  // namespace hyperquad
