#pragma once

// Hyperbolic quadtrees.
//
// Two structures live here. The finite quadtree Q(P) hugs a point set: its
// root is the smallest admissible cube-based horobox around P and it is not
// aligned to anything. The infinite quadtree Q_inf is the aligned hierarchy
// whose level-0 cells are the binary tiling; its cells are never stored,
// they are computed on demand from a CellAddress.
//
// Cells at level l >= 0 have height 2^l and width 2^(2^l - 1) / sqrt(d-1).
// Cells at level l < 0 have height 2^l and width alpha 2^l / sqrt(d-1) with
// a per-cell alpha in (1/2, 1]. A cell of height h <= 1 splits into 2^d
// Euclidean halves; a taller cell splits into one top cell and a
// 2^(h/2 (d-1)) grid of bottom cells.
//
// Child order (shared by subdivide, the DFS traversals and the L-order):
// for h > 1 the top child first, then bottom children in Z-order of their
// grid index; for h <= 1 increasing child index, where bit i-1 of the index
// is the upper half along x_i and bit d-1 is the upper half along z (so z
// is the most significant Z-order axis).

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hyperquad/fixed_point.hpp"
#include "hyperquad/geometry.hpp"

namespace hyperquad {

/// Depth floor for Quadtree::build.
inline constexpr int kMinBuildLevel = -60;
/// Addressable level range of Q_inf.
inline constexpr int kMinAddressLevel = -200;
inline constexpr int kMaxAddressLevel = 30;
/// Every representable point of one Q_inf root lies in a single cell at
/// this level (|log2 z| < 2^11 for finite doubles).
inline constexpr int kForestLevel = 12;
/// Largest supported dimension (child indices are 32-bit).
inline constexpr std::size_t kMaxDimension = 31;

/// Address of a cell of Q_inf.
///
/// For level >= 0 the cell is
///   R(a 2^(b 2^l) W, 2^(b 2^l), W, 2^l),  W = 2^(2^l - 1) / sqrt(d-1).
/// For level < 0, (a, b) is the enclosing level-0 tile and `sub` lists the
/// child indices taken on the way down (length -level).
struct CellAddress {
  int level = 0;
  std::vector<int128> a;
  std::int64_t b = 0;
  std::vector<std::uint32_t> sub;

  friend bool operator==(const CellAddress&, const CellAddress&) = default;
};

struct CellGeometry {
  int level = 0;
  double width = 0.0;
  double height = 0.0;
  /// Width factor for level < 0; 1 otherwise.
  double alpha = 1.0;
  double diameter = 0.0;
};

/// Address of the level-`level` cell containing the transformed point.
[[nodiscard]] CellAddress cell_address(const FixedVector& key, int level);

/// Horobox of an address in dimension d (double precision).
[[nodiscard]] Horobox cell_horobox(const CellAddress& address, std::size_t d);

struct InfiniteCell {
  CellAddress address;
  Horobox box;
};

/// Cell of Q_inf at `level` containing p.
[[nodiscard]] InfiniteCell infinite_cell(const Point& p, int level);

/// Address of the parent cell (level + 1).
[[nodiscard]] CellAddress parent_address(const CellAddress& address, std::size_t d);

/// Addresses of all children, in traversal order. Throws std::length_error
/// if there are more than 2^24 of them.
[[nodiscard]] std::vector<CellAddress> child_addresses(const CellAddress& address, std::size_t d);

/// True iff both transformed points lie in the same level-0 tile.
[[nodiscard]] bool same_level0_tile(const FixedVector& u, const FixedVector& v);

/// Diameter of a level-l cell with width factor alpha (alpha ignored for
/// l >= 0). Independent of the dimension.
[[nodiscard]] double cell_diameter(int level, double alpha = 1.0);

/// Width factor of an address: product of 2^(-2^(l-1)) over every step that
/// descended from level l into an upper (z) half.
[[nodiscard]] double address_alpha(const CellAddress& address, std::size_t d);

[[nodiscard]] CellGeometry cell_geometry(int level, double alpha, std::size_t d);
[[nodiscard]] CellGeometry cell_geometry(const CellAddress& address, std::size_t d);

/// diam(child) / diam(parent) for a parent at `level` with width factor
/// alpha and a child with factor alpha_child. Throws std::invalid_argument
/// for combinations the subdivision cannot produce.
[[nodiscard]] double child_diameter_ratio(int level, double alpha, double alpha_child);

/// Inscribed-ball diameter over twice the cell diameter.
[[nodiscard]] double fatness(const CellGeometry& cell);

/// Number of children of a level-l cell. Throws std::overflow_error when
/// the count does not fit 64 bits.
[[nodiscard]] std::uint64_t child_count(int level, std::size_t d);

struct RootCell {
  Horobox box;
  int level = 0;
};

/// Root cell of the finite quadtree of P. Throws std::invalid_argument for
/// an empty set and std::out_of_range for roots above level 7.
[[nodiscard]] RootCell root_cell(std::span<const Point> points);

/// Children of a finite-quadtree cell of height 2^level, in traversal
/// order. Throws std::length_error above 2^24 children.
[[nodiscard]] std::vector<Horobox> subdivide(const Horobox& cell, int level);

/// Finite hyperbolic quadtree Q(P). Immutable once built.
class Quadtree {
 public:
  struct Node {
    Horobox cell;
    int level = 0;
    /// Non-empty children only, in traversal order.
    std::vector<Node> children;
    /// Indices into points() for a leaf (at most one); empty otherwise.
    std::vector<std::size_t> points;
    std::size_t subtree_size = 0;

    [[nodiscard]] bool is_leaf() const noexcept { return children.empty(); }
  };

  /// Throws std::invalid_argument for an empty set, mixed dimensions or
  /// duplicate points, and std::runtime_error if two points are still
  /// together at kMinBuildLevel.
  [[nodiscard]] static Quadtree build(std::vector<Point> points);

  [[nodiscard]] const Node& root() const noexcept { return root_; }
  [[nodiscard]] std::span<const Point> points() const noexcept { return points_; }
  [[nodiscard]] std::size_t dim() const noexcept { return points_.front().dim(); }

  /// Depth-first order of the points (indices into points()).
  [[nodiscard]] std::vector<std::size_t> dfs_order() const;

 private:
  Quadtree() = default;

  std::vector<Point> points_;
  Node root_;
};

/// Depth-first order of transformed points over the cells of Q_inf, using
/// only cell addresses. Ties (identical keys) throw std::invalid_argument.
/// Returns indices into `keys`.
[[nodiscard]] std::vector<std::size_t> aligned_dfs_order(std::span<const FixedVector> keys);
[[nodiscard]] std::vector<std::size_t> aligned_dfs_order(std::span<const Point> points);

}  // namespace hyperquad
