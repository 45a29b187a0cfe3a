#pragma once

// Dynamic approximate nearest neighbours and closest pair in H^d.
//
// The index keeps one balanced ordered set per shift of a ShiftFamily,
// each sorted by that shift's L-order (ties broken by raw coordinates).
// A query is located in every set without inserting it; its predecessor
// and successor there are the only candidates. Closest pair scans
// neighbouring entries of every set.
//
// Single writer, multiple readers: insert/remove need exclusive access,
// nearest/closest_pair may run concurrently with each other.

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "hyperquad/cover.hpp"
#include "hyperquad/fixed_point.hpp"
#include "hyperquad/geometry.hpp"

namespace hyperquad {

struct Neighbor {
  Point point;
  double distance = 0.0;
  /// Candidate distances evaluated (at most 2 per shift).
  std::size_t candidates = 0;
};

struct PointPair {
  Point first;   ///< lexicographically smaller of the two
  Point second;
  double distance = 0.0;
};

class NeighborIndex {
 public:
  /// Empty index over H^d for query scale delta.
  NeighborIndex(std::size_t d, double delta);

  /// Batch build. Throws std::invalid_argument for duplicates or mixed
  /// dimensions; an empty set is allowed only through the constructor
  /// above since it carries no dimension.
  [[nodiscard]] static NeighborIndex build(std::vector<Point> points, double delta);
  /// Batch build with delta = estimate_delta(points).
  [[nodiscard]] static NeighborIndex build(std::vector<Point> points);

  NeighborIndex(NeighborIndex&&) noexcept = default;
  NeighborIndex& operator=(NeighborIndex&&) noexcept = default;
  NeighborIndex(const NeighborIndex&) = delete;
  NeighborIndex& operator=(const NeighborIndex&) = delete;

  /// Throws std::invalid_argument if p is already present.
  void insert(const Point& p);
  /// Throws std::invalid_argument if p is absent.
  void remove(const Point& p);
  [[nodiscard]] bool contains(const Point& p) const;

  /// Approximate nearest neighbour; nullopt for an empty index.
  [[nodiscard]] std::optional<Neighbor> nearest(const Point& q) const;
  /// Approximate closest pair. Throws std::invalid_argument if size() < 2.
  [[nodiscard]] PointPair closest_pair() const;

  [[nodiscard]] std::size_t size() const noexcept { return orders_.empty() ? 0 : orders_.front().size(); }
  [[nodiscard]] std::size_t dim() const noexcept { return family_.dim; }
  [[nodiscard]] double delta() const noexcept { return family_.delta; }
  [[nodiscard]] const ShiftFamily& family() const noexcept { return family_; }

  /// Number of ordered sets (one per shift).
  [[nodiscard]] std::size_t order_count() const noexcept { return orders_.size(); }
  /// In-order contents of one ordered set.
  [[nodiscard]] std::vector<Point> order(std::size_t which) const;

  /// Comparator invocations since construction or the last reset.
  [[nodiscard]] std::uint64_t comparator_calls() const noexcept;
  void reset_comparator_calls() noexcept;

 private:
  struct Entry {
    FixedVector key;
    Point point;
  };
  struct EntryLess {
    std::atomic<std::uint64_t>* counter = nullptr;
    bool operator()(const Entry& a, const Entry& b) const;
  };
  using OrderedSet = std::set<Entry, EntryLess>;

  [[nodiscard]] Entry make_entry(std::size_t which, const Point& p) const;

  ShiftFamily family_;
  std::unique_ptr<std::atomic<std::uint64_t>> calls_;
  std::vector<OrderedSet> orders_;
};

/// 2 x the largest distance over 2n random pairs (1.0 for fewer than two
/// points), clamped to max_shift_delta. Deterministic for a fixed seed.
[[nodiscard]] double estimate_delta(std::span<const Point> points, std::uint64_t seed = 0);

/// Exact nearest neighbour; ties go to the lexicographically smaller point.
/// Throws std::invalid_argument for an empty set.
[[nodiscard]] Neighbor brute_force_nearest(std::span<const Point> points, const Point& q);

/// Exact closest pair. Throws std::invalid_argument for fewer than 2 points.
[[nodiscard]] PointPair brute_force_closest_pair(std::span<const Point> points);

}  // namespace hyperquad
