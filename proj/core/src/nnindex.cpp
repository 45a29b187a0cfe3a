#include "hyperquad/nnindex.hpp"

#include <algorithm>
#include <iterator>
#include <random>
#include <stdexcept>

#include "hyperquad/lorder.hpp"

namespace hyperquad {

namespace {

/// Strictly better candidate: closer, or equally close and lex-smaller.
bool better(double da, const Point& a, double db, const Point& b) {
  if (da != db) return da < db;
  return lex_less(a, b);
}

PointPair ordered_pair(const Point& a, const Point& b, double dist) {
  if (lex_less(b, a)) return {b, a, dist};
  return {a, b, dist};
}

bool better_pair(const PointPair& a, const PointPair& b) {
  if (a.distance != b.distance) return a.distance < b.distance;
  if (a.first != b.first) return lex_less(a.first, b.first);
  return lex_less(a.second, b.second);
}

}  // namespace

bool NeighborIndex::EntryLess::operator()(const Entry& a, const Entry& b) const {
  if (counter != nullptr) counter->fetch_add(1, std::memory_order_relaxed);
  switch (compare_transformed(a.key, b.key)) {
    case Ordering::Before:
      return true;
    case Ordering::After:
      return false;
    case Ordering::Equal:
      break;
  }
  return lex_less(a.point, b.point);
}

NeighborIndex::NeighborIndex(std::size_t d, double delta)
    : family_(shift_family(delta, d)), calls_(std::make_unique<std::atomic<std::uint64_t>>(0)) {
  orders_.reserve(family_.shifts.size());
  for (std::size_t i = 0; i < family_.shifts.size(); ++i) orders_.emplace_back(EntryLess{calls_.get()});
}

NeighborIndex::Entry NeighborIndex::make_entry(std::size_t which, const Point& p) const {
  if (p.dim() != family_.dim) throw std::invalid_argument("point dimension does not match the index");
  return Entry{transform(family_.shifts[which], p), p};
}

NeighborIndex NeighborIndex::build(std::vector<Point> points, double delta) {
  if (points.empty()) throw std::invalid_argument("use the constructor for an empty index");
  const std::size_t d = points.front().dim();
  require_dimension(points, d);

  std::sort(points.begin(), points.end(), lex_less);
  if (std::adjacent_find(points.begin(), points.end()) != points.end()) {
    throw std::invalid_argument("duplicate points");
  }

  NeighborIndex index(d, delta);
  const EntryLess less{index.calls_.get()};
  for (std::size_t which = 0; which < index.orders_.size(); ++which) {
    std::vector<Entry> entries;
    entries.reserve(points.size());
    for (const Point& p : points) entries.push_back(index.make_entry(which, p));
    std::sort(entries.begin(), entries.end(), less);
    auto& set = index.orders_[which];
    for (auto& e : entries) set.emplace_hint(set.end(), std::move(e));
  }
  return index;
}

NeighborIndex NeighborIndex::build(std::vector<Point> points) {
  const double delta = estimate_delta(points);
  return build(std::move(points), delta);
}

void NeighborIndex::insert(const Point& p) {
  if (contains(p)) throw std::invalid_argument("point already indexed");
  for (std::size_t which = 0; which < orders_.size(); ++which) orders_[which].insert(make_entry(which, p));
}

void NeighborIndex::remove(const Point& p) {
  if (!contains(p)) throw std::invalid_argument("point not indexed");
  for (std::size_t which = 0; which < orders_.size(); ++which) orders_[which].erase(make_entry(which, p));
}

bool NeighborIndex::contains(const Point& p) const {
  if (orders_.empty()) return false;
  return orders_.front().contains(make_entry(0, p));
}

std::optional<Neighbor> NeighborIndex::nearest(const Point& q) const {
  if (size() == 0) return std::nullopt;
  std::optional<Neighbor> best;
  std::size_t evaluated = 0;
  const auto consider = [&](const Point& candidate) {
    const double dist = distance(q, candidate);
    ++evaluated;
    if (!best || better(dist, candidate, best->distance, best->point)) best = Neighbor{candidate, dist, 0};
  };
  for (std::size_t which = 0; which < orders_.size(); ++which) {
    const auto& set = orders_[which];
    const auto it = set.lower_bound(make_entry(which, q));
    if (it != set.end()) consider(it->point);
    if (it != set.begin()) consider(std::prev(it)->point);
  }
  best->candidates = evaluated;
  return best;
}

PointPair NeighborIndex::closest_pair() const {
  if (size() < 2) throw std::invalid_argument("closest pair needs at least two points");
  std::optional<PointPair> best;
  for (const auto& set : orders_) {
    for (auto it = set.begin(), next = std::next(it); next != set.end(); ++it, ++next) {
      PointPair candidate = ordered_pair(it->point, next->point, distance(it->point, next->point));
      if (!best || better_pair(candidate, *best)) best = std::move(candidate);
    }
  }
  return *best;
}

std::vector<Point> NeighborIndex::order(std::size_t which) const {
  std::vector<Point> out;
  out.reserve(size());
  for (const auto& e : orders_.at(which)) out.push_back(e.point);
  return out;
}

std::uint64_t NeighborIndex::comparator_calls() const noexcept {
  return calls_->load(std::memory_order_relaxed);
}

void NeighborIndex::reset_comparator_calls() noexcept { calls_->store(0, std::memory_order_relaxed); }

double estimate_delta(std::span<const Point> points, std::uint64_t seed) {
  if (points.size() < 2) return 1.0;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, points.size() - 1);
  double far = 0.0;
  for (std::size_t k = 0; k < 2 * points.size(); ++k) {
    far = std::max(far, distance(points[pick(rng)], points[pick(rng)]));
  }
  if (!(far > 0.0)) return 1.0;
  return std::min(2.0 * far, max_shift_delta(points.front().dim()));
}

Neighbor brute_force_nearest(std::span<const Point> points, const Point& q) {
  if (points.empty()) throw std::invalid_argument("nearest neighbour in an empty set");
  Neighbor best{points.front(), distance(q, points.front()), 1};
  for (std::size_t i = 1; i < points.size(); ++i) {
    const double dist = distance(q, points[i]);
    if (better(dist, points[i], best.distance, best.point)) {
      best.point = points[i];
      best.distance = dist;
    }
  }
  best.candidates = points.size();
  return best;
}

PointPair brute_force_closest_pair(std::span<const Point> points) {
  if (points.size() < 2) throw std::invalid_argument("closest pair needs at least two points");
  std::optional<PointPair> best;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      PointPair candidate = ordered_pair(points[i], points[j], distance(points[i], points[j]));
      if (!best || better_pair(candidate, *best)) best = std::move(candidate);
    }
  }
  return *best;
}

}  // namespace hyperquad
