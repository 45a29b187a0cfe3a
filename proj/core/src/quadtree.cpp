#include "hyperquad/quadtree.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>

namespace hyperquad {

namespace {

constexpr int kMaxRootLevel = 7;
constexpr std::uint64_t kMaxEnumeratedChildren = std::uint64_t{1} << 24;

void require_dim(std::size_t d) {
  if (d < 2 || d > kMaxDimension) {
    throw std::invalid_argument("dimension must be in [2, " + std::to_string(kMaxDimension) + "]");
  }
}

double sqrt_dm1(std::size_t d) { return std::sqrt(static_cast<double>(d - 1)); }

/// Morton (bit-interleaved) order on unsigned words; at equal bit
/// positions the higher axis is more significant.
bool morton_less(std::span<const uint128> u, std::span<const uint128> v) {
  for (int bit = 127; bit >= 0; --bit) {
    for (std::size_t axis = u.size(); axis-- > 0;) {
      const bool bu = ((u[axis] >> bit) & 1) != 0;
      const bool bv = ((v[axis] >> bit) & 1) != 0;
      if (bu != bv) return bv;
    }
  }
  return false;
}

/// Morton order on signed words (offset binary keeps the numeric order).
bool signed_morton_less(std::span<const int128> u, std::span<const int128> v) {
  const uint128 flip = uint128{1} << 127;
  std::vector<uint128> a(u.size()), b(v.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    a[i] = static_cast<uint128>(u[i]) ^ flip;
    b[i] = static_cast<uint128>(v[i]) ^ flip;
  }
  return morton_less(a, b);
}

std::int64_t checked_int64(int128 v) {
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min()) {
    throw std::overflow_error("cell index does not fit 64 bits");
  }
  return static_cast<std::int64_t>(v);
}

/// log2 of the x~ side length of level-l cells in z-row b (l >= 0).
std::int64_t side_shift(std::int64_t b, int level) {
  const std::int64_t span = std::int64_t{1} << level;
  return (b + 1) * span - 1;
}

// Child cells of finite-quadtree horoboxes.

Horobox lower_regime_child(const Horobox& cell, std::uint32_t index) {
  const std::size_t d = cell.dim();
  const double half = 0.5 * cell.euclidean_width();
  Horobox child = cell;
  for (std::size_t i = 0; i + 1 < d; ++i) {
    if ((index >> i) & 1U) child.x[i] = cell.x[i] + half;
  }
  if ((index >> (d - 1)) & 1U) child.z = cell.z * std::exp2(cell.h / 2.0);
  child.w = half / child.z;
  child.h = cell.h / 2.0;
  return child;
}

Horobox top_child(const Horobox& cell) {
  const double grow = std::exp2(cell.h / 2.0);
  return Horobox{cell.x, cell.z * grow, cell.w / grow, cell.h / 2.0};
}

Horobox bottom_child(const Horobox& cell, std::span<const std::uint64_t> k, int log2_grid) {
  const double grid = std::exp2(static_cast<double>(log2_grid));
  const double step = cell.euclidean_width() / grid;
  Horobox child{cell.x, cell.z, cell.w / grid, cell.h / 2.0};
  for (std::size_t i = 0; i < k.size(); ++i) child.x[i] = cell.x[i] + static_cast<double>(k[i]) * step;
  return child;
}

std::uint32_t lower_regime_index(const Horobox& cell, const Point& p) {
  const std::size_t d = cell.dim();
  const double half = 0.5 * cell.euclidean_width();
  std::uint32_t index = 0;
  for (std::size_t i = 0; i + 1 < d; ++i) {
    if (p.x(i) >= cell.x[i] + half) index |= 1U << i;
  }
  if (p.z() >= cell.z * std::exp2(cell.h / 2.0)) index |= 1U << (d - 1);
  return index;
}

std::vector<std::uint64_t> grid_index(const Horobox& cell, const Point& p, int log2_grid) {
  const double grid = std::exp2(static_cast<double>(log2_grid));
  const double step = cell.euclidean_width() / grid;
  const std::uint64_t last =
      log2_grid >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << log2_grid) - 1;
  std::vector<std::uint64_t> k(cell.dim() - 1);
  for (std::size_t i = 0; i < k.size(); ++i) {
    const double t = std::floor((p.x(i) - cell.x[i]) / step);
    if (t <= 0.0) {
      k[i] = 0;
    } else if (t >= static_cast<double>(last)) {
      k[i] = last;
    } else {
      k[i] = static_cast<std::uint64_t>(t);
    }
  }
  return k;
}

struct GridLess {
  bool operator()(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) const {
    std::vector<uint128> ua(a.begin(), a.end()), ub(b.begin(), b.end());
    return morton_less(ua, ub);
  }
};

std::vector<std::uint64_t> deinterleave(std::uint64_t code, std::size_t axes, int bits) {
  std::vector<std::uint64_t> k(axes, 0);
  for (int bit = 0; bit < bits; ++bit) {
    for (std::size_t axis = 0; axis < axes; ++axis) {
      const std::uint64_t src = static_cast<std::uint64_t>(bit) * axes + axis;
      if ((code >> src) & 1U) k[axis] |= std::uint64_t{1} << bit;
    }
  }
  return k;
}

Quadtree::Node build_node(std::span<const Point> points, const Horobox& cell, int level,
                          std::vector<std::size_t> members) {
  Quadtree::Node node;
  node.cell = cell;
  node.level = level;
  node.subtree_size = members.size();
  if (members.size() <= 1) {
    node.points = std::move(members);
    return node;
  }
  if (level <= kMinBuildLevel) {
    throw std::runtime_error("points not separated at level " + std::to_string(kMinBuildLevel));
  }

  if (level <= 0) {
    std::map<std::uint32_t, std::vector<std::size_t>> groups;
    for (std::size_t i : members) groups[lower_regime_index(cell, points[i])].push_back(i);
    for (auto& [index, group] : groups) {
      node.children.push_back(
          build_node(points, lower_regime_child(cell, index), level - 1, std::move(group)));
    }
    return node;
  }

  const int log2_grid = 1 << (level - 1);
  const double top_z = cell.z * std::exp2(cell.h / 2.0);
  std::vector<std::size_t> top;
  std::map<std::vector<std::uint64_t>, std::vector<std::size_t>, GridLess> bottom;
  for (std::size_t i : members) {
    if (points[i].z() >= top_z) {
      top.push_back(i);
    } else {
      bottom[grid_index(cell, points[i], log2_grid)].push_back(i);
    }
  }
  if (!top.empty()) node.children.push_back(build_node(points, top_child(cell), level - 1, std::move(top)));
  for (auto& [k, group] : bottom) {
    node.children.push_back(
        build_node(points, bottom_child(cell, k, log2_grid), level - 1, std::move(group)));
  }
  return node;
}

void collect_dfs(const Quadtree::Node& node, std::vector<std::size_t>& out) {
  out.insert(out.end(), node.points.begin(), node.points.end());
  for (const auto& child : node.children) collect_dfs(child, out);
}

}  // namespace

CellAddress cell_address(const FixedVector& key, int level) {
  const std::size_t d = key.size();
  require_dim(d);
  if (level < kMinAddressLevel || level > kMaxAddressLevel) {
    throw std::out_of_range("level " + std::to_string(level) + " outside the addressable range");
  }
  const Fixed& z = key.back();
  CellAddress out;
  out.level = level;
  out.a.resize(d - 1);
  if (level >= 0) {
    out.b = checked_int64(z.floor_div_pow2(level));
    const std::int64_t shift = side_shift(out.b, level);
    for (std::size_t i = 0; i + 1 < d; ++i) out.a[i] = key[i].floor_div_pow2(shift);
    return out;
  }
  out.b = checked_int64(z.floor_div_pow2(0));
  for (std::size_t i = 0; i + 1 < d; ++i) out.a[i] = key[i].floor_div_pow2(out.b);
  out.sub.reserve(static_cast<std::size_t>(-level));
  for (int k = 1; k <= -level; ++k) {
    std::uint32_t index = 0;
    for (std::size_t i = 0; i + 1 < d; ++i) {
      if (key[i].bit(out.b - k)) index |= 1U << i;
    }
    if (z.bit(-k)) index |= 1U << (d - 1);
    out.sub.push_back(index);
  }
  return out;
}

Horobox cell_horobox(const CellAddress& address, std::size_t d) {
  require_dim(d);
  if (address.a.size() + 1 != d) throw std::invalid_argument("address/dimension mismatch");
  const long double root = std::sqrt(static_cast<long double>(d - 1));
  Horobox box;
  box.x.resize(d - 1);
  if (address.level >= 0) {
    const std::int64_t span = std::int64_t{1} << address.level;
    const long double z = std::exp2(static_cast<long double>(address.b * span));
    const long double side = std::exp2(static_cast<long double>(side_shift(address.b, address.level)));
    for (std::size_t i = 0; i + 1 < d; ++i) {
      box.x[i] = static_cast<double>(static_cast<long double>(address.a[i]) * side / root);
    }
    box.z = static_cast<double>(z);
    box.w = static_cast<double>(side / root / z);
    box.h = std::exp2(static_cast<double>(address.level));
    return box;
  }
  long double zlog = static_cast<long double>(address.b);
  std::vector<long double> x(d - 1);
  for (std::size_t i = 0; i + 1 < d; ++i) {
    x[i] = std::ldexp(static_cast<long double>(address.a[i]), static_cast<int>(address.b));
  }
  for (std::size_t k = 1; k <= address.sub.size(); ++k) {
    const std::uint32_t index = address.sub[k - 1];
    const int kk = static_cast<int>(k);
    for (std::size_t i = 0; i + 1 < d; ++i) {
      if ((index >> i) & 1U) x[i] += std::ldexp(1.0L, static_cast<int>(address.b) - kk);
    }
    if ((index >> (d - 1)) & 1U) zlog += std::ldexp(1.0L, -kk);
  }
  const long double z = std::exp2(zlog);
  const long double side = std::ldexp(1.0L, static_cast<int>(address.b) + address.level);
  for (std::size_t i = 0; i + 1 < d; ++i) box.x[i] = static_cast<double>(x[i] / root);
  box.z = static_cast<double>(z);
  box.w = static_cast<double>(side / root / z);
  box.h = std::exp2(static_cast<double>(address.level));
  return box;
}

InfiniteCell infinite_cell(const Point& p, int level) {
  CellAddress address = cell_address(transform(p), level);
  Horobox box = cell_horobox(address, p.dim());
  return {std::move(address), std::move(box)};
}

CellAddress parent_address(const CellAddress& address, std::size_t d) {
  require_dim(d);
  if (address.level >= kMaxAddressLevel) throw std::out_of_range("no parent above the top level");
  CellAddress parent = address;
  parent.level = address.level + 1;
  if (address.level < 0) {
    parent.sub.pop_back();
    return parent;
  }
  parent.b = address.b >= 0 ? address.b / 2 : -((-address.b + 1) / 2);
  const std::int64_t grow = side_shift(parent.b, parent.level) - side_shift(address.b, address.level);
  for (auto& a : parent.a) {
    a = grow >= 127 ? (a < 0 ? -1 : 0) : (a >> grow);
  }
  return parent;
}

std::vector<CellAddress> child_addresses(const CellAddress& address, std::size_t d) {
  require_dim(d);
  std::vector<CellAddress> out;
  if (address.level <= 0) {
    if (address.level <= kMinAddressLevel) throw std::out_of_range("no children below the bottom level");
    const std::uint64_t count = std::uint64_t{1} << d;
    if (count > kMaxEnumeratedChildren) throw std::length_error("too many children to enumerate");
    for (std::uint64_t c = 0; c < count; ++c) {
      CellAddress child = address;
      child.level = address.level - 1;
      child.sub.push_back(static_cast<std::uint32_t>(c));
      out.push_back(std::move(child));
    }
    return out;
  }
  const int log2_grid = 1 << (address.level - 1);
  const std::uint64_t bits = static_cast<std::uint64_t>(log2_grid) * (d - 1);
  if (bits > 24) throw std::length_error("too many children to enumerate");

  CellAddress top = address;
  top.level = address.level - 1;
  top.b = 2 * address.b + 1;
  out.push_back(top);
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << bits); ++code) {
    const auto k = deinterleave(code, d - 1, log2_grid);
    CellAddress child = address;
    child.level = address.level - 1;
    child.b = 2 * address.b;
    for (std::size_t i = 0; i + 1 < d; ++i) {
      child.a[i] = address.a[i] * (int128{1} << log2_grid) + static_cast<int128>(k[i]);
    }
    out.push_back(std::move(child));
  }
  return out;
}

bool same_level0_tile(const FixedVector& u, const FixedVector& v) {
  const std::int64_t b = vertical_tile(u);
  if (b != vertical_tile(v)) return false;
  for (std::size_t i = 0; i + 1 < u.size(); ++i) {
    const int split = msb_split_index(u[i], v[i]);
    if (split != kNoSplit && split > b) return false;
  }
  return true;
}

double cell_diameter(int level, double alpha) {
  if (level >= 0) return 2.0 * arsinh_exp2(std::exp2(static_cast<double>(level)) - 2.0);
  const double h = std::exp2(static_cast<double>(level));
  const double p = std::exp2(h);
  const double pm1 = std::expm1(h * std::numbers::ln2);
  const double width_term = alpha * alpha * std::exp2(2.0 * level);
  return 2.0 * arsinh(0.5 * std::sqrt((width_term + pm1 * pm1) / p));
}

double address_alpha(const CellAddress& address, std::size_t d) {
  double alpha = 1.0;
  for (std::size_t k = 1; k <= address.sub.size(); ++k) {
    if ((address.sub[k - 1] >> (d - 1)) & 1U) {
      alpha *= std::exp2(-std::exp2(-static_cast<double>(k)));
    }
  }
  return alpha;
}

CellGeometry cell_geometry(int level, double alpha, std::size_t d) {
  require_dim(d);
  CellGeometry g;
  g.level = level;
  g.height = std::exp2(static_cast<double>(level));
  if (level >= 0) {
    g.alpha = 1.0;
    g.width = std::exp2(g.height - 1.0) / sqrt_dm1(d);
  } else {
    if (!(alpha > 0.5 && alpha <= 1.0 + 1e-12)) {
      throw std::invalid_argument("cell width factor must lie in (1/2, 1]");
    }
    g.alpha = alpha;
    g.width = alpha * g.height / sqrt_dm1(d);
  }
  g.diameter = cell_diameter(level, g.alpha);
  return g;
}

CellGeometry cell_geometry(const CellAddress& address, std::size_t d) {
  return cell_geometry(address.level, address_alpha(address, d), d);
}

double child_diameter_ratio(int level, double alpha, double alpha_child) {
  constexpr double tol = 1e-12;
  if (level >= 1) {
    if (std::fabs(alpha - 1.0) > tol || std::fabs(alpha_child - 1.0) > tol) {
      throw std::invalid_argument("cells at level >= 0 have width factor 1");
    }
    return cell_diameter(level - 1) / cell_diameter(level);
  }
  if (!(alpha > 0.5 && alpha <= 1.0 + tol)) throw std::invalid_argument("alpha outside (1/2, 1]");
  if (level == 0 && std::fabs(alpha - 1.0) > tol) {
    throw std::invalid_argument("level-0 cells have width factor 1");
  }
  const double step = std::exp2(-std::exp2(static_cast<double>(level - 1)));
  const double q = alpha_child / alpha;
  if (std::fabs(q - 1.0) > tol && std::fabs(q - step) > tol) {
    throw std::invalid_argument("child width factor is not alpha or alpha 2^(-2^(l-1))");
  }
  return cell_diameter(level - 1, alpha_child) / cell_diameter(level, alpha);
}

double fatness(const CellGeometry& cell) {
  const double inscribed = std::min(cell.height * std::numbers::ln2, std::log1p(cell.width));
  return inscribed / (2.0 * cell.diameter);
}

std::uint64_t child_count(int level, std::size_t d) {
  require_dim(d);
  if (level <= 0) return std::uint64_t{1} << d;
  if (level > 7) throw std::overflow_error("child count does not fit 64 bits");
  const std::uint64_t exponent = (std::uint64_t{1} << (level - 1)) * (d - 1);
  if (exponent >= 64) throw std::overflow_error("child count does not fit 64 bits");
  return (std::uint64_t{1} << exponent) + 1;
}

RootCell root_cell(std::span<const Point> points) {
  const Horobox mbh = minimum_bounding_horobox(points);
  const std::size_t d = mbh.dim();
  require_dim(d);
  const double root = sqrt_dm1(d);
  const auto width_at = [root](double log2_width) { return std::exp2(log2_width) / root; };

  RootCell out;
  if (mbh.w <= width_at(0.0) && mbh.h <= 1.0) {
    int level = 0;
    while (mbh.w <= width_at(level - 1) && mbh.h <= std::exp2(level - 1)) --level;
    out.level = level;
    out.box = Horobox{mbh.x, mbh.z, width_at(level), std::exp2(static_cast<double>(level))};
    return out;
  }
  int level = 1;
  while (!(mbh.w <= width_at(std::exp2(level) - 1.0) && mbh.h <= std::exp2(level))) {
    if (++level > kMaxRootLevel) throw std::out_of_range("point set too spread for a finite quadtree");
  }
  out.level = level;
  out.box = Horobox{mbh.x, mbh.z, width_at(std::exp2(level) - 1.0), std::exp2(static_cast<double>(level))};
  return out;
}

std::vector<Horobox> subdivide(const Horobox& cell, int level) {
  cell.validate();
  const std::size_t d = cell.dim();
  require_dim(d);
  std::vector<Horobox> out;
  if (level <= 0) {
    const std::uint64_t count = std::uint64_t{1} << d;
    if (count > kMaxEnumeratedChildren) throw std::length_error("too many children to enumerate");
    for (std::uint64_t c = 0; c < count; ++c) out.push_back(lower_regime_child(cell, static_cast<std::uint32_t>(c)));
    return out;
  }
  const int log2_grid = 1 << (level - 1);
  const std::uint64_t bits = static_cast<std::uint64_t>(log2_grid) * (d - 1);
  if (bits > 24) throw std::length_error("too many children to enumerate");
  out.push_back(top_child(cell));
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << bits); ++code) {
    out.push_back(bottom_child(cell, deinterleave(code, d - 1, log2_grid), log2_grid));
  }
  return out;
}

Quadtree Quadtree::build(std::vector<Point> points) {
  if (points.empty()) throw std::invalid_argument("quadtree of an empty set");
  const std::size_t d = points.front().dim();
  require_dimension(points, d);
  require_dim(d);

  std::vector<std::size_t> order(points.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return lex_less(points[a], points[b]); });
  for (std::size_t i = 1; i < order.size(); ++i) {
    if (points[order[i - 1]] == points[order[i]]) throw std::invalid_argument("duplicate points");
  }

  Quadtree tree;
  const RootCell root = root_cell(points);
  tree.points_ = std::move(points);
  std::vector<std::size_t> members(tree.points_.size());
  for (std::size_t i = 0; i < members.size(); ++i) members[i] = i;
  tree.root_ = build_node(tree.points_, root.box, root.level, std::move(members));
  return tree;
}

std::vector<std::size_t> Quadtree::dfs_order() const {
  std::vector<std::size_t> out;
  out.reserve(points_.size());
  collect_dfs(root_, out);
  return out;
}

namespace {

struct Member {
  std::size_t index;
  CellAddress address;
};

void visit_aligned(std::span<const FixedVector> keys, int level, std::vector<std::size_t> group,
                   std::vector<std::size_t>& out) {
  if (group.size() == 1) {
    out.push_back(group.front());
    return;
  }
  if (level <= kMinAddressLevel) throw std::invalid_argument("identical transformed points");

  std::vector<Member> members;
  members.reserve(group.size());
  for (std::size_t i : group) members.push_back({i, cell_address(keys[i], level - 1)});

  const auto before = [level](const CellAddress& a, const CellAddress& b) {
    if (level > 0) {
      if (a.b != b.b) return a.b > b.b;  // top child first
      return signed_morton_less(a.a, b.a);
    }
    return a.sub.back() < b.sub.back();
  };
  std::stable_sort(members.begin(), members.end(),
                   [&](const Member& a, const Member& b) { return before(a.address, b.address); });

  for (std::size_t begin = 0; begin < members.size();) {
    std::size_t end = begin + 1;
    while (end < members.size() && members[end].address == members[begin].address) ++end;
    std::vector<std::size_t> child;
    for (std::size_t j = begin; j < end; ++j) child.push_back(members[j].index);
    visit_aligned(keys, level - 1, std::move(child), out);
    begin = end;
  }
}

}  // namespace

std::vector<std::size_t> aligned_dfs_order(std::span<const FixedVector> keys) {
  std::vector<std::size_t> out;
  if (keys.empty()) return out;
  const std::size_t d = keys.front().size();
  require_dim(d);
  for (const auto& k : keys) {
    if (k.size() != d) throw std::invalid_argument("mixed dimensions");
  }

  // Roots of the forest: cells at kForestLevel, z >= 1 side first, then
  // Z-order of the horizontal index.
  std::vector<Member> roots;
  for (std::size_t i = 0; i < keys.size(); ++i) roots.push_back({i, cell_address(keys[i], kForestLevel)});
  std::stable_sort(roots.begin(), roots.end(), [](const Member& a, const Member& b) {
    if (a.address.b != b.address.b) return a.address.b > b.address.b;
    return signed_morton_less(a.address.a, b.address.a);
  });
  for (std::size_t begin = 0; begin < roots.size();) {
    std::size_t end = begin + 1;
    while (end < roots.size() && roots[end].address == roots[begin].address) ++end;
    std::vector<std::size_t> group;
    for (std::size_t j = begin; j < end; ++j) group.push_back(roots[j].index);
    visit_aligned(keys, kForestLevel, std::move(group), out);
    begin = end;
  }
  return out;
}

std::vector<std::size_t> aligned_dfs_order(std::span<const Point> points) {
  std::vector<FixedVector> keys;
  keys.reserve(points.size());
  for (const Point& p : points) keys.push_back(transform(p));
  return aligned_dfs_order(keys);
}

}  // namespace hyperquad
