#pragma once

// Primitives of the half-space model of d-dimensional hyperbolic space:
// points (x, z) with x in R^{d-1} and z > 0, the distance function, the
// isometries T(sigma, tau)(x, z) = (sigma x + tau, sigma z) and
// cube-based horoboxes R(x, z, w, h), i.e. Euclidean boxes with corners
// (x, z) and (x + z (w, ..., w), z 2^h).

#include <cstddef>
#include <span>
#include <vector>

namespace hyperquad {

/// Smallest width/height given to a bounding horobox of a degenerate set.
inline constexpr double kBoxEpsilon = 0x1p-40;

/// A point of H^d in half-space coordinates.
class Point {
 public:
  Point() = default;
  /// Throws std::invalid_argument unless z > 0 and x is non-empty (d >= 2).
  Point(std::vector<double> x, double z);

  [[nodiscard]] std::size_t dim() const noexcept { return x_.size() + 1; }
  [[nodiscard]] std::span<const double> x() const noexcept { return x_; }
  [[nodiscard]] double x(std::size_t i) const { return x_[i]; }
  [[nodiscard]] double z() const noexcept { return z_; }

  friend bool operator==(const Point&, const Point&) = default;

 private:
  std::vector<double> x_;
  double z_ = 1.0;
};

/// Lexicographic order on raw coordinates (x_1, ..., x_{d-1}, z).
/// Used wherever a deterministic tie-break between points is needed.
[[nodiscard]] bool lex_less(const Point& a, const Point& b) noexcept;

/// arsinh(t), accurate for tiny and huge arguments.
[[nodiscard]] double arsinh(double t) noexcept;

/// arsinh(2^e) for any real e, without overflowing 2^e.
[[nodiscard]] double arsinh_exp2(double e) noexcept;

/// Hyperbolic distance. Throws std::invalid_argument on dimension mismatch.
[[nodiscard]] double distance(const Point& p, const Point& q);

/// Distance from p to the hyperplane x_axis = 0; axis is 1-based,
/// 1 <= axis <= d-1, otherwise std::out_of_range.
[[nodiscard]] double distance_to_axis_hyperplane(const Point& p, std::size_t axis);

/// The isometry T(sigma, tau): (x, z) -> (sigma x + tau, sigma z).
class Isometry {
 public:
  Isometry() = default;
  /// Throws std::invalid_argument unless sigma > 0.
  Isometry(double sigma, std::vector<double> tau);

  /// Identity on points of dimension d.
  static Isometry identity(std::size_t d);

  [[nodiscard]] double sigma() const noexcept { return sigma_; }
  [[nodiscard]] std::span<const double> tau() const noexcept { return tau_; }
  [[nodiscard]] std::size_t dim() const noexcept { return tau_.size() + 1; }

  [[nodiscard]] Point apply(const Point& p) const;

  friend bool operator==(const Isometry&, const Isometry&) = default;

 private:
  double sigma_ = 1.0;
  std::vector<double> tau_;
};

[[nodiscard]] inline Point apply_isometry(const Isometry& t, const Point& p) {
  return t.apply(p);
}

/// The inverse transform: sigma^-1, -tau / sigma.
[[nodiscard]] Isometry invert(const Isometry& t);

/// compose(outer, inner) applies inner first, then outer.
[[nodiscard]] Isometry compose(const Isometry& outer, const Isometry& inner);

/// Cube-based horobox R(x, z, w, h).
struct Horobox {
  std::vector<double> x;
  double z = 1.0;
  double w = 1.0;
  double h = 1.0;

  /// Throws std::invalid_argument unless z, w, h > 0 and x is non-empty.
  void validate() const;

  [[nodiscard]] std::size_t dim() const noexcept { return x.size() + 1; }
  /// Euclidean side length of the horizontal faces, z * w.
  [[nodiscard]] double euclidean_width() const noexcept { return z * w; }
  /// Height of the upper face, z * 2^h.
  [[nodiscard]] double top() const;
  /// Lower and upper Euclidean corners.
  [[nodiscard]] Point low_corner() const;
  [[nodiscard]] Point high_corner() const;

  friend bool operator==(const Horobox&, const Horobox&) = default;
};

/// Diameter of any horobox of width w and height h in H^d.
[[nodiscard]] double horobox_diameter(double w, double h, std::size_t d);
[[nodiscard]] double horobox_diameter(const Horobox& box);

/// Half-open containment: [x, x + z w)^{d-1} x [z, z 2^h).
[[nodiscard]] bool horobox_contains(const Horobox& box, const Point& p);
/// Closed containment, for bounding boxes.
[[nodiscard]] bool horobox_contains_closed(const Horobox& box, const Point& p);

/// Minimum bounding cube-based horobox with z = min over P of z.
/// Degenerate extents are clamped to kBoxEpsilon. Throws
/// std::invalid_argument for an empty set or mixed dimensions.
[[nodiscard]] Horobox minimum_bounding_horobox(std::span<const Point> points);

/// Throws std::invalid_argument if the points do not all have dimension d.
void require_dimension(std::span<const Point> points, std::size_t d);

}  // namespace hyperquad
