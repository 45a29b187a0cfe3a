#include "hyperquad/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace hyperquad {

namespace {

void require_same_dim(const Point& p, const Point& q) {
  if (p.dim() != q.dim()) {
    throw std::invalid_argument("dimension mismatch: " + std::to_string(p.dim()) + " vs " +
                                std::to_string(q.dim()));
  }
}

}  // namespace

Point::Point(std::vector<double> x, double z) : x_(std::move(x)), z_(z) {
  if (x_.empty()) throw std::invalid_argument("point dimension must be at least 2");
  if (!(z_ > 0.0) || !std::isfinite(z_)) {
    throw std::invalid_argument("point z coordinate must be positive and finite");
  }
  for (double v : x_) {
    if (!std::isfinite(v)) throw std::invalid_argument("point x coordinate must be finite");
  }
}

bool lex_less(const Point& a, const Point& b) noexcept {
  const auto ax = a.x();
  const auto bx = b.x();
  const std::size_t n = std::min(ax.size(), bx.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (ax[i] != bx[i]) return ax[i] < bx[i];
  }
  if (ax.size() != bx.size()) return ax.size() < bx.size();
  return a.z() < b.z();
}

double arsinh(double t) noexcept {
  const double a = std::fabs(t);
  double r;
  if (a < 1e-4) {
    const double a2 = a * a;
    r = a * (1.0 - a2 / 6.0 + 3.0 * a2 * a2 / 40.0);
  } else if (a > 1e150) {
    r = std::log(a) + std::numbers::ln2;
  } else {
    r = std::log1p(a + a * a / (1.0 + std::sqrt(1.0 + a * a)));
  }
  return std::signbit(t) ? -r : r;
}

double arsinh_exp2(double e) noexcept {
  if (e < 500.0) return arsinh(std::exp2(e));
  // arsinh(y) = ln(2y) + O(y^-2)
  return (e + 1.0) * std::numbers::ln2;
}

double distance(const Point& p, const Point& q) {
  require_same_dim(p, q);
  double num = 0.0;
  const auto px = p.x();
  const auto qx = q.x();
  for (std::size_t i = 0; i < px.size(); ++i) {
    const double dx = px[i] - qx[i];
    num += dx * dx;
  }
  const double dz = p.z() - q.z();
  num += dz * dz;
  return 2.0 * arsinh(0.5 * std::sqrt(num / (p.z() * q.z())));
}

double distance_to_axis_hyperplane(const Point& p, std::size_t axis) {
  if (axis < 1 || axis + 1 > p.dim()) {
    throw std::out_of_range("axis " + std::to_string(axis) + " outside [1, " +
                            std::to_string(p.dim() - 1) + "]");
  }
  return arsinh(std::fabs(p.x(axis - 1)) / p.z());
}

Isometry::Isometry(double sigma, std::vector<double> tau) : sigma_(sigma), tau_(std::move(tau)) {
  if (!(sigma_ > 0.0) || !std::isfinite(sigma_)) {
    throw std::invalid_argument("isometry scale must be positive and finite");
  }
  if (tau_.empty()) throw std::invalid_argument("isometry dimension must be at least 2");
}

Isometry Isometry::identity(std::size_t d) {
  if (d < 2) throw std::invalid_argument("dimension must be at least 2");
  return Isometry(1.0, std::vector<double>(d - 1, 0.0));
}

Point Isometry::apply(const Point& p) const {
  if (p.dim() != dim()) throw std::invalid_argument("isometry/point dimension mismatch");
  std::vector<double> x(tau_.size());
  const auto px = p.x();
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = sigma_ * px[i] + tau_[i];
  return Point(std::move(x), sigma_ * p.z());
}

Isometry invert(const Isometry& t) {
  std::vector<double> tau(t.tau().begin(), t.tau().end());
  for (double& v : tau) v = -v / t.sigma();
  return Isometry(1.0 / t.sigma(), std::move(tau));
}

Isometry compose(const Isometry& outer, const Isometry& inner) {
  if (outer.dim() != inner.dim()) throw std::invalid_argument("isometry dimension mismatch");
  // outer(inner(p)) = so (si x + ti) + to
  std::vector<double> tau(inner.tau().size());
  for (std::size_t i = 0; i < tau.size(); ++i) {
    tau[i] = outer.sigma() * inner.tau()[i] + outer.tau()[i];
  }
  return Isometry(outer.sigma() * inner.sigma(), std::move(tau));
}

void Horobox::validate() const {
  if (x.empty()) throw std::invalid_argument("horobox dimension must be at least 2");
  if (!(z > 0.0) || !(w > 0.0) || !(h > 0.0)) {
    throw std::invalid_argument("horobox z, w and h must be positive");
  }
}

double Horobox::top() const { return z * std::exp2(h); }

Point Horobox::low_corner() const { return Point(x, z); }

Point Horobox::high_corner() const {
  std::vector<double> hx = x;
  const double ew = euclidean_width();
  for (double& v : hx) v += ew;
  return Point(std::move(hx), top());
}

double horobox_diameter(double w, double h, std::size_t d) {
  if (d < 2) throw std::invalid_argument("dimension must be at least 2");
  const double dm1 = static_cast<double>(d - 1);
  if (h > 1000.0) {
    // 2^h overflows; only the log-domain form of the second branch is
    // reachable unless w itself is astronomically large.
    const double log2_threshold = 0.5 * (h - std::log2(dm1));
    if (std::log2(w) >= log2_threshold) return 2.0 * arsinh(0.5 * w * std::sqrt(dm1));
    const double ratio = dm1 * std::exp2(2.0 * (std::log2(w) - h));
    return h * std::numbers::ln2 + std::log1p(ratio);
  }
  const double p = std::exp2(h);
  const double pm1 = std::expm1(h * std::numbers::ln2);
  if (w >= std::sqrt(pm1 / dm1)) return 2.0 * arsinh(0.5 * w * std::sqrt(dm1));
  const double a = dm1 * w * w / p + pm1 * (pm1 / p);
  return 2.0 * arsinh(0.5 * std::sqrt(a));
}

double horobox_diameter(const Horobox& box) {
  box.validate();
  return horobox_diameter(box.w, box.h, box.dim());
}

bool horobox_contains(const Horobox& box, const Point& p) {
  if (box.dim() != p.dim()) throw std::invalid_argument("horobox/point dimension mismatch");
  if (p.z() < box.z || p.z() >= box.top()) return false;
  const double ew = box.euclidean_width();
  for (std::size_t i = 0; i < box.x.size(); ++i) {
    const double v = p.x(i);
    if (v < box.x[i] || v >= box.x[i] + ew) return false;
  }
  return true;
}

bool horobox_contains_closed(const Horobox& box, const Point& p) {
  if (box.dim() != p.dim()) throw std::invalid_argument("horobox/point dimension mismatch");
  if (p.z() < box.z || p.z() > box.top()) return false;
  const double ew = box.euclidean_width();
  for (std::size_t i = 0; i < box.x.size(); ++i) {
    const double v = p.x(i);
    if (v < box.x[i] || v > box.x[i] + ew) return false;
  }
  return true;
}

void require_dimension(std::span<const Point> points, std::size_t d) {
  for (const Point& p : points) {
    if (p.dim() != d) throw std::invalid_argument("point set has mixed dimensions");
  }
}

Horobox minimum_bounding_horobox(std::span<const Point> points) {
  if (points.empty()) throw std::invalid_argument("bounding horobox of an empty set");
  const std::size_t d = points.front().dim();
  require_dimension(points, d);

  std::vector<double> lo(points.front().x().begin(), points.front().x().end());
  std::vector<double> hi = lo;
  double zlo = points.front().z();
  double zhi = zlo;
  for (const Point& p : points) {
    for (std::size_t i = 0; i < d - 1; ++i) {
      lo[i] = std::min(lo[i], p.x(i));
      hi[i] = std::max(hi[i], p.x(i));
    }
    zlo = std::min(zlo, p.z());
    zhi = std::max(zhi, p.z());
  }

  double extent = 0.0;
  for (std::size_t i = 0; i < d - 1; ++i) extent = std::max(extent, hi[i] - lo[i]);

  Horobox box{lo, zlo, std::max(extent / zlo, kBoxEpsilon),
              std::max(std::log2(zhi / zlo), kBoxEpsilon)};

  // Rounding in the divisions above may leave the far faces a hair short.
  const double inf = std::numeric_limits<double>::infinity();
  while (box.top() < zhi) box.h = std::nextafter(box.h, inf);
  for (std::size_t i = 0; i < d - 1; ++i) {
    while (box.x[i] + box.euclidean_width() < hi[i]) box.w = std::nextafter(box.w, inf);
  }
  return box;
}

}  // namespace hyperquad
