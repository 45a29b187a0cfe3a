#pragma once

// Signed fixed-point encoding of the transformed coordinates
// (x sqrt(d-1), log2 z) that drive all bit-level cell arithmetic.
// Each scalar is a two's-complement 128-bit integer with 63 fractional
// bits; bit positions are reported relative to the binary point, so the
// units bit has index 0 and the 1/2 bit has index -1.

#include <compare>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "hyperquad/geometry.hpp"

namespace hyperquad {

using int128 = __int128;
using uint128 = unsigned __int128;

inline constexpr int kFractionBits = 63;
/// Representable magnitude bound (exclusive) for encoded reals.
inline constexpr double kFixedLimit = 0x1p63;

/// A fixed-point scalar.
struct Fixed {
  int128 raw = 0;

  [[nodiscard]] static Fixed encode(long double value);
  [[nodiscard]] long double decode() const noexcept;

  /// floor(value / 2^k) for any k; shifts past the stored bits saturate to
  /// the sign (right) and are rejected with std::overflow_error (left).
  [[nodiscard]] int128 floor_div_pow2(std::int64_t k) const;

  /// Bit of the binary expansion at `position` (relative to the binary
  /// point). Positions below the stored resolution read as 0.
  [[nodiscard]] bool bit(std::int64_t position) const noexcept;

  friend auto operator<=>(const Fixed&, const Fixed&) = default;
};

/// Sentinel returned by msb_split_index for equal arguments.
inline constexpr int kNoSplit = std::numeric_limits<int>::min();

/// Smallest k such that floor(a / 2^k) == floor(b / 2^k), i.e.
/// 1 + floor(log2(a xor b)) relative to the binary point; kNoSplit if a == b.
/// Arguments of opposite sign differ in the sign bit and split at
/// kSignSplit; no dyadic interval contains both.
[[nodiscard]] int msb_split_index(Fixed a, Fixed b) noexcept;

inline constexpr int kSignSplit = 128 - kFractionBits;

/// Encoded (x_1 sqrt(d-1), ..., x_{d-1} sqrt(d-1), log2 z).
using FixedVector = std::vector<Fixed>;

/// Transform of a point. Throws std::out_of_range when a transformed
/// coordinate falls outside (-2^63, 2^63).
[[nodiscard]] FixedVector transform(const Point& p);
/// Transform of shift.apply(p), evaluated in extended precision.
[[nodiscard]] FixedVector transform(const Isometry& shift, const Point& p);

/// Integer part of the last (log2 z) coordinate: the vertical tile index.
[[nodiscard]] inline std::int64_t vertical_tile(const FixedVector& v) {
  return static_cast<std::int64_t>(v.back().floor_div_pow2(0));
}

/// Index of the highest set bit of a nonzero 128-bit word (0..127).
[[nodiscard]] int highest_bit(uint128 word) noexcept;

}  // namespace hyperquad
