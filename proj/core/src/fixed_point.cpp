#include "hyperquad/fixed_point.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace hyperquad {

int highest_bit(uint128 word) noexcept {
  const auto hi = static_cast<std::uint64_t>(word >> 64);
  if (hi != 0) return 127 - std::countl_zero(hi);
  return 63 - std::countl_zero(static_cast<std::uint64_t>(word));
}

Fixed Fixed::encode(long double value) {
  if (!std::isfinite(value) || std::fabs(value) >= static_cast<long double>(kFixedLimit)) {
    throw std::out_of_range("value outside the fixed-point range (-2^63, 2^63)");
  }
  const long double scaled = std::nearbyint(std::ldexp(value, kFractionBits));
  return Fixed{static_cast<int128>(scaled)};
}

long double Fixed::decode() const noexcept {
  return std::ldexp(static_cast<long double>(raw), -kFractionBits);
}

int128 Fixed::floor_div_pow2(std::int64_t k) const {
  const std::int64_t shift = k + kFractionBits;
  if (shift >= 127) return raw < 0 ? -1 : 0;
  if (shift >= 0) return raw >> shift;
  const std::int64_t left = -shift;
  const uint128 magnitude = raw < 0 ? -static_cast<uint128>(raw) : static_cast<uint128>(raw);
  if (magnitude != 0 && (left >= 127 || highest_bit(magnitude) + left > 126)) {
    throw std::overflow_error("fixed-point cell index does not fit 128 bits");
  }
  return raw * (static_cast<int128>(1) << left);
}

bool Fixed::bit(std::int64_t position) const noexcept {
  const std::int64_t index = position + kFractionBits;
  if (index < 0) return false;
  if (index >= 127) return raw < 0;
  return ((raw >> index) & 1) != 0;
}

int msb_split_index(Fixed a, Fixed b) noexcept {
  const uint128 x = static_cast<uint128>(a.raw) ^ static_cast<uint128>(b.raw);
  if (x == 0) return kNoSplit;
  return highest_bit(x) + 1 - kFractionBits;
}

FixedVector transform(const Point& p) {
  const std::size_t d = p.dim();
  const long double scale = std::sqrt(static_cast<long double>(d - 1));
  FixedVector out(d);
  for (std::size_t i = 0; i + 1 < d; ++i) {
    out[i] = Fixed::encode(static_cast<long double>(p.x(i)) * scale);
  }
  out[d - 1] = Fixed::encode(std::log2(static_cast<long double>(p.z())));
  return out;
}

FixedVector transform(const Isometry& shift, const Point& p) {
  const std::size_t d = p.dim();
  if (shift.dim() != d) throw std::invalid_argument("isometry/point dimension mismatch");
  const long double scale = std::sqrt(static_cast<long double>(d - 1));
  const long double sigma = shift.sigma();
  FixedVector out(d);
  for (std::size_t i = 0; i + 1 < d; ++i) {
    const long double x = sigma * static_cast<long double>(p.x(i)) + shift.tau()[i];
    out[i] = Fixed::encode(x * scale);
  }
  out[d - 1] = Fixed::encode(std::log2(sigma * static_cast<long double>(p.z())));
  return out;
}

}  // namespace hyperquad
