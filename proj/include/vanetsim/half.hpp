#pragma once

#include <cstdint>
#include <compare>
#include <cstdlib>
#include <string>

namespace vanetsim {

// Exact rational with denominator 2. Averages of two integers and the
// max-of-absolute-difference metric updates stay exact in this type, so
// metric comparisons never need an epsilon.
struct Half {
  std::int64_t halves{0};

  static constexpr Half zero() { return Half{0}; }
  static constexpr Half from_int(std::int64_t v) { return Half{2 * v}; }
  // Exact mean of two integers.
  static constexpr Half mean(std::int64_t a, std::int64_t b) { return Half{a + b}; }

  constexpr bool is_integral() const { return halves % 2 == 0; }
  double value() const { return static_cast<double>(halves) / 2.0; }

  constexpr auto operator<=>(const Half&) const = default;
};

inline Half abs_diff(Half a, Half b) { return Half{std::abs(a.halves - b.halves)}; }
inline Half abs_diff(Half a, std::int64_t b) { return abs_diff(a, Half::from_int(b)); }
inline Half max(Half a, Half b) { return a < b ? b : a; }

inline std::string to_string(Half h) {
  if (h.is_integral()) return std::to_string(h.halves / 2);
  return std::to_string(h.halves) + "/2";
}

}  // namespace vanetsim
