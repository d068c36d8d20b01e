#pragma once

#include <cstdint>
#include <compare>
#include <string>

namespace vanetsim {

// Virtual simulation clock value. Integer nanoseconds so that event
// ordering, tie-breaking and emitted records are exact and reproducible.
struct SimTime {
  std::int64_t ns{0};

  static constexpr SimTime zero() { return SimTime{0}; }
  static constexpr SimTime from_ns(std::int64_t v) { return SimTime{v}; }
  static constexpr SimTime from_us(std::int64_t v) { return SimTime{v * 1000}; }
  static constexpr SimTime from_ms(std::int64_t v) { return SimTime{v * 1'000'000}; }
  static constexpr SimTime from_seconds(double s) {
    return SimTime{static_cast<std::int64_t>(s * 1e9 + (s >= 0 ? 0.5 : -0.5))};
  }

  double seconds() const { return static_cast<double>(ns) / 1e9; }

  constexpr auto operator<=>(const SimTime&) const = default;

  constexpr SimTime operator+(SimTime other) const { return SimTime{ns + other.ns}; }
  constexpr SimTime operator-(SimTime other) const { return SimTime{ns - other.ns}; }
  SimTime& operator+=(SimTime other) {
    ns += other.ns;
    return *this;
  }
};

// Durations share the representation of the clock.
using Duration = SimTime;

inline std::string format_time_s(SimTime t) {
  // Fixed 9-decimal seconds; stable across platforms for golden logs.
  char buf[40];
  std::int64_t s = t.ns / 1'000'000'000;
  std::int64_t frac = t.ns % 1'000'000'000;
  std::snprintf(buf, sizeof(buf), "%lld.%09lld", static_cast<long long>(s),
                static_cast<long long>(frac));
  return buf;
}

}  // namespace vanetsim
