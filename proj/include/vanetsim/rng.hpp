#pragma once

#include <cstdint>
#include <cstddef>
#include <cassert>

#include "vanetsim/time.hpp"

namespace vanetsim {

// Named random streams. Keeping streams separate means that, e.g., changing
// traffic seeding does not perturb the mobility trace, which is what makes
// paired protocol comparisons on identical mobility possible.
enum class RngStreamId : std::uint64_t {
  Mobility = 1,
  Traffic = 2,
  Radio = 3,
  Topology = 4,
};

inline const char* to_string(RngStreamId id) {
  switch (id) {
    case RngStreamId::Mobility: return "mobility";
    case RngStreamId::Traffic: return "traffic";
    case RngStreamId::Radio: return "radio";
    case RngStreamId::Topology: return "topology";
  }
  return "?";
}

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}
}  // namespace detail

// xoshiro256** seeded via splitmix64. Self-contained so that identical
// (seed, stream) pairs yield identical sequences on every platform;
// std::uniform_* distributions are not portable and are avoided.
class RngStream {
 public:
  RngStream() : RngStream(0, RngStreamId::Mobility) {}

  RngStream(std::uint64_t seed, RngStreamId id) {
    std::uint64_t sm = seed ^ (0xa5a5a5a5a5a5a5a5ULL * static_cast<std::uint64_t>(id));
    for (auto& w : s_) w = detail::splitmix64(sm);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n). Rejection sampling keeps it unbiased.
  std::uint64_t uniform_index(std::uint64_t n) {
    assert(n > 0);
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return x % n;
  }

  bool bernoulli(double p) { return uniform() < p; }

  Duration uniform_duration(Duration max) {
    if (max.ns <= 0) return Duration::zero();
    return Duration::from_ns(static_cast<std::int64_t>(
        uniform_index(static_cast<std::uint64_t>(max.ns) + 1)));
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t s_[4];
};

// Stable mixing of run parameters into per-run seeds; protocol identity is
// deliberately absent so all protocols share one mobility trace per scenario.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t node_count,
                              std::uint64_t fraction_permille) {
  std::uint64_t st = seed;
  detail::splitmix64(st);
  st ^= 0x517cc1b727220a95ULL * (node_count + 1);
  detail::splitmix64(st);
  st ^= 0x2545f4914f6cdd1dULL * (fraction_permille + 1);
  return detail::splitmix64(st);
}

}  // namespace vanetsim
