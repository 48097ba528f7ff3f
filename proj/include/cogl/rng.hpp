#pragma once

#include <cstdint>

namespace cogl {

// Counter-based random stream. Every draw is a pure function of the key
// tuple, so results do not depend on scheduling or iteration order.

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t mix(std::uint64_t seed, std::uint64_t a) {
  return splitmix64(splitmix64(seed) ^ a);
}

constexpr std::uint64_t mix(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return splitmix64(mix(seed, a) ^ b);
}

constexpr std::uint64_t mix(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  return splitmix64(mix(seed, a, b) ^ c);
}

/// Uniform double in [0, 1) from a hashed key.
inline double uniform01(std::uint64_t key) {
  return static_cast<double>(key >> 11) * 0x1.0p-53;
}

inline double uniform01(std::uint64_t seed, std::uint64_t a) { return uniform01(mix(seed, a)); }

inline double uniform01(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return uniform01(mix(seed, a, b));
}

/// Sequential convenience stream over a fixed key.
class RngStream {
public:
  explicit RngStream(std::uint64_t key) : key_(key) {}

  std::uint64_t next_u64() { return mix(key_, counter_++); }
  double next_double() { return uniform01(next_u64()); }

  /// Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t next_below(std::uint64_t bound) {
    return static_cast<std::uint64_t>(next_double() * static_cast<double>(bound));
  }

private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace cogl
