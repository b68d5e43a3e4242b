#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace nap {

using Rng = std::mt19937_64;

/// Derives an independent seed for a named random stream, so that adding a
/// consumer of one stream never shifts the draws of another.
inline std::uint64_t derive_seed(std::uint64_t base, std::string_view stream) {
  std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
  for (unsigned char ch : stream) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  // splitmix64 finalizer over the combined value
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (h | 1U);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline Rng make_rng(std::uint64_t base, std::string_view stream) {
  return Rng{derive_seed(base, stream)};
}

}  // namespace nap
