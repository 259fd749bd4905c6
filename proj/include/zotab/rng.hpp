#pragma once

#include <cstdint>
#include <random>

namespace zotab {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Independent generator for item `index` of a run seeded with `seed`, so a
// result never depends on how items were split between workers.
inline std::mt19937_64 stream_rng(std::uint64_t seed, std::uint64_t index, std::uint64_t purpose = 0) {
  return std::mt19937_64(splitmix64(splitmix64(seed ^ (purpose * 0xD1B54A32D192ED03ull)) + index));
}

}  // namespace zotab
