#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace adrcnn {

// All randomness in the engine flows through mt19937_64 plus the helpers
// below.  std::shuffle and the std distributions are implementation-defined,
// so we roll the few primitives we need to keep runs reproducible across
// standard libraries.

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Stable per-fold / per-purpose seed derivation from a master seed.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                                 std::uint64_t salt = 0) {
  return splitmix64(splitmix64(master ^ (0x517cc1b727220a95ULL * (stream + 1))) + salt);
}

// Uniform integer in [0, bound) by rejection sampling; bound > 0.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

// Uniform double in [0, 1) with 53 random bits.
inline double uniform_double(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform double in [lo, hi).
inline double uniform_double(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform_double(rng);
}

// Fisher-Yates shuffle with explicit draws.
template <typename T>
void deterministic_shuffle(std::vector<T>& items, std::mt19937_64& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(uniform_below(rng, i));
    std::swap(items[i - 1], items[j]);
  }
}

}  // namespace adrcnn
