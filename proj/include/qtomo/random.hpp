#pragma once

#include <cstdint>
#include <random>

namespace qtomo {

using Rng = std::mt19937_64;

/// Sub-seed for stream `index` of a run seeded with `seed` (SplitMix64 mix of
/// seed + (index + 1)·golden-ratio increment). Streams are independent of
/// the order or thread they are consumed on.
inline std::uint64_t split_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline double sample_poisson(Rng& rng, double mean) {
  if (!(mean > 0.0)) return 0.0;
  std::poisson_distribution<long long> dist(mean);
  return static_cast<double>(dist(rng));
}

}  // namespace qtomo
