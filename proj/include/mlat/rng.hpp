#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace mlat {

// All randomness flows through mt19937_64 plus the helpers below. The
// <random> distributions are avoided on purpose: their output sequences are
// implementation defined, and a seed here must reproduce identical artifacts
// on every platform.
using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Stable substream derivation; chain for more keys.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t key) {
  return splitmix64(base ^ splitmix64(key));
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t k1, std::uint64_t k2) {
  return derive_seed(derive_seed(base, k1), k2);
}

// Uniform in [0, 1), 53 random bits.
inline double uniform01(Rng& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

inline double uniform(Rng& g, double lo, double hi) {
  return lo + (hi - lo) * uniform01(g);
}

// Box-Muller; consumes exactly two draws per call.
inline double normal(Rng& g, double mean, double stddev) {
  const double u1 = 1.0 - uniform01(g);  // (0, 1], keeps the log finite
  const double u2 = uniform01(g);
  const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  return mean + stddev * z;
}

}  // namespace mlat
