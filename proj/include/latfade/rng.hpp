#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "latfade/types.hpp"

namespace latfade {

using Engine = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed of the `index`-th independent stream under `master`. Trials seeded
/// this way give the same draws regardless of how they are scheduled.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(splitmix64(master) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

/// Circular complex Gaussian with E|z|^2 = 1.
inline Complex complex_gaussian(Engine& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  const double re = normal(rng);
  const double im = normal(rng);
  return {re, im};
}

}  // namespace latfade
