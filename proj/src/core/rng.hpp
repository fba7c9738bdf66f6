#pragma once

#include <cstdint>
#include <random>

#include "poly.hpp"

namespace sendovlab {

// splitmix64; used to derive independent per-task seeds from (seed, index)
// so parallel and sequential runs produce identical streams.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t x = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

inline std::mt19937_64 rng_for(std::uint64_t seed, std::uint64_t index = 0) {
  return std::mt19937_64(mix_seed(seed, index));
}

// Uniform over the closed disk |z| <= radius by area.
inline Complex uniform_disk(std::mt19937_64& rng, double radius = 1.0) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double r = radius * std::sqrt(u(rng));
  const double a = 2.0 * 3.141592653589793238462643 * u(rng);
  return Complex(r * std::cos(a), r * std::sin(a));
}

}  // namespace sendovlab
