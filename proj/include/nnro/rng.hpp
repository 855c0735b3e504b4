#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace nnro {

// Draw mappings are hand-rolled on top of the mt19937_64 bit stream so that
// seeded runs reproduce exactly regardless of how the standard library
// implements its distributions.

// Uniform draw in the open interval (0, 1). Never returns 0 or 1.
inline double unit_open(std::mt19937_64& rng) {
  return static_cast<double>((rng() >> 11) | 1ULL) * 0x1.0p-53;
}

// Uniform-ish integer in [0, n). Modulo bias is irrelevant for the sampling
// uses here; determinism is what matters.
inline uint64_t bounded(std::mt19937_64& rng, uint64_t n) {
  return rng() % n;
}

// Standard normal via Box-Muller. Consumes two draws per value.
inline double gaussian(std::mt19937_64& rng) {
  double u1 = unit_open(rng);
  double u2 = unit_open(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

}  // namespace nnro
