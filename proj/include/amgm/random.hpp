#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace amgm {

// Distribution transforms on top of std::mt19937_64. Hand-rolled instead of
// <random> distributions so that a given seed produces the same stream on
// every standard library, which the search determinism contract relies on.

/// Uniform draw in [0, 1) with 53 random bits.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_in(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

/// Log-uniform draw over [lo, hi], lo > 0.
inline double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::exp(uniform_in(rng, std::log(lo), std::log(hi)));
}

/// Standard exponential variate.
inline double exponential(std::mt19937_64& rng) {
  return -std::log1p(-uniform01(rng));
}

/// Flat Dirichlet sample: n positive entries summing to ~1.
inline std::vector<double> dirichlet_flat(std::mt19937_64& rng, std::size_t n) {
  std::vector<double> v(n);
  double total = 0;
  for (auto& x : v) {
    do {
      x = exponential(rng);
    } while (x <= 0);
    total += x;
  }
  for (auto& x : v) x /= total;
  return v;
}

}  // namespace amgm
