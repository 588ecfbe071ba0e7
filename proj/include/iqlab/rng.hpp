#pragma once

#include <cstdint>
#include <random>

namespace iqlab {

// All randomized routines draw from this engine with an explicit seed so runs
// replay bit for bit.  Conversions below avoid std::uniform_* distributions,
// whose output is not pinned down by the standard.
using Rng = std::mt19937_64;

// Uniform in [0,1) with 53 random bits.
inline double rng_unit(Rng& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, n) by rejection; n must be positive.
inline std::uint64_t rng_below(Rng& g, std::uint64_t n) {
  std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  for (;;) {
    std::uint64_t v = g();
    if (v < limit) return v % n;
  }
}

// Uniform sign, +1 or -1.
inline int rng_sign(Rng& g) { return (g() & 1u) ? 1 : -1; }

}  // namespace iqlab
