#pragma once

#include <cstdint>
#include <random>

namespace scr1d::detail {

// Uniform double in [0, 1) from the top 53 bits of the engine output.
// Used instead of std::uniform_real_distribution so that streams are
// bit-identical across standard library implementations.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

}  // namespace scr1d::detail
