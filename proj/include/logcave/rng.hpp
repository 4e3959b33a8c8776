#pragma once

#include <cstdint>
#include <random>

namespace logcave {

using Rng = std::mt19937_64;

// SplitMix64 finalizer; decorrelates nearby seed/stream pairs well enough
// for Monte Carlo substreams.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Deterministic substream: rng_for(seed, s) and rng_for(seed, t) are
// independent streams for s != t. All randomized code in the library
// derives its generators this way, which is what makes chunked parallel
// execution reproduce the serial results exactly.
inline Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0) {
  return Rng(mix64(mix64(seed) ^ mix64(stream * 0x9e3779b97f4a7c15ULL + 0x243f6a8885a308d3ULL)));
}

inline double uniform01(Rng& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

}  // namespace logcave
