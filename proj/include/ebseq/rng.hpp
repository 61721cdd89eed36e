#pragma once

#include <cmath>
#include <cstdint>

namespace ebseq {

// Counter-based generator: every variate is a pure function of
// (seed, replicate, coordinate, stream).  No sequential state, so replicate
// r / coordinate i always sees the same draw no matter how work is split
// across threads, and replicate-level records are bitwise reproducible.

// splitmix64 finalizer; full-avalanche 64 -> 64 mixer.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t rng_key(std::uint64_t seed, std::uint64_t replicate,
                             std::uint64_t coordinate, std::uint64_t stream) {
  std::uint64_t h = mix64(seed);
  h = mix64(h ^ replicate);
  h = mix64(h ^ coordinate);
  h = mix64(h ^ stream);
  return h;
}

// Streams keep independent uses of the same (replicate, coordinate) cell from
// colliding.
enum class RngStream : std::uint64_t {
  noise = 1,
  signal_support = 2,
  signal_sign = 3,
  signal_value = 4,
  posterior_spike = 5,
  posterior_slab = 6,
  box_muller_a = 7,
  box_muller_b = 8,
};

// Uniform on [0,1): top 53 bits.
inline double unit_uniform(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Uniform on (0,1]: never returns 0, safe inside log().
inline double unit_uniform_open(std::uint64_t bits) {
  return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
}

inline double uniform_at(std::uint64_t seed, std::uint64_t replicate,
                         std::uint64_t coordinate, RngStream stream) {
  return unit_uniform(
      rng_key(seed, replicate, coordinate, static_cast<std::uint64_t>(stream)));
}

// Standard normal via Box-Muller from two keyed uniforms; u1 in (0,1] so the
// log never sees zero.
inline double normal_at(std::uint64_t seed, std::uint64_t replicate,
                        std::uint64_t coordinate, RngStream stream) {
  const std::uint64_t base = static_cast<std::uint64_t>(stream) << 8;
  const double u1 = unit_uniform_open(rng_key(
      seed, replicate, coordinate,
      base + static_cast<std::uint64_t>(RngStream::box_muller_a)));
  const double u2 = unit_uniform(rng_key(
      seed, replicate, coordinate,
      base + static_cast<std::uint64_t>(RngStream::box_muller_b)));
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
}

}  // namespace ebseq
