// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <cstdint>
#include <string_view>

namespace rolemine {

// All randomness in the library flows from one 64-bit seed through named
// sub-streams, so results do not depend on platform, standard library
// internals, or thread scheduling.

/// splitmix64 step; also used to expand seeds into engine state.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Derives an independent stream seed from a base seed and a stream id.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

/// FNV-1a 64-bit string hash; stable across platforms.
std::uint64_t hash64(std::string_view s);

/// xoshiro256++ generator with hand-rolled distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();

  /// Uniform double in [0, 1) with 53-bit resolution.
  double next_double();

  /// Uniform index in [0, n). n must be > 0.
  std::size_t next_index(std::size_t n);

  /// Standard normal via Box-Muller (no cached spare, stateless stream).
  double next_gaussian();

  /// Poisson draw; exact for any mean >= 0 (multiplication method,
  /// recursively halved for large means).
  long next_poisson(double mean);

 private:
  std::uint64_t s_[4];
};

}  // namespace rolemine
