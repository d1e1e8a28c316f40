#pragma once

#include <cstdint>
#include <random>

namespace swor {

/// splitmix64 finalizer; used only to spread seeds for substream derivation.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Deterministic stream of uniforms on the open interval (0, 1).
///
/// The engine is pinned to std::mt19937_64, whose output sequence for a given
/// seed is fixed by the language standard, so runs reproduce bit-for-bit
/// across platforms. A stream is single-owner: one stream per search or
/// replicate, never shared between threads. Parallel work derives independent
/// substreams from (master seed, task index).
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed), seed_(seed) {}

  static RandomStream substream(std::uint64_t master_seed, std::uint64_t index) {
    return RandomStream(
        mix64(mix64(master_seed) ^ (index + 1) * 0x9E3779B97F4A7C15ULL));
  }

  /// One uniform, strictly inside (0, 1). 52 random bits centered on
  /// half-steps of the grid, so 0 and 1 are unreachable and log(-log u) is
  /// always finite.
  double uniform() {
    const std::uint64_t bits = engine_() >> 12;
    return (static_cast<double>(bits) + 0.5) * 0x1p-52;
  }

  std::uint64_t seed() const { return seed_; }

  static constexpr const char* kGeneratorName = "mt19937_64";

 private:
  std::mt19937_64 engine_;
  std::uint64_t seed_;
};

}  // namespace swor
