#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace tangle {

/// SplitMix64 finalizer, used to derive independent seeds.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Stream purposes, so substreams keyed by the same id never collide.
enum class Stream : std::uint64_t {
  Arrivals = 1,
  Selection = 2,
  Confidence = 3,
  Adversary = 4,
};

/// Random source with platform-independent derived distributions.
///
/// std::mt19937_64 output is fully specified by the standard; the
/// std::*_distribution adaptors are not, so the few we need are written out
/// here to keep event logs byte-identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Substream keyed by (master seed, purpose, key, index).
  static Rng substream(std::uint64_t master, Stream purpose, std::uint64_t key,
                       std::uint64_t index = 0) {
    std::uint64_t h = mix64(master);
    h = mix64(h ^ static_cast<std::uint64_t>(purpose));
    h = mix64(h ^ key);
    h = mix64(h ^ index);
    return Rng(h);
  }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1) with 53 bits of precision.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n), n > 0. Rejection sampling removes modulo bias.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x = engine_();
    while (x >= limit) x = engine_();
    return x % n;
  }

  /// Exponential variate with the given rate.
  double exponential(double rate) { return -std::log1p(-uniform()) / rate; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace tangle
