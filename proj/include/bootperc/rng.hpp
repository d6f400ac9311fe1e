#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <limits>

namespace bootperc {

/// Purpose tags for independent random streams derived from one seed.
enum class StreamTag : std::uint64_t {
  Graph = 1,
  SeedSet = 2,
  Selection = 3,
  Trial = 4,
};

/// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Keys a child seed by (seed, k1, k2, ...). Distinct key paths give
/// statistically independent streams; the result depends only on the path.
std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) noexcept;

inline std::uint64_t derive_seed(std::uint64_t seed, StreamTag tag) noexcept {
  return derive_seed(seed, {static_cast<std::uint64_t>(tag)});
}

/// xoshiro256** seeded through SplitMix64. Satisfies UniformRandomBitGenerator.
///
/// Distributions are implemented here rather than via <random> so that a
/// seed produces the same stream on every standard library.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept;

  /// Uniform double in (0, 1]; never returns 0 so log() is always finite.
  double uniform_open0() noexcept {
    return static_cast<double>(((*this)() >> 11) + 1) * 0x1.0p-53;
  }

  /// Uniform integer in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound) noexcept;

 private:
  std::array<std::uint64_t, 4> s_{};
};

}  // namespace bootperc
