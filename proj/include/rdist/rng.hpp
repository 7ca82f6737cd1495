#pragma once

#include <cstdint>
#include <random>

namespace rdist {

/// Seedable generator with deterministic stream splitting.
///
/// Children are seeded from splitmix64(seed ^ splitmix64(stream)), so a root
/// seed plus a fixed set of stream ids reproduces every derived sequence.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(mix(seed)) {}

  std::uint64_t seed() const noexcept { return seed_; }

  Rng split(std::uint64_t stream) const { return Rng(mix(seed_ ^ mix(stream + 0x632be59bd9b4e019ULL))); }

  double uniform01() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

  /// Uniform integer in [lo, hi].
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(engine_);
  }

  std::mt19937_64& engine() noexcept { return engine_; }

  static std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

// Stream ids used by the construct pipeline and the CLI.
namespace streams {
inline constexpr std::uint64_t kOrdering = 1;
inline constexpr std::uint64_t kSparseCSet = 2;
inline constexpr std::uint64_t kSubtraction = 3;
inline constexpr std::uint64_t kGenerator = 4;
inline constexpr std::uint64_t kGreedyOrder = 5;
}  // namespace streams

}  // namespace rdist
