#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace scenelogic {

// Seeded generator used everywhere randomness is needed. The engine is fixed
// (mt19937_64) and the integer/real mapping is done here rather than through
// <random> distributions, whose output differs between standard libraries.
class Rng {
 public:
  static constexpr const char* kAlgorithm = "mt19937_64";

  explicit Rng(std::uint64_t seed) : engine_(seed), seed_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t next() { return engine_(); }

  // Uniform over [0, n); n must be positive.
  std::size_t index(std::size_t n) {
    const std::uint64_t bound = n;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x = engine_();
    while (x >= limit) x = engine_();
    return static_cast<std::size_t>(x % bound);
  }

  // Uniform over [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

  bool coin() { return (engine_() >> 63) != 0; }

  // True with probability num/den.
  bool chance(std::size_t num, std::size_t den) { return index(den) < num; }

 private:
  std::mt19937_64 engine_;
  std::uint64_t seed_;
};

// splitmix64 finalizer; a bijection, so distinct seeds stay distinct.
constexpr std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Per-shard / per-item seed derivation: mixed global seed xor ordinal. Mixing
// first keeps nearby global seeds (s and s^1) from sharing whole streams.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t ordinal) {
  return mix_seed(seed) ^ ordinal;
}

}  // namespace scenelogic
