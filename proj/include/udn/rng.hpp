#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace udn {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Deterministic counter-based stream: independent engines per (seed, drop,
/// substream) triple, so drops can run in any order on any thread count and
/// still reproduce bit-identically.
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t drop, std::uint64_t substream)
      : eng_(splitmix64(splitmix64(seed ^ 0x6a09e667f3bcc908ULL) + drop * 0x9e3779b97f4a7c15ULL +
                        substream * 0xc2b2ae3d27d4eb4fULL)) {}

  std::uint64_t bits() { return eng_(); }

  double uniform01() { return double(eng_() >> 11) * 0x1.0p-53; }  // [0, 1)

  double exponential() { return -std::log1p(-uniform01()); }  // unit mean

  std::uint32_t uniform_int(std::uint32_t n) {  // [0, n)
    // Rejection keeps the draw exactly uniform.
    const std::uint64_t span = n;
    const std::uint64_t limit = std::uint64_t(-1) - std::uint64_t(-1) % span;
    std::uint64_t x;
    do {
      x = eng_();
    } while (x >= limit);
    return std::uint32_t(x % span);
  }

  int poisson(double mean) {
    std::poisson_distribution<int> d(mean);
    return d(eng_);
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace udn
