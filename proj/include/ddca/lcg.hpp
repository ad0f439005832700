#pragma once

#include <cmath>
#include <cstdint>

namespace ddca {

/// 64-bit linear congruential generator, fully specified so any
/// implementation reproduces the same sequence from the same seed:
///
///   state_0     = seed
///   state_{n+1} = state_n * 6364136223846793005 + 1442695040888963407  (mod 2^64)
///   uniform()   = (state_{n+1} >> 11) * 2^-53                            in [0, 1)
///   below(n)    = floor(uniform() * n)
///   exponential(rate) = -log(1 - uniform()) / rate
class Lcg {
 public:
  static constexpr std::uint64_t kMultiplier = 6364136223846793005ULL;
  static constexpr std::uint64_t kIncrement = 1442695040888963407ULL;

  explicit constexpr Lcg(std::uint64_t seed) : state_(seed) {}

  constexpr std::uint64_t next() {
    state_ = state_ * kMultiplier + kIncrement;
    return state_;
  }

  constexpr double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  constexpr double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  constexpr std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>(uniform() * static_cast<double>(n));
  }

  double exponential(double rate) { return -std::log(1.0 - uniform()) / rate; }

 private:
  std::uint64_t state_;
};

}  // namespace ddca
