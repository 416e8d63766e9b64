#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace actn {

/// Counter-based generator: the n-th draw of a stream is a pure function of
/// (seed, stream, n). Draws from different streams never interact, so a
/// builder can ask for "row i, column j" values in any order.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0) noexcept
      : key_(mix(seed ^ mix(stream + 0x632be59bd9b4e019ULL))) {}

  std::uint64_t bits(std::uint64_t counter) const noexcept {
    return mix(key_ + counter * 0x9e3779b97f4a7c15ULL);
  }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform(std::uint64_t counter) const noexcept {
    return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
  }

  double uniform(std::uint64_t counter, double lo, double hi) const noexcept {
    return lo + (hi - lo) * uniform(counter);
  }

  /// Standard normal via Box-Muller on two consecutive counters.
  double normal(std::uint64_t counter) const noexcept {
    const double u1 = 1.0 - uniform(counter);  // (0, 1]
    const double u2 = uniform(counter + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  /// Sequential convenience wrapper.
  double next_uniform(double lo, double hi) noexcept { return uniform(next_++, lo, hi); }
  double next_normal() noexcept {
    const double v = normal(next_);
    next_ += 2;
    return v;
  }

 private:
  static std::uint64_t mix(std::uint64_t z) noexcept {
    // splitmix64 finalizer
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
  std::uint64_t next_ = 0;
};

}  // namespace actn
