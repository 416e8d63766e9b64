#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace actn {

/// Unscrambled Sobol sequence in Gray-code order with Joe-Kuo direction
/// numbers. Index 0 is the all-zeros point; callers normally start at 1.
class SobolSequence {
 public:
  static constexpr std::size_t max_dim = 64;
  static constexpr int bits = 32;

  /// Throws SpecError when dim is 0 or exceeds max_dim.
  explicit SobolSequence(std::size_t dim);

  std::size_t dim() const noexcept { return dim_; }

  /// Writes point `index` into `out` (length dim). index < 2^32.
  void point(std::uint64_t index, std::span<double> out) const;

  /// `count` consecutive points from `start_index`, row-major (count x dim).
  std::vector<double> points(std::uint64_t start_index, std::size_t count) const;

 private:
  std::size_t dim_;
  std::vector<std::uint32_t> v_;  // dim x bits direction numbers
};

/// Convenience wrapper; start_index must be at least 1.
std::vector<double> sobol_points(std::size_t dim, std::uint64_t start_index, std::size_t count);

}  // namespace actn
