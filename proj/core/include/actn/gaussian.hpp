#pragma once

// exp(-x^T A x) over [-1, 1]^N.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "actn/boundary.hpp"
#include "actn/quadrature.hpp"

namespace actn {

struct GaussianSpec {
  std::size_t n = 0;
  std::size_t band = 0;  ///< W: entries with |i - j| > W are off-band
  std::size_t grid = 0;
  std::vector<double> a;  ///< N x N, row-major; need not be symmetric
  QuadratureRule rule;

  double at(std::size_t i, std::size_t j) const { return a[i * n + j]; }
  void validate() const;
  /// -x^T A x
  double log_value(std::span<const double> x) const;
};

/// In-band entries uniform in [-1, 1]; off-band entries delta times uniform
/// in [-1, 1]. Gauss-Legendre rule of order `grid` on [-1, 1].
GaussianSpec make_banded_A(std::size_t n, std::size_t band, std::size_t grid, double delta, std::uint64_t seed);

/// Same matrix with a different rule order.
GaussianSpec with_grid(const GaussianSpec& spec, std::size_t grid);

/// Diagonal factors w_p exp(-A_ii x_p^2) and, for every pair with
/// A_ij + A_ji != 0, the matrix exp(-(A_ij + A_ji) x_p x_q). Quadrature
/// weights are carried by the diagonal factors only.
TriangularNetwork build_gaussian_tn(const GaussianSpec& spec);

/// Weighted sum over all G^N grid points.
double brute_force_integral(const GaussianSpec& spec);

}  // namespace actn
