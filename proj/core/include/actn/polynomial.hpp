#pragma once

// Products of sums: f(x) = prod_i sum_j q_ij(x_j), one row per factor.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "actn/boundary.hpp"
#include "actn/network.hpp"
#include "actn/quadrature.hpp"
#include "actn/tensor.hpp"

namespace actn {

/// q_ij(x) = sin(2 pi (x + phase[i][j])) + c, kept so the function can be
/// evaluated off-grid.
struct SinTerms {
  double c = 0.0;
  std::vector<std::vector<double>> phase;
};

struct PolynomialSpec {
  std::size_t n = 0;     ///< variables (columns)
  std::size_t k = 0;     ///< factors (rows)
  std::size_t grid = 0;  ///< G
  /// q[i][j] holds q_ij at the rule's nodes.
  std::vector<std::vector<std::vector<double>>> q;
  QuadratureRule rule;
  std::optional<SinTerms> sin;

  void validate() const;
  /// True when every row holds the same q-vectors (the power family).
  bool rows_identical() const;
  /// f at an arbitrary point of the hypercube. Tabulated families are
  /// piecewise constant on the cells of the uniform grid.
  double evaluate(std::span<const double> x) const;
};

/// Uniform [-1, 1] values on the uniform rule over [0, 1]; every row shares
/// the same q-vectors, so f = (q_1 + ... + q_N)^k.
PolynomialSpec make_power_polynomial(std::size_t n, std::size_t k, std::size_t grid, std::uint64_t seed);

/// Independent rows with values uniform in [lambda, 1].
PolynomialSpec make_general_polynomial(std::size_t n, std::size_t k, std::size_t grid, double lambda,
                                       std::uint64_t seed);

/// Row 0 is the power-family row; rows i > 0 add delta * r_ij with r_ij
/// uniform in [-1, 1]. delta = 0 reproduces make_power_polynomial.
PolynomialSpec make_perturbed_polynomial(std::size_t n, std::size_t k, std::size_t grid, double delta,
                                         std::uint64_t seed);

/// q_ij(x) = sin(2 pi (x + a_ij)) + c on [0, 1], a_ij uniform in [0, 1),
/// sampled on a Gauss-Legendre rule of order `grid`. The phases depend only
/// on the seed, so different grids describe the same function.
PolynomialSpec make_sin_polynomial(std::size_t n, std::size_t k, double c, std::size_t grid, std::uint64_t seed);

/// Row i, column j holds the two-state chain tensor of factor i with the
/// vertical leg carrying x_j; quadrature weights sit on the top row.
RowStructure build_polynomial_tn(const PolynomialSpec& spec);

/// Projector pair for joining row i's bond into a merged bond of dim i.
/// P_L has legs (a: i, b: 2, c: i + 1), P_R has legs (c: i + 1, a: i, b: 2).
/// Column j does not change the entries; it is range-checked only.
std::pair<Tensor, Tensor> exact_projectors(std::size_t i, std::size_t j, std::size_t k);

/// Inserts the nested projector chain P_L[2..k], P_R[k..2] between every pair
/// of adjacent columns of `build_polynomial_tn(spec).to_network()`.
TensorNetwork insert_all_projectors(const PolynomialSpec& spec, std::size_t keep_rank = 0);

/// Integral of the power family through single-variable moments and
/// binomial convolution across variables. Throws SpecError unless rows are
/// identical.
double recursion_integral(const PolynomialSpec& spec);

/// Weighted sum over all G^N grid points.
double brute_force_integral(const PolynomialSpec& spec);

}  // namespace actn
