#pragma once

// 1D binary MERA integrand: f(x) = sum_i psi_i prod_n g(x_n)^{i_n}, where
// psi is the state of a MERA over N = 2^L two-level sites.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "actn/network.hpp"
#include "actn/quadrature.hpp"

namespace actn {

/// One renormalization step, applied top-down: each site splits into two
/// through an isometry, then disentanglers act on the pairs (1, 2), (3, 4),
/// ... of the doubled chain (open boundary).
struct MeraLayer {
  std::vector<std::vector<double>> isometries;     ///< 4 x 2 row-major, V^T V = I
  std::vector<std::vector<double>> disentanglers;  ///< 4 x 4 row-major, orthogonal
};

struct MeraSpec {
  std::size_t n = 0;
  std::vector<double> top;        ///< unit 2-vector
  std::vector<MeraLayer> layers;  ///< top layer first
  std::vector<double> g;          ///< samples at the rule's nodes
  QuadratureRule rule;

  /// Throws SpecError on a non-orthogonal layer tensor (1e-12) or when
  /// sum w g != 0 or sum w g^2 != 2 (1e-10).
  void validate() const;
};

/// Random MERA for N = 2^L leaves (N >= 2) from QR of seeded Gaussian
/// matrices, with g a normalized Legendre combination on a Gauss-Legendre
/// rule of order `grid` (grid >= 2) over [-1, 1].
MeraSpec make_mera(std::size_t n, std::size_t grid, std::uint64_t seed);

/// Network for psi with open legs "i0".."i{N-1}".
TensorNetwork mera_state_network(const MeraSpec& spec, const std::string& prefix = "i");

/// Integral of |f|^2, contracted layer by layer from the leaves with each
/// layer tensor paired against its own transpose. Throws Error if an
/// intermediate two-site operator does not factor into single-site ones.
double mera_integral_structured(const MeraSpec& spec);

/// Same integral from a full contraction of <psi| M^{(x)N} |psi>.
double mera_integral_naive(const MeraSpec& spec);

/// sum_i psi_i^2 from a full contraction.
double mera_trace_naive(const MeraSpec& spec);

}  // namespace actn
