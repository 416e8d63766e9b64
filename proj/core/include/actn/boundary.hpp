#pragma once

// Boundary-MPS contraction of row-structured and banded networks.

#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "actn/contraction.hpp"
#include "actn/network.hpp"
#include "actn/tensor.hpp"

namespace actn {

/// k rows of N tensors with legs "l", "r" (horizontal) and "u", "d"
/// (vertical). A missing neighbor is a leg of dim 1.
struct RowStructure {
  std::vector<std::vector<Tensor>> rows;

  std::size_t row_count() const noexcept { return rows.size(); }
  std::size_t columns() const noexcept { return rows.empty() ? 0 : rows.front().size(); }
  /// Throws DimensionError on a ragged layout or mismatched bonds.
  void validate() const;
  /// Generic network with unique leg names; dim-1 legs are dropped.
  /// Horizontal bonds are named "h<i>.<j>" (row i, left of column j) and
  /// vertical bonds "v<i>.<j>" (above row i in column j).
  TensorNetwork to_network() const;
};

/// Absorbs rows top to bottom into a boundary MPS, compressing bonds to
/// spec.max_chi after each row with a QR sweep followed by a truncating SVD
/// sweep.
ContractionReport boundary_contract_rows(const RowStructure& rs, const TruncationSpec& spec);

/// Z = sum_x prod_i diagonal[i][x_i] prod_{i<j} couplings[(i,j)][x_i, x_j].
/// Couplings are row-major G x G. This is the layout of a pairwise-coupled
/// integrand; a band of width W couples only pairs with j - i <= W.
struct TriangularNetwork {
  std::size_t grid = 0;
  std::vector<std::vector<double>> diagonal;
  std::map<std::pair<std::size_t, std::size_t>, std::vector<double>> couplings;

  std::size_t size() const noexcept { return diagonal.size(); }
  /// Largest j - i over stored couplings (0 when there are none).
  std::size_t bandwidth() const noexcept;
  void validate() const;
  /// Generic network: vector and matrix tensors joined by COPY chains on
  /// legs named "x<i>...".
  TensorNetwork to_network() const;
};

/// Boundary MPS with one site per variable not yet integrated. Step i applies
/// the couplings (i, j > i) as an MPO whose bond carries x_i, sums x_i out,
/// then compresses. Width-W bands stay exact for max_chi >= G^W.
ContractionReport boundary_contract_banded(const TriangularNetwork& tn, const TruncationSpec& spec);

}  // namespace actn
