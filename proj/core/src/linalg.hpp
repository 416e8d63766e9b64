#pragma once

// Eigen-backed dense kernels shared by the tensor and contraction code.

#include <Eigen/Dense>

#include <span>
#include <vector>

#include "actn/tensor.hpp"

namespace actn::detail {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MatrixMap = Eigen::Map<RowMatrix>;
using ConstMatrixMap = Eigen::Map<const RowMatrix>;

struct TruncatedSvd {
  RowMatrix u;                  // rows x kept
  std::vector<double> s;        // kept, descending
  RowMatrix vt;                 // kept x cols
  double discarded_weight = 0;  // relative to ||m||_F
  double norm = 0;              // ||m||_F
};

/// Thin SVD of `m` truncated per `spec`. A zero matrix yields one zero
/// singular value with zero factors.
TruncatedSvd truncated_svd(const RowMatrix& m, const TruncationSpec& spec);

/// Thin QR: m = q * r with q having min(rows, cols) orthonormal columns.
void thin_qr(const RowMatrix& m, RowMatrix& q, RowMatrix& r);

inline ConstMatrixMap as_matrix(const Tensor& t, std::size_t rows, std::size_t cols) {
  return ConstMatrixMap(t.data().data(), static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
}

inline std::vector<double> to_vector(const RowMatrix& m) { return {m.data(), m.data() + m.size()}; }

}  // namespace actn::detail
