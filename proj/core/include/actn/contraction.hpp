#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>

#include "actn/network.hpp"
#include "actn/tensor.hpp"

namespace actn {

/// Value of a contraction as sign * exp(value_log). A zero value has
/// sign 0 and value_log = -inf.
struct ContractionReport {
  double value_log = -std::numeric_limits<double>::infinity();
  int value_sign = 0;
  std::size_t max_bond_reached = 0;
  double cumulative_discarded_weight = 0.0;

  double value() const;
};

/// |est - ref| / |ref|, computed in log space so values beyond double range
/// compare correctly. Returns |est| when ref is zero.
double relative_error(const ContractionReport& est, const ContractionReport& ref);
double relative_error(const ContractionReport& est, double ref);

struct ExactOptions {
  /// When set, ties in the greedy path are broken by a random order drawn
  /// from this seed instead of by leg name.
  std::optional<std::uint64_t> shuffle_seed;
};

/// A tensor with a factored-out scale: value = sign * exp(log_scale) * tensor.
struct ScaledTensor {
  Tensor tensor;
  double log_scale = 0.0;
  int sign = 1;
};

/// Greedy pairwise contraction of every bond. Open legs survive on the result.
ScaledTensor contract_network(const TensorNetwork& tn, const ExactOptions& options = {});

/// Scalar contraction; throws DimensionError if the network has open legs.
ContractionReport contract_exact(const TensorNetwork& tn, const ExactOptions& options = {});

/// One bond fed into a projector: the tensor `left` keeps its leg, the other
/// endpoint is rewired to the projector's output.
struct ProjectedBond {
  std::string name;
  std::size_t left = 0;
};

/// Splices P_L then P_R into the given bonds. P_L carries the bond names plus
/// one link leg; P_R carries the same link leg and the bond names again. The
/// link and the P_R side of each bond get fresh names. Returns the new
/// network and stores the link name in `link` if requested.
TensorNetwork insert_projector_pair(const TensorNetwork& tn, std::span<const ProjectedBond> bonds,
                                    const Tensor& p_left, const Tensor& p_right, const std::string& link_leg,
                                    std::string* link = nullptr);

/// Single-bond form; the endpoint with the lower id is the left side.
TensorNetwork insert_projector_pair(const TensorNetwork& tn, const std::string& bond, const Tensor& p_left,
                                    const Tensor& p_right, const std::string& link_leg);

}  // namespace actn
