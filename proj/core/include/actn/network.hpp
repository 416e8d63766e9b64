#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "actn/tensor.hpp"

namespace actn {

/// A multigraph of tensors. A leg name that appears on two tensors is a bond;
/// a name that appears once is an open leg. The represented value is
/// sign * exp(log_scale) * (raw contraction of the stored tensors).
class TensorNetwork {
 public:
  /// Adds a tensor and returns its id. Throws DimensionError if a leg name
  /// would appear on a third tensor or a bond would join unequal dims.
  std::size_t add(Tensor t);

  /// Replaces tensor `id` in place, with the same checks as add().
  void replace(std::size_t id, Tensor t);

  std::size_t size() const noexcept { return tensors_.size(); }
  const std::vector<Tensor>& tensors() const noexcept { return tensors_; }
  const Tensor& tensor(std::size_t id) const { return tensors_.at(id); }

  std::vector<Leg> open_legs() const;
  std::vector<std::string> bonds() const;
  /// Ids of the tensors carrying `leg` (one for an open leg, two for a bond).
  std::vector<std::size_t> endpoints(const std::string& leg) const;

  /// Multiplies the represented value by `factor` without touching tensors.
  void scale(double factor);
  double log_scale() const noexcept { return log_scale_; }
  int sign() const noexcept { return sign_; }
  void set_scale(double log_scale, int sign) noexcept {
    log_scale_ = log_scale;
    sign_ = sign;
  }

  /// A leg name of the form prefix#n not yet used in the network.
  std::string fresh_leg(const std::string& prefix);

 private:
  void check_compatible(const Tensor& t, std::size_t skip) const;

  std::vector<Tensor> tensors_;
  double log_scale_ = 0.0;
  int sign_ = 1;
  std::size_t next_fresh_ = 0;
};

}  // namespace actn
