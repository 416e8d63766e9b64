#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace actn {

/// A named tensor index. Legs with the same name on two tensors are summed
/// over when the tensors are contracted.
struct Leg {
  std::string name;
  std::size_t dim = 1;

  friend bool operator==(const Leg&, const Leg&) = default;
};

/// Dense real tensor with named legs, stored row-major over the leg order
/// (the last leg varies fastest). A rank-0 tensor holds one scalar.
class Tensor {
 public:
  /// Rank-0 tensor holding 0.
  Tensor();
  Tensor(std::vector<Leg> legs, std::vector<double> data);

  static Tensor zeros(std::vector<Leg> legs);
  static Tensor scalar(double value);
  /// Rank-1 tensor on one leg.
  static Tensor vector(std::string leg, std::vector<double> values);
  /// Rank-1 tensor that is 1 at `index` and 0 elsewhere.
  static Tensor unit(std::string leg, std::size_t dim, std::size_t index);

  std::size_t rank() const noexcept { return legs_.size(); }
  std::size_t size() const noexcept { return data_.size(); }
  const std::vector<Leg>& legs() const noexcept { return legs_; }
  const Leg& leg(std::size_t axis) const { return legs_.at(axis); }

  bool has_leg(std::string_view name) const noexcept;
  /// Axis position of the named leg; throws DimensionError if absent.
  std::size_t axis(std::string_view name) const;
  std::size_t dim(std::string_view name) const { return legs_[axis(name)].dim; }
  std::vector<std::size_t> shape() const;

  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }

  double& at(std::span<const std::size_t> index);
  double at(std::span<const std::size_t> index) const;
  double& at(std::initializer_list<std::size_t> index) {
    return at(std::span<const std::size_t>(index.begin(), index.size()));
  }
  double at(std::initializer_list<std::size_t> index) const {
    return at(std::span<const std::size_t>(index.begin(), index.size()));
  }

  /// Value of a rank-0 tensor (or of a tensor whose legs all have dim 1).
  double value() const;

  /// Same data with legs reordered to `order` (a permutation of leg names).
  Tensor permuted(std::span<const std::string> order) const;
  Tensor permuted(std::initializer_list<std::string> order) const {
    return permuted(std::span<const std::string>(order.begin(), order.size()));
  }
  Tensor renamed(std::string_view from, std::string to) const;
  /// Fixes one leg at `index`, removing it.
  Tensor sliced(std::string_view leg, std::size_t index) const;
  /// Inserts a new trailing leg of dimension 1.
  Tensor with_unit_leg(std::string name) const;

  Tensor scaled(double factor) const;
  void scale(double factor) noexcept;

  /// Largest magnitude; NaN if any entry is NaN.
  double max_abs() const noexcept;
  double frobenius_norm() const noexcept;

 private:
  std::vector<Leg> legs_;
  std::vector<double> data_;
};

/// Sums over every leg name shared by `a` and `b`. The result carries a's
/// free legs (in a's order) followed by b's free legs. With no shared legs
/// this is the outer product.
Tensor contract(const Tensor& a, const Tensor& b);

/// Outer product that refuses to run when the operands share a leg name.
Tensor outer(const Tensor& a, const Tensor& b);

/// One output leg of `fuse`: the listed input legs, in order, become `name`.
struct FuseGroup {
  std::string name;
  std::vector<std::string> legs;
};

/// Merges groups of legs into single legs whose dimension is the product of
/// the group's dimensions. Groups must partition the tensor's legs; output
/// legs follow the group order.
Tensor fuse(const Tensor& t, std::span<const FuseGroup> groups);

/// Inverse of `fuse` for one leg: splits `leg` into `parts` in place.
Tensor unfuse(const Tensor& t, std::string_view leg, std::span<const Leg> parts);

struct TruncationSpec {
  std::size_t max_chi = 1;
  /// Singular values below cutoff * (largest singular value) are dropped.
  double cutoff = 0.0;

  void validate() const;
};

/// Which factor of an SVD split receives the singular values.
enum class SingularValuePlacement { symmetric, left, right };

struct SvdSplit {
  Tensor left;   ///< legs: left_legs..., bond
  Tensor right;  ///< legs: bond, remaining legs...
  std::vector<double> singular_values;  ///< kept values, descending
  /// sqrt(sum of discarded s^2) / ||t||_F
  double discarded_weight = 0.0;
};

/// Splits `t` across the bipartition (left_legs | rest) with a truncated SVD.
/// The new bond keeps at most spec.max_chi values; ties at the truncation
/// boundary are resolved by original index.
SvdSplit svd_split(const Tensor& t, std::span<const std::string> left_legs, const TruncationSpec& spec,
                   const std::string& bond = "bond",
                   SingularValuePlacement placement = SingularValuePlacement::symmetric);

}  // namespace actn
