#include "actn/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "actn/error.hpp"
#include "linalg.hpp"

namespace actn {

namespace {

std::size_t product_of_dims(const std::vector<Leg>& legs) {
  std::size_t n = 1;
  for (const auto& leg : legs) n *= leg.dim;
  return n;
}

void check_legs(const std::vector<Leg>& legs) {
  std::unordered_set<std::string_view> seen;
  for (const auto& leg : legs) {
    if (leg.dim == 0) throw DimensionError("leg '" + leg.name + "' has dimension 0");
    if (!seen.insert(leg.name).second) throw DimensionError("duplicate leg name '" + leg.name + "'");
  }
}

std::vector<std::size_t> strides_of(const std::vector<Leg>& legs) {
  std::vector<std::size_t> strides(legs.size());
  std::size_t stride = 1;
  for (std::size_t i = legs.size(); i-- > 0;) {
    strides[i] = stride;
    stride *= legs[i].dim;
  }
  return strides;
}

// out[multi-index over out order] = in[permuted multi-index]; perm[k] is the
// input axis that becomes output axis k.
std::vector<double> permute_data(const std::vector<Leg>& in_legs, std::span<const double> in,
                                 std::span<const std::size_t> perm) {
  const std::size_t rank = in_legs.size();
  std::vector<double> out(in.size());
  if (rank == 0 || in.empty()) {
    std::copy(in.begin(), in.end(), out.begin());
    return out;
  }
  const auto in_strides = strides_of(in_legs);
  std::vector<std::size_t> dims(rank), strides(rank);
  for (std::size_t k = 0; k < rank; ++k) {
    dims[k] = in_legs[perm[k]].dim;
    strides[k] = in_strides[perm[k]];
  }
  // Innermost output axis handled as a strided copy.
  const std::size_t inner_dim = dims[rank - 1];
  const std::size_t inner_stride = strides[rank - 1];
  std::vector<std::size_t> counter(rank, 0);
  std::size_t src = 0;
  for (std::size_t dst = 0; dst < out.size(); dst += inner_dim) {
    for (std::size_t i = 0; i < inner_dim; ++i) out[dst + i] = in[src + i * inner_stride];
    for (std::size_t k = rank - 1; k-- > 0;) {
      if (++counter[k] < dims[k]) {
        src += strides[k];
        break;
      }
      src -= strides[k] * (dims[k] - 1);
      counter[k] = 0;
    }
  }
  return out;
}

bool is_identity(std::span<const std::size_t> perm) {
  for (std::size_t i = 0; i < perm.size(); ++i)
    if (perm[i] != i) return false;
  return true;
}

}  // namespace

Tensor::Tensor() : data_(1, 0.0) {}

Tensor::Tensor(std::vector<Leg> legs, std::vector<double> data) : legs_(std::move(legs)), data_(std::move(data)) {
  check_legs(legs_);
  if (data_.size() != product_of_dims(legs_))
    throw DimensionError("tensor data length " + std::to_string(data_.size()) + " does not match leg dims (" +
                         std::to_string(product_of_dims(legs_)) + ")");
}

Tensor Tensor::zeros(std::vector<Leg> legs) {
  const auto n = product_of_dims(legs);
  return Tensor(std::move(legs), std::vector<double>(n, 0.0));
}

Tensor Tensor::scalar(double value) { return Tensor({}, {value}); }

Tensor Tensor::vector(std::string leg, std::vector<double> values) {
  const auto n = values.size();
  return Tensor({{std::move(leg), n}}, std::move(values));
}

Tensor Tensor::unit(std::string leg, std::size_t dim, std::size_t index) {
  if (index >= dim) throw DimensionError("unit vector index out of range");
  std::vector<double> v(dim, 0.0);
  v[index] = 1.0;
  return Tensor({{std::move(leg), dim}}, std::move(v));
}

bool Tensor::has_leg(std::string_view name) const noexcept {
  return std::any_of(legs_.begin(), legs_.end(), [&](const Leg& l) { return l.name == name; });
}

std::size_t Tensor::axis(std::string_view name) const {
  for (std::size_t i = 0; i < legs_.size(); ++i)
    if (legs_[i].name == name) return i;
  throw DimensionError("tensor has no leg '" + std::string(name) + "'");
}

std::vector<std::size_t> Tensor::shape() const {
  std::vector<std::size_t> s;
  s.reserve(legs_.size());
  for (const auto& l : legs_) s.push_back(l.dim);
  return s;
}

double& Tensor::at(std::span<const std::size_t> index) {
  if (index.size() != legs_.size()) throw DimensionError("index rank mismatch");
  std::size_t off = 0;
  for (std::size_t i = 0; i < legs_.size(); ++i) {
    if (index[i] >= legs_[i].dim) throw DimensionError("index out of range on leg '" + legs_[i].name + "'");
    off = off * legs_[i].dim + index[i];
  }
  return data_[off];
}

double Tensor::at(std::span<const std::size_t> index) const { return const_cast<Tensor&>(*this).at(index); }

double Tensor::value() const {
  if (data_.size() != 1) throw DimensionError("value() called on a tensor with " + std::to_string(size()) + " entries");
  return data_[0];
}

Tensor Tensor::permuted(std::span<const std::string> order) const {
  if (order.size() != legs_.size()) throw DimensionError("permutation has wrong number of legs");
  std::vector<std::size_t> perm(order.size());
  std::vector<Leg> legs(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    perm[k] = axis(order[k]);
    legs[k] = legs_[perm[k]];
  }
  if (is_identity(perm)) return *this;
  return Tensor(std::move(legs), permute_data(legs_, data_, perm));
}

Tensor Tensor::renamed(std::string_view from, std::string to) const {
  Tensor out = *this;
  out.legs_[axis(from)].name = std::move(to);
  check_legs(out.legs_);
  return out;
}

Tensor Tensor::sliced(std::string_view leg, std::size_t index) const {
  const std::size_t ax = axis(leg);
  if (index >= legs_[ax].dim) throw DimensionError("slice index out of range on leg '" + std::string(leg) + "'");
  std::size_t outer_n = 1, inner_n = 1;
  for (std::size_t i = 0; i < ax; ++i) outer_n *= legs_[i].dim;
  for (std::size_t i = ax + 1; i < legs_.size(); ++i) inner_n *= legs_[i].dim;
  const std::size_t d = legs_[ax].dim;
  std::vector<double> out(outer_n * inner_n);
  for (std::size_t o = 0; o < outer_n; ++o)
    std::copy_n(data_.begin() + static_cast<std::ptrdiff_t>((o * d + index) * inner_n), inner_n,
                out.begin() + static_cast<std::ptrdiff_t>(o * inner_n));
  std::vector<Leg> legs = legs_;
  legs.erase(legs.begin() + static_cast<std::ptrdiff_t>(ax));
  return Tensor(std::move(legs), std::move(out));
}

Tensor Tensor::with_unit_leg(std::string name) const {
  auto legs = legs_;
  legs.push_back({std::move(name), 1});
  return Tensor(std::move(legs), data_);
}

Tensor Tensor::scaled(double factor) const {
  Tensor out = *this;
  out.scale(factor);
  return out;
}

void Tensor::scale(double factor) noexcept {
  for (auto& x : data_) x *= factor;
}

double Tensor::max_abs() const noexcept {
  double m = 0.0;
  for (double x : data_) {
    if (std::isnan(x)) return x;
    m = std::max(m, std::abs(x));
  }
  return m;
}

double Tensor::frobenius_norm() const noexcept {
  double s = 0.0;
  for (double x : data_) s += x * x;
  return std::sqrt(s);
}

Tensor contract(const Tensor& a, const Tensor& b) {
  std::vector<std::string> free_a, shared;
  std::size_t m = 1, k = 1, n = 1;
  for (const auto& leg : a.legs()) {
    if (b.has_leg(leg.name)) {
      if (b.dim(leg.name) != leg.dim)
        throw DimensionError("leg '" + leg.name + "' has dim " + std::to_string(leg.dim) + " vs " +
                             std::to_string(b.dim(leg.name)));
      shared.push_back(leg.name);
      k *= leg.dim;
    } else {
      free_a.push_back(leg.name);
      m *= leg.dim;
    }
  }
  std::vector<std::string> free_b;
  for (const auto& leg : b.legs()) {
    if (!a.has_leg(leg.name)) {
      free_b.push_back(leg.name);
      n *= leg.dim;
    }
  }

  std::vector<std::string> order_a = free_a;
  order_a.insert(order_a.end(), shared.begin(), shared.end());
  std::vector<std::string> order_b = shared;
  order_b.insert(order_b.end(), free_b.begin(), free_b.end());
  const Tensor pa = a.permuted(order_a);
  const Tensor pb = b.permuted(order_b);

  std::vector<Leg> legs;
  for (const auto& name : free_a) legs.push_back({name, a.dim(name)});
  for (const auto& name : free_b) legs.push_back({name, b.dim(name)});

  detail::RowMatrix c = detail::as_matrix(pa, m, k) * detail::as_matrix(pb, k, n);
  return Tensor(std::move(legs), detail::to_vector(c));
}

Tensor outer(const Tensor& a, const Tensor& b) {
  for (const auto& leg : a.legs())
    if (b.has_leg(leg.name)) throw DimensionError("outer product leg-name collision on '" + leg.name + "'");
  return contract(a, b);
}

Tensor fuse(const Tensor& t, std::span<const FuseGroup> groups) {
  std::vector<std::string> order;
  std::vector<Leg> legs;
  for (const auto& g : groups) {
    if (g.legs.empty()) throw DimensionError("fuse group '" + g.name + "' is empty");
    std::size_t d = 1;
    for (const auto& name : g.legs) {
      d *= t.dim(name);
      order.push_back(name);
    }
    legs.push_back({g.name, d});
  }
  if (order.size() != t.rank()) throw DimensionError("fuse groups do not partition the tensor's legs");
  const Tensor p = t.permuted(order);  // throws on duplicates via axis lookups + size check
  std::vector<double> data(p.data().begin(), p.data().end());
  return Tensor(std::move(legs), std::move(data));
}

Tensor unfuse(const Tensor& t, std::string_view leg, std::span<const Leg> parts) {
  const std::size_t ax = t.axis(leg);
  std::size_t d = 1;
  for (const auto& p : parts) d *= p.dim;
  if (d != t.legs()[ax].dim) throw DimensionError("unfuse parts do not multiply to the leg dimension");
  std::vector<Leg> legs;
  for (std::size_t i = 0; i < t.rank(); ++i) {
    if (i == ax)
      legs.insert(legs.end(), parts.begin(), parts.end());
    else
      legs.push_back(t.legs()[i]);
  }
  return Tensor(std::move(legs), std::vector<double>(t.data().begin(), t.data().end()));
}

void TruncationSpec::validate() const {
  if (max_chi < 1) throw SpecError("max_chi must be at least 1");
  if (!(cutoff >= 0.0 && cutoff < 1.0)) throw SpecError("cutoff must lie in [0, 1)");
}

SvdSplit svd_split(const Tensor& t, std::span<const std::string> left_legs, const TruncationSpec& spec,
                   const std::string& bond, SingularValuePlacement placement) {
  spec.validate();
  if (left_legs.empty() || left_legs.size() >= t.rank())
    throw DimensionError("svd_split needs a nonempty proper subset of the legs");
  std::vector<std::string> order(left_legs.begin(), left_legs.end());
  std::vector<Leg> lhs_legs, rhs_legs;
  std::size_t rows = 1, cols = 1;
  for (const auto& name : order) {
    lhs_legs.push_back({name, t.dim(name)});
    rows *= t.dim(name);
  }
  for (const auto& leg : t.legs()) {
    if (std::find(order.begin(), order.end(), leg.name) == order.end()) {
      rhs_legs.push_back(leg);
      cols *= leg.dim;
    }
  }
  if (lhs_legs.size() + rhs_legs.size() != t.rank()) throw DimensionError("svd_split left legs repeat a name");
  for (const auto& leg : rhs_legs) order.push_back(leg.name);
  const Tensor p = t.permuted(order);

  auto svd = detail::truncated_svd(detail::as_matrix(p, rows, cols), spec);
  const auto kept = static_cast<Eigen::Index>(svd.s.size());
  for (Eigen::Index i = 0; i < kept; ++i) {
    const double s = svd.s[static_cast<std::size_t>(i)];
    switch (placement) {
      case SingularValuePlacement::symmetric:
        svd.u.col(i) *= std::sqrt(s);
        svd.vt.row(i) *= std::sqrt(s);
        break;
      case SingularValuePlacement::left:
        svd.u.col(i) *= s;
        break;
      case SingularValuePlacement::right:
        svd.vt.row(i) *= s;
        break;
    }
  }
  lhs_legs.push_back({bond, static_cast<std::size_t>(kept)});
  rhs_legs.insert(rhs_legs.begin(), Leg{bond, static_cast<std::size_t>(kept)});
  SvdSplit out;
  out.left = Tensor(std::move(lhs_legs), detail::to_vector(svd.u));
  out.right = Tensor(std::move(rhs_legs), detail::to_vector(svd.vt));
  out.singular_values = std::move(svd.s);
  out.discarded_weight = svd.discarded_weight;
  return out;
}

namespace detail {

TruncatedSvd truncated_svd(const RowMatrix& m, const TruncationSpec& spec) {
  TruncatedSvd out;
  out.norm = m.norm();
  const Eigen::Index rows = m.rows(), cols = m.cols();
  if (out.norm == 0.0) {
    out.u = RowMatrix::Zero(rows, 1);
    out.vt = RowMatrix::Zero(1, cols);
    out.s = {0.0};
    return out;
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const auto full = static_cast<std::size_t>(sv.size());

  std::vector<std::size_t> idx(full);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return sv[static_cast<Eigen::Index>(a)] > sv[static_cast<Eigen::Index>(b)];
  });

  const double largest = sv[static_cast<Eigen::Index>(idx[0])];
  std::size_t kept = std::min(spec.max_chi, full);
  while (kept > 1 && sv[static_cast<Eigen::Index>(idx[kept - 1])] <= spec.cutoff * largest) --kept;

  double tail = 0.0;
  for (std::size_t i = kept; i < full; ++i) {
    const double s = sv[static_cast<Eigen::Index>(idx[i])];
    tail += s * s;
  }
  out.discarded_weight = std::sqrt(tail) / out.norm;

  const auto kk = static_cast<Eigen::Index>(kept);
  out.u.resize(rows, kk);
  out.vt.resize(kk, cols);
  out.s.resize(kept);
  for (Eigen::Index i = 0; i < kk; ++i) {
    const auto src = static_cast<Eigen::Index>(idx[static_cast<std::size_t>(i)]);
    out.u.col(i) = svd.matrixU().col(src);
    out.vt.row(i) = svd.matrixV().col(src).transpose();
    out.s[static_cast<std::size_t>(i)] = sv[src];
  }
  return out;
}

void thin_qr(const RowMatrix& m, RowMatrix& q, RowMatrix& r) {
  const Eigen::Index k = std::min(m.rows(), m.cols());
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
  q = qr.householderQ() * Eigen::MatrixXd::Identity(m.rows(), k);
  r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
}

}  // namespace detail

}  // namespace actn
