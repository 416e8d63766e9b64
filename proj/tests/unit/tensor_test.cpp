#include <gtest/gtest.h>

#include <Eigen/Dense>

#include <cmath>

#include "actn/error.hpp"
#include "actn/tensor.hpp"
#include "oracles.hpp"

using namespace actn;

namespace {

Tensor random_tensor(std::vector<Leg> legs, std::uint64_t seed) {
  std::size_t n = 1;
  for (const auto& l : legs) n *= l.dim;
  return Tensor(std::move(legs), oracle::random_vector(n, seed));
}

double max_diff(const Tensor& a, const Tensor& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

}  // namespace

TEST(Tensor, ConstructorRejectsWrongDataLength) {
  EXPECT_THROW(Tensor({{"i", 2}, {"j", 3}}, std::vector<double>(5)), DimensionError);
}

TEST(Tensor, DuplicateLegNamesRejected) {
  EXPECT_THROW(Tensor::zeros({{"i", 2}, {"i", 2}}), DimensionError);
}

TEST(Tensor, IdentityTimesVector) {
  Tensor id({{"i", 2}, {"j", 2}}, {1, 0, 0, 1});
  auto r = contract(id, Tensor::vector("j", {3, 4}));
  ASSERT_EQ(r.legs(), (std::vector<Leg>{{"i", 2}}));
  EXPECT_EQ(r.data()[0], 3.0);
  EXPECT_EQ(r.data()[1], 4.0);
}

TEST(Tensor, OuterProductWithoutSharedLegs) {
  auto r = contract(Tensor::vector("i", {1, 2}), Tensor::vector("j", {3, 4}));
  EXPECT_EQ(std::vector<double>(r.data().begin(), r.data().end()), (std::vector<double>{3, 4, 6, 8}));
}

TEST(Tensor, MatrixProductMatchesTripleLoop) {
  auto a = random_tensor({{"i", 3}, {"j", 4}}, 1);
  auto b = random_tensor({{"j", 4}, {"k", 2}}, 2);
  auto c = contract(a, b);
  auto ref = oracle::matmul({a.data().begin(), a.data().end()}, {b.data().begin(), b.data().end()}, 3, 4, 2);
  for (std::size_t i = 0; i < ref.size(); ++i) EXPECT_NEAR(c.data()[i], ref[i], 1e-14);
}

TEST(Tensor, MismatchedSharedDimThrows) {
  EXPECT_THROW(contract(Tensor::vector("i", {1, 2}), Tensor::vector("i", {1, 2, 3})), DimensionError);
}

TEST(Tensor, OuterRejectsNameCollision) {
  EXPECT_THROW(outer(Tensor::vector("i", {1, 2}), Tensor::vector("i", {1, 2})), DimensionError);
}

TEST(Tensor, ContractIsCommutativeUpToLegOrder) {
  auto a = random_tensor({{"i", 3}, {"s", 4}, {"j", 2}}, 3);
  auto b = random_tensor({{"k", 5}, {"s", 4}}, 4);
  auto ab = contract(a, b);
  auto ba = contract(b, a).permuted({"i", "j", "k"});
  for (std::size_t i = 0; i < ab.size(); ++i) EXPECT_LE(std::abs(ab.data()[i] - ba.data()[i]), 1e-15 * (1 + std::abs(ab.data()[i])));
}

TEST(Tensor, ContractIsAssociativeOnChains) {
  auto a = random_tensor({{"i", 3}, {"x", 4}}, 5);
  auto b = random_tensor({{"x", 4}, {"y", 5}}, 6);
  auto c = random_tensor({{"y", 5}, {"k", 2}}, 7);
  auto left = contract(contract(a, b), c);
  auto right = contract(a, contract(b, c));
  for (std::size_t i = 0; i < left.size(); ++i) EXPECT_NEAR(left.data()[i], right.data()[i], 1e-13 * (1 + std::abs(left.data()[i])));
}

TEST(Tensor, PermuteAndAtAgree) {
  auto t = random_tensor({{"a", 2}, {"b", 3}, {"c", 4}}, 8);
  auto p = t.permuted({"c", "a", "b"});
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 3; ++b)
      for (std::size_t c = 0; c < 4; ++c) EXPECT_EQ(t.at({a, b, c}), p.at({c, a, b}));
}

TEST(Tensor, SlicedFixesOneLeg) {
  auto t = random_tensor({{"a", 2}, {"b", 3}}, 9);
  auto s = t.sliced("a", 1);
  for (std::size_t b = 0; b < 3; ++b) EXPECT_EQ(s.at({b}), t.at({1, b}));
}

TEST(Fuse, RoundTrip) {
  auto t = random_tensor({{"a", 2}, {"b", 3}}, 10);
  const std::vector<FuseGroup> g{{"ab", {"a", "b"}}};
  auto f = fuse(t, g);
  EXPECT_EQ(f.rank(), 1u);
  EXPECT_EQ(f.dim("ab"), 6u);
  const std::vector<Leg> parts{{"a", 2}, {"b", 3}};
  auto u = unfuse(f, "ab", parts);
  EXPECT_EQ(u.legs(), t.legs());
  EXPECT_EQ(max_diff(u, t), 0.0);
}

TEST(Fuse, SingleLegGroupsAreIdentity) {
  auto t = random_tensor({{"a", 2}, {"b", 3}}, 11);
  const std::vector<FuseGroup> g{{"a", {"a"}}, {"b", {"b"}}};
  EXPECT_EQ(max_diff(fuse(t, g), t), 0.0);
}

TEST(Fuse, FusedContractionMatchesUnfused) {
  auto t = random_tensor({{"a", 2}, {"b", 2}, {"c", 2}}, 12);
  auto s = random_tensor({{"a", 2}, {"b", 2}, {"d", 3}}, 13);
  auto direct = contract(t, s);
  const std::vector<FuseGroup> gt{{"ab", {"a", "b"}}, {"c", {"c"}}};
  const std::vector<FuseGroup> gs{{"ab", {"a", "b"}}, {"d", {"d"}}};
  auto fused = contract(fuse(t, gt), fuse(s, gs));
  EXPECT_LE(max_diff(direct, fused), 1e-15);
}

TEST(Fuse, UnknownLegThrows) {
  auto t = random_tensor({{"a", 2}, {"b", 3}}, 14);
  const std::vector<FuseGroup> g{{"ab", {"a", "z"}}};
  EXPECT_THROW(fuse(t, g), DimensionError);
}

TEST(SvdSplit, RankOneIsExact) {
  auto t = outer(Tensor::vector("i", {1, 2}), Tensor::vector("j", {3, 4}));
  const std::vector<std::string> left{"i"};
  auto s = svd_split(t, left, {1, 0.0});
  EXPECT_LE(s.discarded_weight, 1e-15);
  EXPECT_LE(max_diff(contract(s.left, s.right), t), 1e-14);
}

TEST(SvdSplit, IdentityTruncation) {
  std::vector<double> id(16, 0.0);
  for (int i = 0; i < 4; ++i) id[i * 5] = 1.0;
  Tensor t({{"i", 4}, {"j", 4}}, id);
  const std::vector<std::string> left{"i"};
  EXPECT_NEAR(svd_split(t, left, {4, 0.0}).discarded_weight, 0.0, 1e-15);
  auto half = svd_split(t, left, {2, 0.0});
  EXPECT_EQ(half.left.dim("bond"), 2u);
  EXPECT_NEAR(half.discarded_weight, std::sqrt(2.0) / 2.0, 1e-15);
}

TEST(SvdSplit, TruncationErrorMatchesFullSvdTail) {
  auto t = random_tensor({{"i", 6}, {"j", 6}}, 15);
  const std::vector<std::string> left{"i"};
  auto s = svd_split(t, left, {3, 0.0});
  auto approx = contract(s.left, s.right);
  double err = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) err += std::pow(t.data()[i] - approx.data()[i], 2);
  err = std::sqrt(err);

  Eigen::Map<const Eigen::Matrix<double, 6, 6, Eigen::RowMajor>> m(t.data().data());
  Eigen::JacobiSVD<Eigen::MatrixXd> full(m);
  const auto sv = full.singularValues();
  const double tail = std::sqrt(sv.tail(3).squaredNorm());
  EXPECT_NEAR(err, tail, 1e-12);
  EXPECT_NEAR(s.discarded_weight, tail / sv.norm(), 1e-12);
}

TEST(SvdSplit, FullRankReconstructs) {
  auto t = random_tensor({{"a", 3}, {"b", 4}, {"c", 5}}, 16);
  const std::vector<std::string> left{"a", "c"};
  auto s = svd_split(t, left, {100, 0.0});
  auto back = contract(s.left, s.right).permuted({"a", "b", "c"});
  EXPECT_LE(max_diff(back, t) / t.frobenius_norm(), 1e-12);
}

TEST(SvdSplit, DiscardedWeightNonincreasingInChi) {
  auto t = random_tensor({{"i", 8}, {"j", 7}}, 17);
  const std::vector<std::string> left{"i"};
  double prev = 2.0;
  for (std::size_t chi = 1; chi <= 8; ++chi) {
    const double w = svd_split(t, left, {chi, 0.0}).discarded_weight;
    EXPECT_LE(w, prev + 1e-15);
    prev = w;
  }
}

TEST(SvdSplit, ZeroTensorGivesZeroFactors) {
  auto t = Tensor::zeros({{"i", 3}, {"j", 3}});
  const std::vector<std::string> left{"i"};
  auto s = svd_split(t, left, {2, 0.0});
  EXPECT_EQ(s.left.dim("bond"), 1u);
  EXPECT_LE(s.discarded_weight, 1e-15);
  EXPECT_EQ(s.left.max_abs(), 0.0);
}

TEST(SvdSplit, DegenerateValuesKeepExactlyMaxChi) {
  std::vector<double> id(9, 0.0);
  for (int i = 0; i < 3; ++i) id[i * 4] = 1.0;
  Tensor t({{"i", 3}, {"j", 3}}, id);
  const std::vector<std::string> left{"i"};
  EXPECT_EQ(svd_split(t, left, {2, 0.0}).singular_values.size(), 2u);
}

TEST(SvdSplit, CutoffDropsSmallValues) {
  Tensor t({{"i", 2}, {"j", 2}}, {1, 0, 0, 1e-9});
  const std::vector<std::string> left{"i"};
  EXPECT_EQ(svd_split(t, left, {2, 1e-6}).singular_values.size(), 1u);
}

TEST(SvdSplit, InvalidSpecsRejected) {
  auto t = random_tensor({{"i", 2}, {"j", 2}}, 18);
  const std::vector<std::string> left{"i"};
  EXPECT_THROW(svd_split(t, left, {0, 0.0}), Error);
  EXPECT_THROW(svd_split(t, left, {2, 1.0}), Error);
  const std::vector<std::string> all{"i", "j"};
  EXPECT_THROW(svd_split(t, all, {2, 0.0}), Error);
}

TEST(Tensor, MaxAbsPropagatesNan) {
  Tensor t({{"a", 3}}, {1.0, std::nan(""), -2.0});
  EXPECT_TRUE(std::isnan(t.max_abs()));
  EXPECT_EQ(Tensor({{"a", 2}}, {1.0, -2.0}).max_abs(), 2.0);
}
