#include <gtest/gtest.h>

#include <cmath>

#include "actn/circuit.hpp"
#include "actn/contraction.hpp"
#include "actn/error.hpp"
#include "actn/quadrature.hpp"
#include "oracles.hpp"

using namespace actn;

namespace {

/// ((f1 f2 + f3) f4 + f5) f6 with each f_i on its own variable, integrated
/// with the uniform rule.
TensorNetwork nested_tree(const std::vector<std::vector<double>>& f, const QuadratureRule& r) {
  TensorNetwork tn;
  auto fn = [&](int i, const std::string& ctl) {
    auto t = function_tensor(f[i], true, "x" + std::to_string(i), ctl);
    return integrate_leg(t, "x" + std::to_string(i), r);
  };
  tn.add(fn(0, "c0"));
  tn.add(fn(1, "c1"));
  tn.add(mul_tensor("c0", "c1", "m01"));
  tn.add(fn(2, "c2"));
  tn.add(add_tensor("m01", "c2", "s1"));
  tn.add(fn(3, "c3"));
  tn.add(mul_tensor("s1", "c3", "m2"));
  tn.add(fn(4, "c4"));
  tn.add(add_tensor("m2", "c4", "s2"));
  tn.add(fn(5, "c5"));
  tn.add(mul_tensor("s2", "c5", "out"));
  tn.add(Tensor::unit("out", 2, 1));
  return tn;
}

}  // namespace

TEST(ContractExact, NestedTreeMatchesBruteForce) {
  const std::size_t g = 4;
  auto r = uniform_rule(g);
  std::vector<std::vector<double>> f;
  for (int i = 0; i < 6; ++i) f.push_back(oracle::random_vector(g, 100 + i));
  const double ref = oracle::grid_sum(6, g, [&](const std::vector<std::size_t>& x) {
    double w = 1.0;
    for (auto p : x) w *= r.weights[p];
    return w * (((f[0][x[0]] * f[1][x[1]] + f[2][x[2]]) * f[3][x[3]] + f[4][x[4]]) * f[5][x[5]]);
  });
  auto rep = contract_exact(nested_tree(f, r));
  EXPECT_LE(oracle::rel(rep.value(), ref), 1e-12);
}

TEST(ContractExact, SingleScalar) {
  TensorNetwork tn;
  tn.add(Tensor::scalar(-2.5));
  auto rep = contract_exact(tn);
  EXPECT_EQ(rep.value_sign, -1);
  EXPECT_NEAR(rep.value(), -2.5, 1e-15);
}

TEST(ContractExact, NanIsNotZero) {
  TensorNetwork tn;
  tn.add(Tensor::scalar(std::nan("")));
  tn.add(Tensor::scalar(3.0));
  EXPECT_TRUE(std::isnan(contract_exact(tn).value()));
}

TEST(ContractExact, ProductOfSumsOverTwoVariables) {
  // (f1(x)+g1(y))(f2(x)+g2(y)) on G=5.
  const std::size_t g = 5;
  auto r = uniform_rule(g);
  const auto f1 = oracle::random_vector(g, 1), g1 = oracle::random_vector(g, 2);
  const auto f2 = oracle::random_vector(g, 3), g2 = oracle::random_vector(g, 4);
  TensorNetwork tn;
  const std::vector<std::string> cx{"x", "x1", "x2"}, cy{"y", "y1", "y2"};
  tn.add(copy_tensor(g, cx));
  tn.add(copy_tensor(g, cy));
  tn.add(Tensor::vector("x", r.weights));
  tn.add(Tensor::vector("y", r.weights));
  tn.add(function_tensor(f1, true, "x1", "a1"));
  tn.add(function_tensor(g1, true, "y1", "b1"));
  tn.add(add_tensor("a1", "b1", "s1"));
  tn.add(function_tensor(f2, true, "x2", "a2"));
  tn.add(function_tensor(g2, true, "y2", "b2"));
  tn.add(add_tensor("a2", "b2", "s2"));
  tn.add(Tensor::unit("s1", 2, 1));
  tn.add(Tensor::unit("s2", 2, 1));
  const double ref = oracle::grid_sum(2, g, [&](const std::vector<std::size_t>& x) {
    return r.weights[x[0]] * r.weights[x[1]] * (f1[x[0]] + g1[x[1]]) * (f2[x[0]] + g2[x[1]]);
  });
  EXPECT_LE(oracle::rel(contract_exact(tn).value(), ref), 1e-12);
}

TEST(ContractExact, OpenLegsRejected) {
  TensorNetwork tn;
  tn.add(Tensor::vector("x", {1, 2}));
  EXPECT_THROW(contract_exact(tn), DimensionError);
}

TEST(ContractExact, DisconnectedComponentsMultiply) {
  TensorNetwork tn;
  tn.add(Tensor::vector("a", {1, 2}));
  tn.add(Tensor::vector("a", {3, 4}));
  tn.add(Tensor::vector("b", {1, 1}));
  tn.add(Tensor::vector("b", {-1, 0.5}));
  EXPECT_NEAR(contract_exact(tn).value(), 11.0 * -0.5, 1e-14);
}

TEST(ContractExact, ZeroValue) {
  TensorNetwork tn;
  tn.add(Tensor::vector("a", {1, 0}));
  tn.add(Tensor::vector("a", {0, 4}));
  auto rep = contract_exact(tn);
  EXPECT_EQ(rep.value_sign, 0);
  EXPECT_EQ(rep.value(), 0.0);
}

TEST(ContractExact, PathIndependenceUnderShuffledTies) {
  const std::size_t g = 4;
  auto r = uniform_rule(g);
  std::vector<std::vector<double>> f;
  for (int i = 0; i < 6; ++i) f.push_back(oracle::random_vector(g, 200 + i));
  const auto tn = nested_tree(f, r);
  const double base = contract_exact(tn).value();
  for (std::uint64_t s = 0; s < 10; ++s) {
    ExactOptions opt;
    opt.shuffle_seed = s;
    EXPECT_LE(oracle::rel(contract_exact(tn, opt).value(), base), 1e-12);
  }
}

TEST(ContractExact, LogScaleTracksTensorScaling) {
  const std::size_t g = 4;
  auto r = uniform_rule(g);
  std::vector<std::vector<double>> f;
  for (int i = 0; i < 6; ++i) f.push_back(oracle::random_vector(g, 300 + i));
  auto tn = nested_tree(f, r);
  const auto base = contract_exact(tn);
  for (std::size_t id = 0; id < tn.size(); ++id) {
    auto scaled = tn;
    scaled.replace(id, tn.tensor(id).scaled(1e6));
    const auto rep = contract_exact(scaled);
    EXPECT_EQ(rep.value_sign, base.value_sign);
    EXPECT_NEAR(rep.value_log - base.value_log, std::log(1e6), 1e-12);
  }
}

TEST(ContractExact, NetworkScaleFactorApplied) {
  TensorNetwork tn;
  tn.add(Tensor::vector("a", {1, 2}));
  tn.add(Tensor::vector("a", {3, 4}));
  tn.scale(-1e300);
  tn.scale(1e300);
  auto rep = contract_exact(tn);
  EXPECT_EQ(rep.value_sign, -1);
  EXPECT_NEAR(rep.value_log, std::log(11.0) + 2 * std::log(1e300), 1e-12);
}

TEST(RelativeError, LogSpaceComparison) {
  ContractionReport a, b;
  a.value_sign = b.value_sign = 1;
  a.value_log = 1000.0 + std::log1p(1e-9);
  b.value_log = 1000.0;
  // 1000 + log1p(1e-9) keeps only ~1e-13 absolute precision.
  EXPECT_NEAR(relative_error(a, b), 1e-9, 1e-12);
  a.value_sign = -1;
  EXPECT_NEAR(relative_error(a, b), 2.0, 1e-8);
  b.value_log = 1.5;
  EXPECT_EQ(relative_error(b, 0.0), std::exp(1.5));
}

TEST(InsertProjector, ResolutionOfIdentityKeepsValue) {
  const auto a = oracle::random_vector(9, 1), b = oracle::random_vector(9, 2);
  TensorNetwork tn;
  tn.add(Tensor({{"i", 3}, {"bond", 3}}, a));
  tn.add(Tensor({{"bond", 3}, {"i", 3}}, b));
  const double base = contract_exact(tn).value();
  // P_L P_R = identity through a random orthogonal 3 x 3 matrix and its transpose.
  const double c = std::cos(0.7), s = std::sin(0.7);
  Tensor pl({{"bond", 3}, {"link", 3}}, {c, -s, 0, s, c, 0, 0, 0, 1});
  Tensor pr({{"link", 3}, {"bond", 3}}, {c, s, 0, -s, c, 0, 0, 0, 1});
  auto with = insert_projector_pair(tn, "bond", pl, pr, "link");
  EXPECT_EQ(with.size(), 4u);
  EXPECT_LE(oracle::rel(contract_exact(with).value(), base), 1e-13);
}

TEST(InsertProjector, DimMismatchRejected) {
  TensorNetwork tn;
  tn.add(Tensor::vector("bond", {1, 2}));
  tn.add(Tensor::vector("bond", {3, 4}));
  Tensor pl({{"bond", 3}, {"link", 1}}, {1, 0, 0});
  Tensor pr({{"link", 1}, {"bond", 3}}, {1, 0, 0});
  EXPECT_THROW(insert_projector_pair(tn, "bond", pl, pr, "link"), DimensionError);
}

TEST(Network, ThirdUseOfLegRejected) {
  TensorNetwork tn;
  tn.add(Tensor::vector("a", {1, 2}));
  tn.add(Tensor::vector("a", {1, 2}));
  EXPECT_THROW(tn.add(Tensor::vector("a", {1, 2})), DimensionError);
}

TEST(Network, UnequalBondDimsRejected) {
  TensorNetwork tn;
  tn.add(Tensor::vector("a", {1, 2}));
  EXPECT_THROW(tn.add(Tensor::vector("a", {1, 2, 3})), DimensionError);
}
