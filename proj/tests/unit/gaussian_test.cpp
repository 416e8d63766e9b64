#include <gtest/gtest.h>

#include <cmath>

#include "actn/boundary.hpp"
#include "actn/gaussian.hpp"
#include "oracles.hpp"

using namespace actn;

namespace {

double gauss_oracle(const GaussianSpec& s) {
  return oracle::grid_sum(s.n, s.grid, [&](const std::vector<std::size_t>& x) {
    double e = 0.0, w = 1.0;
    for (std::size_t i = 0; i < s.n; ++i) {
      w *= s.rule.weights[x[i]];
      for (std::size_t j = 0; j < s.n; ++j) e += s.a[i * s.n + j] * s.rule.nodes[x[i]] * s.rule.nodes[x[j]];
    }
    return w * std::exp(-e);
  });
}

}  // namespace

TEST(BandedA, BandStructure) {
  auto s = make_banded_A(7, 2, 3, 0.0, 1);
  for (std::size_t i = 0; i < 7; ++i)
    for (std::size_t j = 0; j < 7; ++j) {
      const std::size_t d = i > j ? i - j : j - i;
      if (d > 2) EXPECT_EQ(s.at(i, j), 0.0);
      EXPECT_LE(std::abs(s.at(i, j)), 1.0);
    }
  EXPECT_EQ(build_gaussian_tn(s).bandwidth(), 2u);
}

TEST(BandedA, DiagonalWhenWidthZero) {
  auto s = make_banded_A(5, 0, 3, 0.0, 2);
  EXPECT_TRUE(build_gaussian_tn(s).couplings.empty());
}

TEST(BandedA, DenseWhenWidthCoversMatrix) {
  auto s = make_banded_A(5, 4, 3, 0.0, 3);
  for (double v : s.a) EXPECT_NE(v, 0.0);
}

TEST(BandedA, OffBandScaledByDelta) {
  auto base = make_banded_A(6, 1, 3, 1.0, 4);
  auto pert = make_banded_A(6, 1, 3, 0.05, 4);
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j) {
      const std::size_t d = i > j ? i - j : j - i;
      EXPECT_DOUBLE_EQ(pert.at(i, j), d <= 1 ? base.at(i, j) : 0.05 * base.at(i, j));
    }
}

TEST(GaussianTn, DiagonalIsProductOfOneDimensionalIntegrals) {
  auto s = make_banded_A(4, 0, 6, 0.0, 5);
  double ref = 1.0;
  for (std::size_t i = 0; i < 4; ++i) ref *= s.rule.integrate([&](double x) { return std::exp(-s.at(i, i) * x * x); });
  EXPECT_LE(oracle::rel(contract_exact(build_gaussian_tn(s).to_network()).value(), ref), 1e-13);
}

TEST(GaussianTn, WidthTwoMatchesBruteForce) {
  auto s = make_banded_A(4, 2, 4, 0.0, 6);
  const double ref = gauss_oracle(s);
  EXPECT_LE(oracle::rel(contract_exact(build_gaussian_tn(s).to_network()).value(), ref), 1e-12);
  EXPECT_LE(oracle::rel(brute_force_integral(s), ref), 1e-13);
}

TEST(GaussianTn, ZeroMatrixGivesVolume) {
  auto s = make_banded_A(7, 0, 3, 0.0, 7);
  std::fill(s.a.begin(), s.a.end(), 0.0);
  EXPECT_NEAR(boundary_contract_banded(build_gaussian_tn(s), {1, 0.0}).value(), 128.0, 1e-12);
}

TEST(GaussianTn, OnlySymmetricPartMatters) {
  auto s = make_banded_A(5, 2, 4, 0.1, 8);
  auto sym = s;
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j) sym.a[i * 5 + j] = 0.5 * (s.at(i, j) + s.at(j, i));
  const double a = contract_exact(build_gaussian_tn(s).to_network()).value();
  const double b = contract_exact(build_gaussian_tn(sym).to_network()).value();
  EXPECT_LE(oracle::rel(a, b), 1e-12);
}

TEST(GaussianTn, WeightsOnDiagonalFactorsOnly) {
  // Pins the weight placement: a single coupled pair against a hand sum.
  auto s = make_banded_A(2, 1, 3, 0.0, 9);
  auto tn = build_gaussian_tn(s);
  double ref = 0.0;
  for (std::size_t p = 0; p < 3; ++p)
    for (std::size_t q = 0; q < 3; ++q) {
      const double x = s.rule.nodes[p], y = s.rule.nodes[q];
      ref += s.rule.weights[p] * s.rule.weights[q] *
             std::exp(-(s.at(0, 0) * x * x + (s.at(0, 1) + s.at(1, 0)) * x * y + s.at(1, 1) * y * y));
    }
  EXPECT_LE(oracle::rel(boundary_contract_banded(tn, {3, 0.0}).value(), ref), 1e-14);
  for (std::size_t p = 0; p < 3; ++p)
    EXPECT_DOUBLE_EQ(tn.diagonal[0][p], s.rule.weights[p] * std::exp(-s.at(0, 0) * s.rule.nodes[p] * s.rule.nodes[p]));
}

TEST(GaussianTn, OracleEquivalenceSmallInstances) {
  for (std::size_t n = 1; n <= 5; ++n)
    for (std::size_t w = 0; w <= 2; ++w)
      for (std::uint64_t seed = 0; seed < 3; ++seed) {
        auto s = make_banded_A(n, w, 5, 0.0, seed * 31 + n * 7 + w);
        const double ref = gauss_oracle(s);
        EXPECT_LE(oracle::rel(boundary_contract_banded(build_gaussian_tn(s), {125, 0.0}).value(), ref), 1e-11);
      }
}
