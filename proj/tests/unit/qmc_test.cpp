#include <gtest/gtest.h>

#include <boost/random/sobol.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "actn/error.hpp"
#include "actn/qmc.hpp"
#include "actn/random.hpp"
#include "actn/sobol.hpp"

using namespace actn;

TEST(Sobol, FirstPointsInOneDimension) {
  const auto p = sobol_points(1, 1, 3);
  EXPECT_EQ(p, (std::vector<double>{0.5, 0.75, 0.25}));
}

TEST(Sobol, FirstPointInTwoDimensions) { EXPECT_EQ(sobol_points(2, 1, 1), (std::vector<double>{0.5, 0.5})); }

TEST(Sobol, MatchesBoostReference) {
  // boost's engine starts at index 1 and uses the same direction numbers.
  const std::size_t dim = SobolSequence::max_dim, count = 1000;
  boost::random::sobol_engine<std::uint32_t, 32> ref(dim);
  const auto pts = sobol_points(dim, 1, count);
  for (std::size_t i = 0; i < count * dim; ++i)
    ASSERT_EQ(pts[i], static_cast<double>(ref()) * 0x1.0p-32) << "point " << i / dim << " dim " << i % dim;
}

TEST(Sobol, RangeAndDeterminism) {
  const auto a = sobol_points(50, 17, 5000);
  const auto b = sobol_points(50, 17, 5000);
  EXPECT_EQ(a, b);
  for (double x : a) EXPECT_TRUE(x >= 0.0 && x < 1.0);
}

TEST(Sobol, RandomAccessMatchesSequential) {
  SobolSequence s(7);
  const auto batch = s.points(1000, 300);
  std::vector<double> one(7);
  for (std::size_t i = 0; i < 300; i += 37) {
    s.point(1000 + i, one);
    for (std::size_t d = 0; d < 7; ++d) EXPECT_EQ(one[d], batch[i * 7 + d]);
  }
}

TEST(Sobol, DimensionLimits) {
  EXPECT_THROW(SobolSequence(0), SpecError);
  EXPECT_THROW(SobolSequence(SobolSequence::max_dim + 1), SpecError);
  EXPECT_THROW(sobol_points(2, 0, 1), SpecError);
}

TEST(Qmc, ConstantIntegrandGivesVolume) {
  const std::vector<Interval> unit(5, Interval{0.0, 1.0});
  for (std::size_t n : {1, 7, 1000}) {
    QmcOptions opt;
    opt.n_samples = n;
    EXPECT_EQ(qmc_integrate([](std::span<const double>) { return 1.0; }, unit, opt).value(), 1.0);
  }
  const std::vector<Interval> box{{-1.0, 1.0}, {0.0, 3.0}};
  QmcOptions opt;
  opt.n_samples = 100;
  EXPECT_DOUBLE_EQ(qmc_integrate([](std::span<const double>) { return 1.0; }, box, opt).value(), 6.0);
}

TEST(Qmc, SeparableSineProduct) {
  const std::vector<Interval> unit(10, Interval{0.0, 1.0});
  QmcOptions opt;
  opt.n_samples = 1 << 20;
  auto f = [](std::span<const double> x) {
    double v = 1.0;
    for (double xi : x) v *= std::sin(2.0 * std::numbers::pi * xi) + 0.5;
    return v;
  };
  EXPECT_LE(std::abs(qmc_integrate(f, unit, opt).value() - std::pow(0.5, 10)), 1e-4);
}

TEST(Qmc, ThreadCountDoesNotChangeResult) {
  const std::vector<Interval> unit(3, Interval{0.0, 1.0});
  auto f = [](std::span<const double> x) { return std::exp(x[0] - x[1] * x[2]); };
  QmcOptions a;
  a.n_samples = 100'000;
  a.batch = 30'000;
  QmcOptions b = a;
  b.threads = 3;
  EXPECT_EQ(qmc_integrate(f, unit, a).log_abs_value, qmc_integrate(f, unit, b).log_abs_value);
}

TEST(Qmc, ReportCadence) {
  const std::vector<Interval> unit(2, Interval{0.0, 1.0});
  QmcOptions opt;
  opt.n_samples = 10'500;
  opt.batch = 1000;
  opt.report_every = 4;
  std::vector<std::size_t> seen;
  opt.on_report = [&](const QmcEstimate& e) { seen.push_back(e.n_samples); };
  qmc_integrate([](std::span<const double> x) { return x[0]; }, unit, opt);
  EXPECT_EQ(seen, (std::vector<std::size_t>{4000, 8000, 10'500}));
}

TEST(Qmc, LogModeMatchesLinearMode) {
  const std::vector<Interval> box(4, Interval{-1.0, 1.0});
  auto logf = [](std::span<const double> x) { return -(x[0] * x[1] + 0.5 * x[2] * x[2] - x[3] * x[0]); };
  QmcOptions opt;
  opt.n_samples = 50'000;
  const auto lin = qmc_integrate([&](std::span<const double> x) { return std::exp(logf(x)); }, box, opt);
  const auto log = qmc_integrate_log(logf, box, opt);
  EXPECT_NEAR(log.log_abs_value, lin.log_abs_value, 1e-12);
}

TEST(Qmc, LogModeSurvivesOverflow) {
  const std::vector<Interval> box(2, Interval{0.0, 1.0});
  QmcOptions opt;
  opt.n_samples = 4096;
  const auto e = qmc_integrate_log([](std::span<const double> x) { return 1000.0 + x[0]; }, box, opt);
  const auto shifted = qmc_integrate([](std::span<const double> x) { return std::exp(x[0]); }, box, opt);
  EXPECT_TRUE(std::isfinite(e.log_abs_value));
  EXPECT_NEAR(e.log_abs_value, 1000.0 + shifted.log_abs_value, 1e-10);
}

TEST(LogSumExp, MatchesExtendedPrecision) {
  CounterRng rng(11);
  LogSumExp acc;
  std::vector<double> logs;
  for (std::size_t i = 0; i < 10'000; ++i) logs.push_back(rng.uniform(i, -300.0, 300.0));
  for (double l : logs) acc.add(l);
  const double top = *std::max_element(logs.begin(), logs.end());
  long double sum = 0.0L;
  for (double l : logs) sum += std::exp(static_cast<long double>(l) - static_cast<long double>(top));
  const double ref = static_cast<double>(static_cast<long double>(top) + std::log(sum));
  EXPECT_LE(std::abs(acc.log_sum() - ref), 1e-10 * std::abs(ref));
}

TEST(Qmc, BeatsPseudorandomOnSmoothFunctions) {
  // 2^12 points, dims 1..3, ten separable smooth functions.
  const std::size_t n = 1 << 12;
  for (std::size_t dim = 1; dim <= 3; ++dim) {
    std::vector<double> qmc_err, mc_err;
    const std::vector<Interval> unit(dim, Interval{0.0, 1.0});
    for (int f = 1; f <= 10; ++f) {
      const double a = 0.3 * f;
      auto fn = [&](std::span<const double> x) {
        double v = 1.0;
        for (double xi : x) v *= std::exp(a * xi);
        return v;
      };
      const double exact = std::pow((std::exp(a) - 1.0) / a, static_cast<double>(dim));
      QmcOptions opt;
      opt.n_samples = n;
      qmc_err.push_back(std::abs(qmc_integrate(fn, unit, opt).value() - exact));
      CounterRng rng(100 + f);
      double s = 0.0;
      std::vector<double> x(dim);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t d = 0; d < dim; ++d) x[d] = rng.uniform(i * dim + d);
        s += fn(x);
      }
      mc_err.push_back(std::abs(s / static_cast<double>(n) - exact));
    }
    std::sort(qmc_err.begin(), qmc_err.end());
    std::sort(mc_err.begin(), mc_err.end());
    EXPECT_LT(qmc_err[5] + qmc_err[4], mc_err[5] + mc_err[4]) << "dim " << dim;
  }
}
