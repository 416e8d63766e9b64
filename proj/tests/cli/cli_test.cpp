#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "actn/circuit.hpp"
#include "actn/contraction.hpp"
#include "actn/quadrature.hpp"
#include "oracles.hpp"
#include "run.hpp"

using namespace actn;
using namespace actn::bench;

namespace {

std::vector<ConvergenceRecord> sweep(const std::string& text) {
  std::vector<ConvergenceRecord> out;
  run(run_config_from(KeyValues::parse(text)), [&](const ConvergenceRecord& r) { out.push_back(r); });
  return out;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
  return cells;
}

/// CSV lines with the elapsed_seconds column blanked.
std::string csv_without_time(const std::vector<ConvergenceRecord>& recs) {
  std::string out = csv_header() + "\n";
  for (const auto& r : recs) {
    auto cells = split(to_csv(r));
    cells[10].clear();
    for (std::size_t i = 0; i < cells.size(); ++i) out += (i ? "," : "") + cells[i];
    out += "\n";
  }
  return out;
}

}  // namespace

TEST(BenchRun, PowerErrorDropsAtChiK) {
  const auto recs = sweep("family=polynomial-power\nN=20\nk=4\nG=10\nchi=1,2,3,4,5,6,7,8,9,10,11,12,13,14,15,16\nseed=7\n");
  ASSERT_EQ(recs.size(), 16u);
  for (const auto& r : recs) {
    EXPECT_EQ(r.method, Method::tn);
    if (r.chi >= 4)
      EXPECT_LE(r.relative_error, 1e-10) << "chi " << r.chi;
    else
      EXPECT_GT(r.relative_error, 1e-10) << "chi " << r.chi;
  }
}

TEST(BenchRun, GaussianAgainstBruteForce) {
  const auto recs = sweep("family=gaussian\nN=4\nW=2\nG=4\nreference=brute-force\nseeds=0,1,2\nchi=16\n");
  ASSERT_EQ(recs.size(), 3u);
  for (const auto& r : recs) EXPECT_LE(r.relative_error, 1e-11);
}

TEST(BenchRun, MeraSingleRecord) {
  const auto recs = sweep("family=mera\nN=8\nG=6\n");
  ASSERT_EQ(recs.size(), 1u);
  EXPECT_NEAR(std::exp(recs[0].estimate_log) / 256.0, 1.0, 1e-10);
  EXPECT_EQ(recs[0].estimate_sign, 1);
}

TEST(BenchRun, RecordsRecomputeTheirError) {
  const auto recs = sweep("family=polynomial-sin\nN=3\nk=2\nc=0.2\nG=4,6\nchi=1,2,4\nn_samples=4096\nreference=converged-tn\n");
  ASSERT_EQ(recs.size(), 8u);
  for (const auto& r : recs) {
    const auto cells = split(to_csv(r));
    const double est = std::stod(cells[7]) * std::exp(std::stod(cells[6]));
    const double ref = std::stod(cells[8]);
    EXPECT_NEAR(std::abs(est - ref) / std::abs(ref), std::stod(cells[9]), 1e-15);
    EXPECT_GE(r.relative_error, 0.0);
  }
  // The reference is the largest chi at the largest G.
  EXPECT_EQ(recs[6].grid, 6u);
  EXPECT_EQ(recs[6].chi, 4u);
  EXPECT_LE(recs[6].relative_error, 1e-15);
  EXPECT_EQ(recs[7].method, Method::qmc);
}

TEST(BenchRun, ReproducibleAndThreadIndependent) {
  const std::string cfg = "family=gaussian\nN=12\nW=2\nG=4\ndelta=0.1\nchi=1,2,4,8\nseeds=1,2\nn_samples=2000\n";
  const auto a = csv_without_time(sweep(cfg));
  EXPECT_EQ(a, csv_without_time(sweep(cfg)));
  EXPECT_EQ(a, csv_without_time(sweep(cfg + "threads=3\n")));
}

TEST(BenchRun, RecursionAndBruteMethods) {
  const auto recs = sweep("family=polynomial-power\nN=4\nk=3\nG=5\nmethods=recursion,brute\n");
  ASSERT_EQ(recs.size(), 2u);
  EXPECT_EQ(recs[0].method, Method::recursion);
  EXPECT_EQ(recs[1].method, Method::brute);
  for (const auto& r : recs) EXPECT_LE(r.relative_error, 1e-12);
}

TEST(BenchRun, ExprFamilyAgainstBruteForce) {
  const auto recs = sweep("family=expr\nexpr=(f(x)+g(y))^2*f(z)\nG=5\nseeds=4,5\nrule=gauss\n");
  ASSERT_EQ(recs.size(), 2u);
  for (const auto& r : recs) EXPECT_LE(r.relative_error, 1e-12);
}

TEST(BenchRun, Refusals) {
  EXPECT_THROW(sweep("family=gaussian\nN=8\nW=1\nG=4\nreference=brute-force\n"), UsageError);
  EXPECT_THROW(sweep("family=mera\nN=4\nG=4\nmethods=qmc\nn_samples=10\n"), UsageError);
  EXPECT_THROW(sweep("family=gaussian\nN=4\nW=1\nG=4\nmethods=recursion\n"), UsageError);
  EXPECT_THROW(sweep("family=gaussian\nN=4\nW=1\nG=4\nreference=analytic\n"), UsageError);
  EXPECT_THROW(sweep("family=polynomial-general\nN=20\nk=2\nG=4\nrule=gauss\nn_samples=10\n"), UsageError);
}

TEST(RunConfig, Errors) {
  auto parse = [](const std::string& t) { return run_config_from(KeyValues::parse(t)); };
  EXPECT_THROW(parse("family=mera\nN=4\nG=4\ncolour=blue\n"), UsageError);
  EXPECT_THROW(parse("family=mera\nN=4\n"), UsageError);
  EXPECT_THROW(parse("family=mera\nN=4\nG=4\nseed=1\nseeds=1,2\n"), UsageError);
  EXPECT_THROW(parse("family=mera\nN=4\nG=4\nmethods=tn,magic\n"), UsageError);
  EXPECT_THROW(parse("family=mera\nN=4\nG=4\nreference=oracle\n"), UsageError);
  EXPECT_THROW(parse("family=expr\nG=4\n"), UsageError);
  EXPECT_THROW(parse("family=gaussian\nN=4\nW=1\nG=4\nmethods=qmc\n"), UsageError);
  EXPECT_THROW(parse("family=gaussian\nN=4\nW=1\nG=4,0\n"), UsageError);
  EXPECT_THROW(parse("family=gaussian\nN=0\nW=1\nG=4\n"), SpecError);
}

TEST(RunConfig, Defaults) {
  const auto c = run_config_from(KeyValues::parse("family=gaussian\nN=30\nW=2\nG=4\nseed=9\n"));
  EXPECT_EQ(c.reference, Reference::converged_tn);
  EXPECT_EQ(c.seeds, (std::vector<std::uint64_t>{9}));
  EXPECT_EQ(c.methods, (std::vector<Method>{Method::tn}));
  EXPECT_EQ(run_config_from(KeyValues::parse("family=mera\nN=4\nG=4\n")).reference, Reference::analytic);
  EXPECT_EQ(run_config_from(KeyValues::parse("family=gaussian\nN=4\nW=1\nG=4\n")).reference, Reference::brute_force);
}

TEST(BenchExpr, ConstantOnes) {
  const auto r = expr_run("f(x)*g(y)", KeyValues::parse("f=1\ng=1\n"), parse_rule("uniform:4", {0.0, 1.0}));
  EXPECT_NEAR(r.report.value(), 1.0, 1e-15);
  EXPECT_EQ(r.variables, (std::vector<std::string>{"x", "y"}));
}

TEST(BenchExpr, SquareMatchesDoubleSum) {
  const auto f = oracle::random_vector(5, 31), g = oracle::random_vector(5, 32);
  auto list = [](const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", v[i]);
      s += (i ? "," : "") + std::string(buf);
    }
    return s;
  };
  const auto rule = parse_rule("gauss:5", {-1.0, 2.0});
  const auto r = expr_run("(f(x)+g(y))^2", KeyValues::parse("f=" + list(f) + "\ng=" + list(g) + "\n"), rule);
  double ref = 0.0;
  for (std::size_t x = 0; x < 5; ++x)
    for (std::size_t y = 0; y < 5; ++y) ref += rule.weights[x] * rule.weights[y] * std::pow(f[x] + g[y], 2);
  EXPECT_LE(relative_error(r.report, ref), 1e-12);
}

TEST(BenchExpr, SumPlusProductMatchesCnotNetwork) {
  const auto f = oracle::random_vector(4, 41), g = oracle::random_vector(4, 42);
  const auto rule = parse_rule("gauss:4", {0.0, 1.0});
  std::string fb = "f=", gb = "g=";
  for (std::size_t i = 0; i < 4; ++i) {
    fb += (i ? "," : "") + std::to_string(f[i]);
    gb += (i ? "," : "") + std::to_string(g[i]);
  }
  const auto kv = KeyValues::parse(fb + "\n" + gb + "\n");
  const auto fv = kv.get_double_list("f"), gv = kv.get_double_list("g");
  const auto r = expr_run("f(x)+f(x)*g(y)", kv, rule);

  TensorNetwork tn;
  tn.add(integrate_leg(function_tensor(fv, true, "x", "alpha"), "x", rule));
  tn.add(integrate_leg(function_tensor(gv, true, "y", "beta"), "y", rule));
  tn.add(cnot_tensor("alpha", "beta", "gamma", "delta"));
  tn.add(add_tensor("gamma", "delta", "eps"));
  tn.add(Tensor::unit("eps", 2, 1));
  EXPECT_LE(relative_error(r.report, contract_exact(tn)), 1e-13);
}

TEST(BenchExpr, Errors) {
  const auto rule = parse_rule("gauss:3", {0.0, 1.0});
  EXPECT_THROW(expr_run("f(x)*h(y)", KeyValues::parse("f=1\n"), rule), UsageError);
  EXPECT_THROW(expr_run("f(x)", KeyValues::parse("f=1,2\n"), rule), UsageError);
  EXPECT_THROW(expr_run("f(x)+", KeyValues::parse("f=1\n"), rule), ParseError);
  EXPECT_THROW(parse_rule("gauss", {0.0, 1.0}), UsageError);
  EXPECT_THROW(parse_rule("gauss:0", {0.0, 1.0}), UsageError);
  EXPECT_THROW(parse_rule("gauss:3x", {0.0, 1.0}), UsageError);
  EXPECT_THROW(parse_rule("trapezoid:3", {0.0, 1.0}), UsageError);
  EXPECT_THROW(parse_rule("gauss:3", {1.0, 0.0}), UsageError);
}

TEST(Csv, HeaderMatchesRecordWidth) {
  EXPECT_EQ(split(csv_header()).size(), 13u);
  EXPECT_EQ(split(to_csv(ConvergenceRecord{})).size(), 13u);
}

TEST(BenchRun, ZeroReferenceReportsAbsoluteErrorWithWarning) {
  std::ostringstream log;
  std::vector<ConvergenceRecord> recs;
  run(run_config_from(KeyValues::parse("family=expr\nexpr=0*f(x)\nG=3\n")),
      [&](const ConvergenceRecord& r) { recs.push_back(r); }, &log);
  ASSERT_EQ(recs.size(), 1u);
  EXPECT_EQ(recs[0].reference, 0.0);
  EXPECT_EQ(recs[0].relative_error, 0.0);
  EXPECT_NE(log.str().find("reference is 0"), std::string::npos);
}
