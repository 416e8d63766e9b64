#include "actn/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "actn/contraction.hpp"
#include "actn/error.hpp"
#include "actn/random.hpp"

namespace actn {

namespace {

constexpr std::uint64_t kBaseStream = 0;
constexpr std::uint64_t kPerturbStream = 1;
constexpr std::uint64_t kGeneralStream = 2;
constexpr std::uint64_t kPhaseStream = 3;

PolynomialSpec empty_spec(std::size_t n, std::size_t k, std::size_t grid, QuadratureRule rule) {
  if (n == 0 || k == 0 || grid == 0) throw SpecError("polynomial needs N, k, G >= 1");
  PolynomialSpec spec;
  spec.n = n;
  spec.k = k;
  spec.grid = grid;
  spec.rule = std::move(rule);
  spec.q.assign(k, std::vector<std::vector<double>>(n, std::vector<double>(grid)));
  return spec;
}

}  // namespace

void PolynomialSpec::validate() const {
  if (n == 0 || k == 0 || grid == 0) throw SpecError("polynomial needs N, k, G >= 1");
  if (rule.size() != grid) throw SpecError("rule order differs from G");
  rule.validate();
  if (q.size() != k) throw SpecError("q must have k rows");
  for (const auto& row : q) {
    if (row.size() != n) throw SpecError("every q row must have N entries");
    for (const auto& v : row)
      if (v.size() != grid) throw SpecError("every q vector must have G samples");
  }
  if (sin && (sin->phase.size() != k || std::any_of(sin->phase.begin(), sin->phase.end(),
                                                     [&](const auto& r) { return r.size() != n; })))
    throw SpecError("sine phases must form a k x N table");
}

bool PolynomialSpec::rows_identical() const {
  for (std::size_t i = 1; i < q.size(); ++i)
    if (q[i] != q[0]) return false;
  return true;
}

double PolynomialSpec::evaluate(std::span<const double> x) const {
  if (x.size() != n) throw DimensionError("point has the wrong dimension");
  double f = 1.0;
  for (std::size_t i = 0; i < k; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (sin) {
        s += std::sin(2.0 * std::numbers::pi * (x[j] + sin->phase[i][j])) + sin->c;
      } else {
        const double t = (x[j] - rule.interval.lo) / rule.interval.length();
        const auto cell = std::min(grid - 1, static_cast<std::size_t>(std::max(0.0, t) * static_cast<double>(grid)));
        s += q[i][j][cell];
      }
    }
    f *= s;
  }
  return f;
}

PolynomialSpec make_power_polynomial(std::size_t n, std::size_t k, std::size_t grid, std::uint64_t seed) {
  auto spec = empty_spec(n, k, grid, uniform_rule(grid));
  const CounterRng rng(seed, kBaseStream);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t p = 0; p < grid; ++p) spec.q[0][j][p] = rng.uniform(j * grid + p, -1.0, 1.0);
  for (std::size_t i = 1; i < k; ++i) spec.q[i] = spec.q[0];
  return spec;
}

PolynomialSpec make_general_polynomial(std::size_t n, std::size_t k, std::size_t grid, double lambda,
                                       std::uint64_t seed) {
  if (!(lambda < 1.0)) throw SpecError("lambda must be below 1");
  auto spec = empty_spec(n, k, grid, uniform_rule(grid));
  const CounterRng rng(seed, kGeneralStream);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t p = 0; p < grid; ++p) spec.q[i][j][p] = rng.uniform((i * n + j) * grid + p, lambda, 1.0);
  return spec;
}

PolynomialSpec make_perturbed_polynomial(std::size_t n, std::size_t k, std::size_t grid, double delta,
                                         std::uint64_t seed) {
  if (!(delta >= 0.0)) throw SpecError("delta must be nonnegative");
  auto spec = make_power_polynomial(n, k, grid, seed);
  const CounterRng rng(seed, kPerturbStream);
  for (std::size_t i = 1; i < k; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t p = 0; p < grid; ++p)
        spec.q[i][j][p] += delta * rng.uniform((i * n + j) * grid + p, -1.0, 1.0);
  return spec;
}

PolynomialSpec make_sin_polynomial(std::size_t n, std::size_t k, double c, std::size_t grid, std::uint64_t seed) {
  auto spec = empty_spec(n, k, grid, gauss_legendre(grid, {0.0, 1.0}));
  const CounterRng rng(seed, kPhaseStream);
  SinTerms terms;
  terms.c = c;
  terms.phase.assign(k, std::vector<double>(n));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double a = rng.uniform(i * n + j);
      terms.phase[i][j] = a;
      for (std::size_t p = 0; p < grid; ++p)
        spec.q[i][j][p] = std::sin(2.0 * std::numbers::pi * (spec.rule.nodes[p] + a)) + c;
    }
  spec.sin = std::move(terms);
  return spec;
}

RowStructure build_polynomial_tn(const PolynomialSpec& spec) {
  spec.validate();
  const std::size_t n = spec.n, k = spec.k, g = spec.grid;
  RowStructure rs;
  rs.rows.resize(k);
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t du = i == 0 ? 1 : g;
    const std::size_t dd = i + 1 == k ? 1 : g;
    for (std::size_t j = 0; j < n; ++j) {
      // Chain matrix M(x) = [[1, q(x)], [0, 1]]; the left end selects state 0
      // and the right end selects state 1.
      const std::size_t dl = j == 0 ? 1 : 2;
      const std::size_t dr = j + 1 == n ? 1 : 2;
      auto t = Tensor::zeros({{"l", dl}, {"r", dr}, {"u", du}, {"d", dd}});
      for (std::size_t x = 0; x < g; ++x) {
        const double w = i == 0 ? spec.rule.weights[x] : 1.0;
        const std::size_t u = du == 1 ? 0 : x;
        const std::size_t d = dd == 1 ? 0 : x;
        for (std::size_t a = 0; a < dl; ++a)
          for (std::size_t b = 0; b < dr; ++b) {
            const std::size_t sa = a, sb = dr == 1 ? 1 : b;
            double m = 0.0;
            if (sa == 0 && sb == 0) m = 1.0;
            if (sa == 0 && sb == 1) m = spec.q[i][j][x];
            if (sa == 1 && sb == 1) m = 1.0;
            t.at({a, b, u, d}) += w * m;
          }
      }
      rs.rows[i].push_back(std::move(t));
    }
  }
  return rs;
}

std::pair<Tensor, Tensor> exact_projectors(std::size_t i, std::size_t j, std::size_t k) {
  if (i < 2 || i > k) throw SpecError("projector row must satisfy 2 <= i <= k");
  if (j < 1) throw SpecError("projector column must be at least 1");
  auto pl = Tensor::zeros({{"a", i}, {"b", 2}, {"c", i + 1}});
  auto pr = Tensor::zeros({{"c", i + 1}, {"a", i}, {"b", 2}});
  for (std::size_t a = 0; a < i; ++a) pl.at({a, 0, a}) = 1.0;
  pl.at({i - 1, 1, i}) = 1.0;
  for (std::size_t a = 0; a < i; ++a)
    for (std::size_t b = 0; b < 2; ++b) pr.at({a + b, a, b}) = 1.0;
  return {pl, pr};
}

TensorNetwork insert_all_projectors(const PolynomialSpec& spec, std::size_t keep_rank) {
  auto tn = build_polynomial_tn(spec).to_network();
  const std::size_t n = spec.n, k = spec.k;
  if (k < 2 || n < 2) return tn;
  for (std::size_t j = 0; j + 1 < n; ++j) {
    const std::string col = "." + std::to_string(j + 1);
    // Merged bond so far: row 0's horizontal bond.
    std::string merged = "h0" + col;
    std::size_t merged_owner = j;  // tensor id of row 0, column j
    for (std::size_t i = 2; i <= k; ++i) {
      auto [pl, pr] = exact_projectors(i, j + 1, k);
      if (keep_rank > 0 && keep_rank < i + 1) {
        // Drop the highest link states.
        auto cut = [&](const Tensor& t) {
          std::vector<Leg> legs = t.legs();
          for (auto& leg : legs)
            if (leg.name == "c") leg.dim = keep_rank;
          auto out = Tensor::zeros(legs);
          const auto shape = t.shape();
          std::vector<std::size_t> idx(t.rank(), 0);
          const std::size_t ca = t.axis("c");
          for (std::size_t f = 0; f < t.size(); ++f) {
            std::size_t rem = f;
            for (std::size_t ax = t.rank(); ax-- > 0;) {
              idx[ax] = rem % shape[ax];
              rem /= shape[ax];
            }
            if (idx[ca] < keep_rank) out.at(idx) = t.data()[f];
          }
          return out;
        };
        pl = cut(pl);
        pr = cut(pr);
      }
      const std::string row_bond = "h" + std::to_string(i - 1) + col;
      const std::size_t row_owner = (i - 1) * n + j;
      pl = pl.renamed("a", merged).renamed("b", row_bond);
      pr = pr.renamed("a", merged).renamed("b", row_bond);
      const ProjectedBond bonds[] = {{merged, merged_owner}, {row_bond, row_owner}};
      std::string link;
      tn = insert_projector_pair(tn, bonds, pl, pr, "c", &link);
      merged = link;
      merged_owner = tn.size() - 2;
    }
  }
  return tn;
}

double recursion_integral(const PolynomialSpec& spec) {
  spec.validate();
  if (!spec.rows_identical()) throw SpecError("recursion needs identical rows");
  const std::size_t k = spec.k;
  // binom[a][b] by Pascal's rule.
  std::vector<std::vector<double>> binom(k + 1, std::vector<double>(k + 1, 0.0));
  for (std::size_t a = 0; a <= k; ++a) {
    binom[a][0] = 1.0;
    for (std::size_t b = 1; b <= a; ++b) binom[a][b] = binom[a - 1][b - 1] + binom[a - 1][b];
  }
  // acc[e] = integral of (q_1 + ... + q_j)^e over the first j variables.
  std::vector<double> acc(k + 1, 0.0);
  acc[0] = 1.0;
  for (std::size_t j = 0; j < spec.n; ++j) {
    std::vector<double> moment(k + 1, 0.0);
    for (std::size_t p = 0; p < spec.grid; ++p) {
      double power = spec.rule.weights[p];
      for (std::size_t e = 0; e <= k; ++e) {
        moment[e] += power;
        power *= spec.q[0][j][p];
      }
    }
    std::vector<double> next(k + 1, 0.0);
    for (std::size_t e = 0; e <= k; ++e)
      for (std::size_t m = 0; m <= e; ++m) next[e] += binom[e][m] * acc[m] * moment[e - m];
    acc = std::move(next);
  }
  return acc[k];
}

double brute_force_integral(const PolynomialSpec& spec) {
  spec.validate();
  const std::size_t n = spec.n, g = spec.grid;
  std::vector<std::size_t> idx(n, 0);
  double total = 0.0;
  for (;;) {
    double f = 1.0;
    for (std::size_t j = 0; j < n; ++j) f *= spec.rule.weights[idx[j]];
    for (std::size_t i = 0; i < spec.k; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += spec.q[i][j][idx[j]];
      f *= s;
    }
    total += f;
    std::size_t a = 0;
    while (a < n && ++idx[a] == g) idx[a++] = 0;
    if (a == n) break;
  }
  return total;
}

}  // namespace actn
