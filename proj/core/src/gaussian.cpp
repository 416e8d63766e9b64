#include "actn/gaussian.hpp"

#include <cmath>

#include "actn/error.hpp"
#include "actn/random.hpp"

namespace actn {

void GaussianSpec::validate() const {
  if (n == 0 || grid == 0) throw SpecError("gaussian needs N, G >= 1");
  if (a.size() != n * n) throw SpecError("A must be N x N");
  if (rule.size() != grid) throw SpecError("rule order differs from G");
  rule.validate();
}

double GaussianSpec::log_value(std::span<const double> x) const {
  if (x.size() != n) throw DimensionError("point has the wrong dimension");
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) s += a[i * n + j] * x[i] * x[j];
  return -s;
}

GaussianSpec make_banded_A(std::size_t n, std::size_t band, std::size_t grid, double delta, std::uint64_t seed) {
  if (!(delta >= 0.0)) throw SpecError("delta must be nonnegative");
  if (n == 0 || grid == 0) throw SpecError("gaussian needs N, G >= 1");
  GaussianSpec spec;
  spec.n = n;
  spec.band = band;
  spec.grid = grid;
  spec.rule = gauss_legendre(grid, {-1.0, 1.0});
  spec.a.assign(n * n, 0.0);
  const CounterRng rng(seed);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double v = rng.uniform(i * n + j, -1.0, 1.0);
      const std::size_t dist = i > j ? i - j : j - i;
      spec.a[i * n + j] = dist <= band ? v : delta * v;
    }
  return spec;
}

GaussianSpec with_grid(const GaussianSpec& spec, std::size_t grid) {
  GaussianSpec out = spec;
  out.grid = grid;
  out.rule = gauss_legendre(grid, spec.rule.interval);
  return out;
}

TriangularNetwork build_gaussian_tn(const GaussianSpec& spec) {
  spec.validate();
  const std::size_t n = spec.n, g = spec.grid;
  const auto& x = spec.rule.nodes;
  TriangularNetwork tn;
  tn.grid = g;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> d(g);
    for (std::size_t p = 0; p < g; ++p) d[p] = spec.rule.weights[p] * std::exp(-spec.at(i, i) * x[p] * x[p]);
    tn.diagonal.push_back(std::move(d));
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double c = spec.at(i, j) + spec.at(j, i);
      if (c == 0.0) continue;
      std::vector<double> m(g * g);
      for (std::size_t p = 0; p < g; ++p)
        for (std::size_t q = 0; q < g; ++q) m[p * g + q] = std::exp(-c * x[p] * x[q]);
      tn.couplings.emplace(std::make_pair(i, j), std::move(m));
    }
  return tn;
}

double brute_force_integral(const GaussianSpec& spec) {
  spec.validate();
  const std::size_t n = spec.n, g = spec.grid;
  std::vector<std::size_t> idx(n, 0);
  std::vector<double> point(n);
  double total = 0.0;
  for (;;) {
    double w = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
      w *= spec.rule.weights[idx[j]];
      point[j] = spec.rule.nodes[idx[j]];
    }
    total += w * std::exp(spec.log_value(point));
    std::size_t a = 0;
    while (a < n && ++idx[a] == g) idx[a++] = 0;
    if (a == n) break;
  }
  return total;
}

}  // namespace actn
