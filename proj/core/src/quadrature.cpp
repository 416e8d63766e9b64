#include "actn/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "actn/error.hpp"

namespace actn {

void QuadratureRule::validate() const {
  if (nodes.empty() || nodes.size() != weights.size()) throw SpecError("quadrature rule needs matching nonempty nodes/weights");
  if (!(interval.hi > interval.lo)) throw SpecError("quadrature interval must have hi > lo");
  double sum = 0.0;
  for (std::size_t p = 0; p < nodes.size(); ++p) {
    if (nodes[p] < interval.lo || nodes[p] > interval.hi) throw SpecError("quadrature node outside its interval");
    if (p > 0 && !(nodes[p] > nodes[p - 1])) throw SpecError("quadrature nodes must be strictly increasing");
    sum += weights[p];
  }
  if (std::abs(sum - interval.length()) > 1e-12 * interval.length())
    throw SpecError("quadrature weights do not sum to the interval length");
}

QuadratureRule gauss_legendre(std::size_t order, Interval interval) {
  if (order == 0) throw SpecError("Gauss-Legendre order must be at least 1");
  const std::size_t n = order;
  QuadratureRule rule;
  rule.interval = interval;
  rule.nodes.assign(n, 0.0);
  rule.weights.assign(n, 0.0);
  const double half = 0.5 * interval.length();
  const double mid = 0.5 * (interval.lo + interval.hi);

  // Newton on P_n from the Chebyshev-like initial guess; roots are symmetric
  // so only the upper half is computed.
  const std::size_t m = (n + 1) / 2;
  for (std::size_t i = 0; i < m; ++i) {
    double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (std::size_t j = 1; j <= n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * static_cast<double>(j) - 1.0) * z * p1 - (static_cast<double>(j) - 1.0) * p2) / static_cast<double>(j);
      }
      dp = static_cast<double>(n) * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) <= 1e-16) break;
    }
    // Recompute the derivative at the converged root.
    {
      double p0 = 1.0, p1 = 0.0;
      for (std::size_t j = 1; j <= n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * static_cast<double>(j) - 1.0) * z * p1 - (static_cast<double>(j) - 1.0) * p2) / static_cast<double>(j);
      }
      dp = static_cast<double>(n) * (z * p0 - p1) / (z * z - 1.0);
    }
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    // Node i is the i-th largest; store ascending.
    rule.nodes[n - 1 - i] = mid + half * z;
    rule.nodes[i] = mid - half * z;
    rule.weights[n - 1 - i] = half * w;
    rule.weights[i] = half * w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = mid;  // exact center for odd orders
  return rule;
}

QuadratureRule uniform_rule(std::size_t order, Interval interval) {
  if (order == 0) throw SpecError("uniform rule order must be at least 1");
  if (!(interval.hi > interval.lo)) throw SpecError("quadrature interval must have hi > lo");
  QuadratureRule rule;
  rule.interval = interval;
  const double h = interval.length() / static_cast<double>(order);
  for (std::size_t p = 0; p < order; ++p) {
    rule.nodes.push_back(interval.lo + (static_cast<double>(p) + 0.5) * h);
    rule.weights.push_back(h);
  }
  return rule;
}

}  // namespace actn
