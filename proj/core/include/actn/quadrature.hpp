#pragma once

#include <cstddef>
#include <vector>

namespace actn {

struct Interval {
  double lo = 0.0;
  double hi = 1.0;

  double length() const noexcept { return hi - lo; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Nodes and weights of a one-dimensional quadrature rule on `interval`.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  Interval interval;

  std::size_t size() const noexcept { return nodes.size(); }

  /// Throws SpecError unless nodes are strictly increasing inside the
  /// interval and the weights sum to its length.
  void validate() const;

  /// sum_p w_p f(x_p)
  template <typename F>
  double integrate(F&& f) const {
    double s = 0.0;
    for (std::size_t p = 0; p < nodes.size(); ++p) s += weights[p] * f(nodes[p]);
    return s;
  }
};

/// G-point Gauss-Legendre rule mapped affinely onto `interval`.
QuadratureRule gauss_legendre(std::size_t order, Interval interval = {-1.0, 1.0});

/// Equal weights (hi - lo) / G at the cell midpoints lo + (p + 1/2)(hi - lo) / G.
QuadratureRule uniform_rule(std::size_t order, Interval interval = {0.0, 1.0});

}  // namespace actn
