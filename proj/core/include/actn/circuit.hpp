#pragma once

// Elementary tensors of arithmetic circuits.
//
// A function tensor stores f on a grid: entry (p, 0) = 1 and (p, 1) = f(x_p).
// The control leg (dim 2) selects between the constant and the function, and
// the control tensors below implement arithmetic on it. A function that only
// enters through multiplication can drop its control leg (fixed at 1).

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "actn/network.hpp"
#include "actn/quadrature.hpp"
#include "actn/tensor.hpp"

namespace actn {

Tensor function_tensor(std::span<const double> samples, bool with_control, const std::string& variable = "x",
                       const std::string& control = "alpha");

/// (+)[a, b, c] = 1 iff a + b == c, over control dim 2 (no wrap-around, so
/// (1, 1, *) is zero).
Tensor add_tensor(const std::string& a = "alpha", const std::string& b = "beta", const std::string& c = "gamma");

/// (x)[a, b, c] = 1 iff a == b == c.
Tensor mul_tensor(const std::string& a = "alpha", const std::string& b = "beta", const std::string& c = "gamma");

/// Generalized Kronecker delta on grid legs, one leg per name.
Tensor copy_tensor(std::size_t grid, std::span<const std::string> legs);
/// Same, with legs named c0, c1, ...
Tensor copy_tensor(std::size_t grid, std::size_t arity);

/// Joins `uses` occurrences of one variable. Occurrence t must carry the
/// leg legs[t]; with uses <= 2 the names coincide and no tensor is needed,
/// otherwise a chain of uses - 2 arity-3 COPY tensors is returned.
struct CopyChain {
  std::vector<std::string> legs;
  std::vector<Tensor> copies;
};
CopyChain copy_chain(std::size_t grid, std::size_t uses, const std::string& prefix);

/// CNOT on control legs: (a, b) -> (c, d) with c = a XOR b and d = b.
/// Contracted with F[x, a], G[y, b] and (+)[c, d, e] it gives f(x) + f(x) g(y)
/// on the e = 1 slice.
Tensor cnot_tensor(const std::string& a = "alpha", const std::string& b = "beta", const std::string& c = "gamma",
                   const std::string& d = "delta");

/// Contracts the rule's weight vector into `leg`, removing it.
Tensor integrate_leg(const Tensor& t, const std::string& leg, const QuadratureRule& rule);

/// Cyclic-grid addition: Z[x, y, z] = 1 iff z == (x + y) mod G.
Tensor variable_add_tensor(std::size_t grid, const std::string& x = "x", const std::string& y = "y",
                           const std::string& z = "z");

/// f(x) g(z) Z[x, z, y] with open leg "y": contracts to the cyclic
/// convolution sum_x f[x] g[(y - x) mod G].
TensorNetwork convolution_network(std::span<const double> f, std::span<const double> g);

/// Fourier-side route to the same convolution: transform both inputs with
/// DFT variable tensors (real and imaginary parts kept as separate real
/// tensors), multiply pointwise in k, transform back.
std::vector<double> fourier_convolution(std::span<const double> f, std::span<const double> g);

}  // namespace actn
