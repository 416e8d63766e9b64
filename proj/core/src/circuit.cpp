#include "actn/circuit.hpp"

#include <cmath>
#include <numbers>

#include "actn/error.hpp"

namespace actn {

Tensor function_tensor(std::span<const double> samples, bool with_control, const std::string& variable,
                       const std::string& control) {
  if (samples.empty()) throw SpecError("function_tensor needs at least one sample");
  const std::size_t g = samples.size();
  if (!with_control) return Tensor({{variable, g}}, std::vector<double>(samples.begin(), samples.end()));
  std::vector<double> data(2 * g);
  for (std::size_t p = 0; p < g; ++p) {
    data[2 * p] = 1.0;
    data[2 * p + 1] = samples[p];
  }
  return Tensor({{variable, g}, {control, 2}}, std::move(data));
}

Tensor add_tensor(const std::string& a, const std::string& b, const std::string& c) {
  auto t = Tensor::zeros({{a, 2}, {b, 2}, {c, 2}});
  t.at({0, 0, 0}) = 1.0;
  t.at({0, 1, 1}) = 1.0;
  t.at({1, 0, 1}) = 1.0;
  return t;
}

Tensor mul_tensor(const std::string& a, const std::string& b, const std::string& c) {
  auto t = Tensor::zeros({{a, 2}, {b, 2}, {c, 2}});
  t.at({0, 0, 0}) = 1.0;
  t.at({1, 1, 1}) = 1.0;
  return t;
}

Tensor copy_tensor(std::size_t grid, std::span<const std::string> legs) {
  if (grid == 0) throw SpecError("copy_tensor grid must be at least 1");
  std::vector<Leg> shape;
  for (const auto& name : legs) shape.push_back({name, grid});
  auto t = Tensor::zeros(std::move(shape));
  // Diagonal offset step is sum of strides = (G^n - 1) / (G - 1).
  std::size_t step = 0, stride = 1;
  for (std::size_t i = 0; i < legs.size(); ++i) {
    step += stride;
    stride *= grid;
  }
  for (std::size_t p = 0; p < grid; ++p) t.data()[p * step] = 1.0;
  return t;
}

Tensor copy_tensor(std::size_t grid, std::size_t arity) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < arity; ++i) names.push_back("c" + std::to_string(i));
  return copy_tensor(grid, names);
}

CopyChain copy_chain(std::size_t grid, std::size_t uses, const std::string& prefix) {
  if (uses == 0) throw SpecError("copy_chain needs at least one use");
  CopyChain chain;
  if (uses <= 2) {
    chain.legs.assign(uses, prefix);
    return chain;
  }
  for (std::size_t t = 0; t < uses; ++t) chain.legs.push_back(prefix + "." + std::to_string(t));
  // COPY_1(o0, o1, c1), COPY_m(c_{m-1}, o_{m+1}, c_m), last one ends in o_{uses-1}.
  std::string carry = chain.legs[0];
  for (std::size_t t = 1; t + 1 < uses; ++t) {
    const std::string next = t + 2 == uses ? chain.legs[uses - 1] : prefix + ".c" + std::to_string(t);
    const std::vector<std::string> names{carry, chain.legs[t], next};
    chain.copies.push_back(copy_tensor(grid, names));
    carry = next;
  }
  return chain;
}

Tensor cnot_tensor(const std::string& a, const std::string& b, const std::string& c, const std::string& d) {
  auto t = Tensor::zeros({{a, 2}, {b, 2}, {c, 2}, {d, 2}});
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) t.at({i, j, i ^ j, j}) = 1.0;
  return t;
}

Tensor integrate_leg(const Tensor& t, const std::string& leg, const QuadratureRule& rule) {
  if (t.dim(leg) != rule.size())
    throw DimensionError("leg '" + leg + "' has dim " + std::to_string(t.dim(leg)) + " but the rule has " +
                         std::to_string(rule.size()) + " points");
  return contract(t, Tensor::vector(leg, rule.weights));
}

Tensor variable_add_tensor(std::size_t grid, const std::string& x, const std::string& y, const std::string& z) {
  if (grid == 0) throw SpecError("variable_add_tensor grid must be at least 1");
  auto t = Tensor::zeros({{x, grid}, {y, grid}, {z, grid}});
  for (std::size_t i = 0; i < grid; ++i)
    for (std::size_t j = 0; j < grid; ++j) t.at({i, j, (i + j) % grid}) = 1.0;
  return t;
}

TensorNetwork convolution_network(std::span<const double> f, std::span<const double> g) {
  if (f.size() != g.size() || f.empty()) throw DimensionError("convolution inputs must share a nonempty grid");
  const std::size_t n = f.size();
  TensorNetwork tn;
  tn.add(function_tensor(f, false, "x"));
  tn.add(function_tensor(g, false, "z"));
  // z = y - x  <=>  y = x + z
  tn.add(variable_add_tensor(n, "x", "z", "y"));
  return tn;
}

std::vector<double> fourier_convolution(std::span<const double> f, std::span<const double> g) {
  if (f.size() != g.size() || f.empty()) throw DimensionError("convolution inputs must share a nonempty grid");
  const std::size_t n = f.size();
  const double step = 2.0 * std::numbers::pi / static_cast<double>(n);
  // Forward DFT F[k, x] = exp(-i step k x) split into real/imaginary parts.
  auto dft_re = Tensor::zeros({{"k", n}, {"x", n}});
  auto dft_im = Tensor::zeros({{"k", n}, {"x", n}});
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t x = 0; x < n; ++x) {
      const double angle = step * static_cast<double>((k * x) % n);
      dft_re.at({k, x}) = std::cos(angle);
      dft_im.at({k, x}) = -std::sin(angle);
    }
  const auto fv = Tensor::vector("x", {f.begin(), f.end()});
  const auto gv = Tensor::vector("x", {g.begin(), g.end()});
  const auto f_re = contract(dft_re, fv), f_im = contract(dft_im, fv);
  const auto g_re = contract(dft_re, gv), g_im = contract(dft_im, gv);

  std::vector<double> prod_re(n), prod_im(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double a = f_re.data()[k], b = f_im.data()[k], c = g_re.data()[k], d = g_im.data()[k];
    prod_re[k] = a * c - b * d;
    prod_im[k] = a * d + b * c;
  }
  // Inverse transform: y[t] = (1/n) sum_k Re(P[k] exp(+i step k t)).
  auto inv_re = Tensor::zeros({{"y", n}, {"k", n}});
  auto inv_im = Tensor::zeros({{"y", n}, {"k", n}});
  for (std::size_t t = 0; t < n; ++t)
    for (std::size_t k = 0; k < n; ++k) {
      const double angle = step * static_cast<double>((k * t) % n);
      inv_re.at({t, k}) = std::cos(angle) / static_cast<double>(n);
      inv_im.at({t, k}) = -std::sin(angle) / static_cast<double>(n);
    }
  const auto y = contract(inv_re, Tensor::vector("k", prod_re));
  const auto y_im = contract(inv_im, Tensor::vector("k", prod_im));
  std::vector<double> out(n);
  for (std::size_t t = 0; t < n; ++t) out[t] = y.data()[t] + y_im.data()[t];
  return out;
}

}  // namespace actn
