#include "actn/mera.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <string>

#include "actn/contraction.hpp"
#include "actn/error.hpp"
#include "actn/random.hpp"

namespace actn {

namespace {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Matrix as_matrix(const std::vector<double>& v, Eigen::Index rows, Eigen::Index cols) {
  if (v.size() != static_cast<std::size_t>(rows * cols)) throw SpecError("layer tensor has the wrong size");
  return Eigen::Map<const Matrix>(v.data(), rows, cols);
}

std::vector<double> to_vector(const Matrix& m) { return {m.data(), m.data() + m.size()}; }

/// First `cols` columns of Q from the QR of a seeded 4 x 4 Gaussian matrix.
Matrix random_orthonormal(const CounterRng& rng, std::uint64_t base, Eigen::Index cols) {
  Matrix m(4, 4);
  for (Eigen::Index r = 0; r < 4; ++r)
    for (Eigen::Index c = 0; c < 4; ++c) m(r, c) = rng.normal(2 * (base + static_cast<std::uint64_t>(r * 4 + c)));
  Eigen::HouseholderQR<Matrix> qr(m);
  Matrix q = qr.householderQ() * Matrix::Identity(4, 4);
  return q.leftCols(cols);
}

/// Legendre P_0..P_d at x.
std::vector<double> legendre(std::size_t d, double x) {
  std::vector<double> p{1.0, x};
  for (std::size_t m = 1; m < d; ++m)
    p.push_back(((2.0 * static_cast<double>(m) + 1.0) * x * p[m] - static_cast<double>(m) * p[m - 1]) /
                (static_cast<double>(m) + 1.0));
  return p;
}

std::size_t level_count(std::size_t n) {
  std::size_t levels = 0;
  for (std::size_t m = n; m > 1; m /= 2) {
    if (m % 2) throw SpecError("MERA leaf count must be a power of two");
    ++levels;
  }
  if (levels == 0) throw SpecError("MERA needs at least two leaves");
  return levels;
}

/// Factors a 4 x 4 operator on (a, b) as A (x) B; throws when the operator
/// Schmidt rank exceeds one.
std::pair<Matrix, Matrix> factor_pair(const Matrix& op) {
  // R[(a, a'), (b, b')] = op[(a, b), (a', b')]
  Matrix r(4, 4);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int a2 = 0; a2 < 2; ++a2)
        for (int b2 = 0; b2 < 2; ++b2) r(a * 2 + a2, b * 2 + b2) = op(a * 2 + b, a2 * 2 + b2);
  Eigen::JacobiSVD<Matrix> svd(r, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  if (s(1) > 1e-10 * s(0)) throw Error("two-site operator does not factor into single-site operators");
  const double root = std::sqrt(s(0));
  Matrix a(2, 2), b(2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      a(i, j) = svd.matrixU()(i * 2 + j, 0) * root;
      b(i, j) = svd.matrixV()(i * 2 + j, 0) * root;
    }
  return {a, b};
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix k(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) k.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return k;
}

Matrix site_gram(const MeraSpec& spec) {
  Matrix m = Matrix::Zero(2, 2);
  for (std::size_t p = 0; p < spec.rule.size(); ++p) {
    const double w = spec.rule.weights[p], g = spec.g[p];
    m(0, 0) += w;
    m(0, 1) += w * g;
    m(1, 1) += w * g * g;
  }
  m(1, 0) = m(0, 1);
  return m;
}

/// Full <psi| op^{(x)N} |psi> network.
double sandwich(const MeraSpec& spec, const Matrix& op) {
  auto ket = mera_state_network(spec, "i");
  auto bra = mera_state_network(spec, "j");
  TensorNetwork tn;
  auto prime = [](const Tensor& t, const std::string& tag) {
    Tensor out = t;
    for (const auto& leg : t.legs())
      if (leg.name[0] != 'i' && leg.name[0] != 'j') out = out.renamed(leg.name, tag + leg.name);
    return out;
  };
  for (const auto& t : ket.tensors()) tn.add(prime(t, "k:"));
  for (const auto& t : bra.tensors()) tn.add(prime(t, "b:"));
  for (std::size_t s = 0; s < spec.n; ++s) {
    const auto id = std::to_string(s);
    tn.add(Tensor({{"i" + id, 2}, {"j" + id, 2}}, to_vector(op)));
  }
  return contract_exact(tn).value();
}

}  // namespace

void MeraSpec::validate() const {
  const std::size_t levels = level_count(n);
  if (layers.size() != levels) throw SpecError("MERA layer count does not match the leaf count");
  if (top.size() != 2) throw SpecError("MERA top must be a 2-vector");
  if (std::abs(top[0] * top[0] + top[1] * top[1] - 1.0) > 1e-12) throw SpecError("MERA top is not normalized");
  std::size_t sites = 1;
  for (const auto& layer : layers) {
    if (layer.isometries.size() != sites) throw SpecError("isometry count does not match the layer width");
    sites *= 2;
    if (layer.disentanglers.size() != (sites >= 4 ? sites / 2 - 1 : 0))
      throw SpecError("disentangler count does not match the layer width");
    for (const auto& v : layer.isometries) {
      const Matrix m = as_matrix(v, 4, 2);
      if ((m.transpose() * m - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() > 1e-12)
        throw SpecError("isometry violates V^T V = I");
    }
    for (const auto& u : layer.disentanglers) {
      const Matrix m = as_matrix(u, 4, 4);
      if ((m * m.transpose() - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() > 1e-12)
        throw SpecError("disentangler violates U U^T = I");
    }
  }
  if (g.size() != rule.size() || g.empty()) throw SpecError("g must be sampled at the rule's nodes");
  rule.validate();
  double s1 = 0.0, s2 = 0.0;
  for (std::size_t p = 0; p < g.size(); ++p) {
    s1 += rule.weights[p] * g[p];
    s2 += rule.weights[p] * g[p] * g[p];
  }
  if (std::abs(s1) > 1e-10) throw SpecError("g does not integrate to 0");
  if (std::abs(s2 - 2.0) > 1e-10) throw SpecError("g^2 does not integrate to 2");
  if (std::abs(rule.interval.length() - 2.0) > 1e-12) throw SpecError("MERA rule must span an interval of length 2");
}

MeraSpec make_mera(std::size_t n, std::size_t grid, std::uint64_t seed) {
  const std::size_t levels = level_count(n);
  if (grid < 2) throw SpecError("MERA needs a rule of order at least 2");
  MeraSpec spec;
  spec.n = n;
  const CounterRng rng(seed, 0);
  std::uint64_t draw = 0;
  const double t0 = rng.normal(0), t1 = rng.normal(2);
  const double norm = std::hypot(t0, t1);
  spec.top = {t0 / norm, t1 / norm};
  draw = 2;
  std::size_t sites = 1;
  for (std::size_t l = 0; l < levels; ++l) {
    MeraLayer layer;
    for (std::size_t s = 0; s < sites; ++s, draw += 16) layer.isometries.push_back(to_vector(random_orthonormal(rng, draw, 2)));
    sites *= 2;
    if (sites >= 4)
      for (std::size_t s = 0; s + 1 < sites / 2; ++s, draw += 16)
        layer.disentanglers.push_back(to_vector(random_orthonormal(rng, draw, 4)));
    spec.layers.push_back(std::move(layer));
  }

  spec.rule = gauss_legendre(grid, {-1.0, 1.0});
  const CounterRng coef(seed, 1);
  const std::size_t degree = std::min<std::size_t>(3, grid - 1);
  spec.g.assign(grid, 0.0);
  for (std::size_t p = 0; p < grid; ++p) {
    const auto poly = legendre(degree, spec.rule.nodes[p]);
    for (std::size_t d = 1; d <= degree; ++d) spec.g[p] += coef.normal(2 * d) * poly[d];
  }
  double mean = 0.0;
  for (std::size_t p = 0; p < grid; ++p) mean += spec.rule.weights[p] * spec.g[p];
  mean /= spec.rule.interval.length();
  double sq = 0.0;
  for (std::size_t p = 0; p < grid; ++p) {
    spec.g[p] -= mean;
    sq += spec.rule.weights[p] * spec.g[p] * spec.g[p];
  }
  for (auto& v : spec.g) v *= std::sqrt(2.0 / sq);
  spec.validate();
  return spec;
}

TensorNetwork mera_state_network(const MeraSpec& spec, const std::string& prefix) {
  spec.validate();
  TensorNetwork tn;
  // Current open legs of the partially built state, one per site.
  std::vector<std::string> open{"m0.0"};
  tn.add(Tensor::vector(open[0], spec.top));
  for (std::size_t l = 0; l < spec.layers.size(); ++l) {
    const auto& layer = spec.layers[l];
    const bool last = l + 1 == spec.layers.size();
    const std::string tag = "m" + std::to_string(l + 1) + ".";
    std::vector<std::string> split;
    for (std::size_t s = 0; s < open.size(); ++s) {
      const std::string a = tag + "v" + std::to_string(2 * s), b = tag + "v" + std::to_string(2 * s + 1);
      tn.add(Tensor({{a, 2}, {b, 2}, {open[s], 2}}, layer.isometries[s]));
      split.push_back(a);
      split.push_back(b);
    }
    std::vector<std::string> next = split;
    for (std::size_t d = 0; d < layer.disentanglers.size(); ++d) {
      const std::size_t s = 2 * d + 1;
      const std::string a = tag + "u" + std::to_string(s), b = tag + "u" + std::to_string(s + 1);
      tn.add(Tensor({{a, 2}, {b, 2}, {split[s], 2}, {split[s + 1], 2}}, layer.disentanglers[d]));
      next[s] = a;
      next[s + 1] = b;
    }
    if (last)
      for (std::size_t s = 0; s < next.size(); ++s) {
        // Leaf legs take their public names.
        for (std::size_t id = 0; id < tn.size(); ++id)
          if (tn.tensor(id).has_leg(next[s])) tn.replace(id, tn.tensor(id).renamed(next[s], prefix + std::to_string(s)));
      }
    open = std::move(next);
  }
  return tn;
}

double mera_integral_structured(const MeraSpec& spec) {
  spec.validate();
  std::vector<Matrix> ops(spec.n, site_gram(spec));
  for (std::size_t l = spec.layers.size(); l-- > 0;) {
    const auto& layer = spec.layers[l];
    for (std::size_t d = 0; d < layer.disentanglers.size(); ++d) {
      const std::size_t s = 2 * d + 1;
      const Matrix u = as_matrix(layer.disentanglers[d], 4, 4);
      const Matrix pulled = u.transpose() * kron(ops[s], ops[s + 1]) * u;
      auto [a, b] = factor_pair(pulled);
      ops[s] = a;
      ops[s + 1] = b;
    }
    std::vector<Matrix> up;
    for (std::size_t s = 0; s < layer.isometries.size(); ++s) {
      const Matrix v = as_matrix(layer.isometries[s], 4, 2);
      up.push_back(v.transpose() * kron(ops[2 * s], ops[2 * s + 1]) * v);
    }
    ops = std::move(up);
  }
  const Eigen::Vector2d t(spec.top[0], spec.top[1]);
  return t.dot(ops[0] * t);
}

double mera_integral_naive(const MeraSpec& spec) { return sandwich(spec, site_gram(spec)); }

double mera_trace_naive(const MeraSpec& spec) { return sandwich(spec, Matrix::Identity(2, 2)); }

}  // namespace actn
