#include "actn/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "actn/circuit.hpp"
#include "actn/error.hpp"
#include "linalg.hpp"

namespace actn {

namespace {

using detail::RowMatrix;

/// Boundary MPS site: legs (l, p, r) in that order.
struct Mps {
  std::vector<Tensor> sites;
  double log_scale = 0.0;
  int sign = 1;
  bool zero = false;
};

Tensor make_site(std::size_t l, std::size_t p, std::size_t r, std::vector<double> data) {
  return Tensor({{"l", l}, {"p", p}, {"r", r}}, std::move(data));
}

std::size_t max_bond(const Mps& mps) {
  std::size_t m = 1;
  for (const auto& s : mps.sites) m = std::max({m, s.dim("l"), s.dim("r")});
  return m;
}

/// Rescales each site to unit max-abs; returns false on an all-zero site.
bool normalize(Mps& mps) {
  for (auto& s : mps.sites) {
    const double m = s.max_abs();
    if (m == 0.0) {
      mps.zero = true;
      return false;
    }
    s.scale(1.0 / m);
    mps.log_scale += std::log(m);
  }
  return true;
}

/// Left-canonicalizing QR sweep, then right-to-left truncated SVDs.
/// Returns the summed discarded weight of the truncations.
double compress(Mps& mps, const TruncationSpec& spec) {
  auto& s = mps.sites;
  const std::size_t n = s.size();
  if (n < 2 || max_bond(mps) <= spec.max_chi) return 0.0;

  for (std::size_t j = 0; j + 1 < n; ++j) {
    const std::size_t l = s[j].dim("l"), p = s[j].dim("p"), r = s[j].dim("r");
    RowMatrix q, rr;
    detail::thin_qr(detail::as_matrix(s[j], l * p, r), q, rr);
    const auto m = static_cast<std::size_t>(q.cols());
    s[j] = make_site(l, p, m, detail::to_vector(q));
    const std::size_t p2 = s[j + 1].dim("p"), r2 = s[j + 1].dim("r");
    RowMatrix next = rr * detail::as_matrix(s[j + 1], r, p2 * r2);
    s[j + 1] = make_site(m, p2, r2, detail::to_vector(next));
  }

  double discarded = 0.0;
  for (std::size_t j = n - 1; j >= 1; --j) {
    const std::size_t l = s[j].dim("l"), p = s[j].dim("p"), r = s[j].dim("r");
    auto svd = detail::truncated_svd(RowMatrix(detail::as_matrix(s[j], l, p * r)), spec);
    discarded += svd.discarded_weight;
    const auto chi = svd.s.size();
    s[j] = make_site(chi, p, r, detail::to_vector(svd.vt));
    RowMatrix us = svd.u;
    for (std::size_t c = 0; c < chi; ++c) us.col(static_cast<Eigen::Index>(c)) *= svd.s[c];
    const std::size_t l0 = s[j - 1].dim("l"), p0 = s[j - 1].dim("p");
    RowMatrix prev = detail::as_matrix(s[j - 1], l0 * p0, l) * us;
    s[j - 1] = make_site(l0, p0, chi, detail::to_vector(prev));
  }
  return discarded;
}

ContractionReport zero_report(std::size_t max_bond_reached, double discarded) {
  ContractionReport r;
  r.max_bond_reached = max_bond_reached;
  r.cumulative_discarded_weight = discarded;
  return r;
}

/// Contracts an MPS whose physical legs all have dim 1 into a scalar.
ContractionReport close_chain(Mps& mps, ContractionReport report) {
  std::vector<double> v{1.0};
  double log_scale = mps.log_scale;
  for (const auto& site : mps.sites) {
    const std::size_t l = site.dim("l"), p = site.dim("p"), r = site.dim("r");
    if (p != 1) throw DimensionError("boundary chain still has open physical legs");
    if (l != v.size()) throw DimensionError("boundary chain bond mismatch");
    std::vector<double> next(r, 0.0);
    for (std::size_t a = 0; a < l; ++a)
      for (std::size_t b = 0; b < r; ++b) next[b] += v[a] * site.data()[a * r + b];
    double m = 0.0;
    for (double x : next) m = std::max(m, std::abs(x));
    if (m == 0.0) return report;
    for (double& x : next) x /= m;
    log_scale += std::log(m);
    v = std::move(next);
  }
  if (v.size() != 1) throw DimensionError("boundary chain has an open right bond");
  if (v[0] == 0.0) return report;
  report.value_sign = mps.sign * (v[0] > 0 ? 1 : -1);
  report.value_log = log_scale + std::log(std::abs(v[0]));
  return report;
}

}  // namespace

void RowStructure::validate() const {
  if (rows.empty()) throw DimensionError("row structure has no rows");
  const std::size_t n = columns();
  if (n == 0) throw DimensionError("row structure has no columns");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != n) throw DimensionError("row " + std::to_string(i) + " has the wrong length");
    for (std::size_t j = 0; j < n; ++j) {
      const auto& t = rows[i][j];
      if (t.rank() != 4 || !t.has_leg("l") || !t.has_leg("r") || !t.has_leg("u") || !t.has_leg("d"))
        throw DimensionError("row tensors need exactly the legs l, r, u, d");
      if (j == 0 && t.dim("l") != 1) throw DimensionError("first column has an open left leg");
      if (j + 1 == n && t.dim("r") != 1) throw DimensionError("last column has an open right leg");
      if (j + 1 < n && t.dim("r") != rows[i][j + 1].dim("l")) throw DimensionError("horizontal bond mismatch");
      if (i == 0 && t.dim("u") != 1) throw DimensionError("top row has an open up leg");
      if (i + 1 == rows.size() && t.dim("d") != 1) throw DimensionError("bottom row has an open down leg");
      if (i + 1 < rows.size() && t.dim("d") != rows[i + 1][j].dim("u"))
        throw DimensionError("vertical bond mismatch");
    }
  }
}

TensorNetwork RowStructure::to_network() const {
  validate();
  TensorNetwork tn;
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < columns(); ++j) {
      Tensor t = rows[i][j]
                     .renamed("l", "h" + std::to_string(i) + "." + std::to_string(j))
                     .renamed("r", "h" + std::to_string(i) + "." + std::to_string(j + 1))
                     .renamed("u", "v" + std::to_string(i) + "." + std::to_string(j))
                     .renamed("d", "v" + std::to_string(i + 1) + "." + std::to_string(j));
      for (std::size_t a = t.rank(); a-- > 0;)
        if (t.leg(a).dim == 1) t = t.sliced(t.leg(a).name, 0);
      tn.add(std::move(t));
    }
  return tn;
}

ContractionReport boundary_contract_rows(const RowStructure& rs, const TruncationSpec& spec) {
  spec.validate();
  rs.validate();
  ContractionReport report;
  Mps mps;
  for (const auto& t : rs.rows.front())
    mps.sites.push_back(t.sliced("u", 0).renamed("d", "p").permuted({"l", "p", "r"}));
  if (!normalize(mps)) return zero_report(1, 0.0);

  const std::vector<FuseGroup> groups{{"l", {"l", "l2"}}, {"p", {"p2"}}, {"r", {"r", "r2"}}};
  for (std::size_t i = 0; i < rs.rows.size(); ++i) {
    if (i > 0) {
      for (std::size_t j = 0; j < rs.columns(); ++j) {
        const Tensor row = rs.rows[i][j].renamed("l", "l2").renamed("r", "r2").renamed("u", "p").renamed("d", "p2");
        mps.sites[j] = fuse(contract(mps.sites[j], row), groups);
      }
    }
    report.max_bond_reached = std::max(report.max_bond_reached, std::min(max_bond(mps), spec.max_chi));
    report.cumulative_discarded_weight += compress(mps, spec);
    if (!normalize(mps)) return zero_report(report.max_bond_reached, report.cumulative_discarded_weight);
  }
  return close_chain(mps, report);
}

std::size_t TriangularNetwork::bandwidth() const noexcept {
  std::size_t w = 0;
  for (const auto& [key, m] : couplings) w = std::max(w, key.second - key.first);
  return w;
}

void TriangularNetwork::validate() const {
  if (grid == 0) throw DimensionError("triangular network grid must be positive");
  for (const auto& d : diagonal)
    if (d.size() != grid) throw DimensionError("diagonal vector length differs from the grid");
  for (const auto& [key, m] : couplings) {
    if (key.first >= key.second || key.second >= size())
      throw DimensionError("coupling (" + std::to_string(key.first) + ", " + std::to_string(key.second) +
                           ") is not an upper-triangular pair");
    if (m.size() != grid * grid) throw DimensionError("coupling matrix size differs from grid^2");
  }
}

TensorNetwork TriangularNetwork::to_network() const {
  validate();
  const std::size_t n = size();
  std::vector<std::size_t> uses(n, 1);
  for (const auto& [key, m] : couplings) {
    ++uses[key.first];
    ++uses[key.second];
  }
  TensorNetwork tn;
  std::vector<CopyChain> chains;
  std::vector<std::size_t> next_use(n, 1);
  for (std::size_t i = 0; i < n; ++i) {
    chains.push_back(copy_chain(grid, uses[i], "x" + std::to_string(i)));
    for (auto& c : chains.back().copies) tn.add(std::move(c));
    if (uses[i] == 1) {
      // uncoupled variable: integrate it out on the spot
      tn.add(Tensor::scalar(std::accumulate(diagonal[i].begin(), diagonal[i].end(), 0.0)));
      continue;
    }
    tn.add(Tensor::vector(chains.back().legs[0], diagonal[i]));
  }
  for (const auto& [key, m] : couplings) {
    const auto& a = chains[key.first].legs[next_use[key.first]++];
    const auto& b = chains[key.second].legs[next_use[key.second]++];
    tn.add(Tensor({{a, grid}, {b, grid}}, m));
  }
  return tn;
}

ContractionReport boundary_contract_banded(const TriangularNetwork& tn, const TruncationSpec& spec) {
  spec.validate();
  tn.validate();
  const std::size_t n = tn.size(), g = tn.grid;
  ContractionReport report;
  if (n == 0) {
    report.value_sign = 1;
    report.value_log = 0.0;
    return report;
  }

  // One site per variable not yet integrated; step i absorbs the couplings
  // (i, j > i) and sums x_i, so sites[s] always holds variable i + s.
  Mps mps;
  for (std::size_t j = 0; j < n; ++j) mps.sites.push_back(make_site(1, g, 1, tn.diagonal[j]));
  double carry_log = 0.0;  // closed-off scalar factors
  int carry_sign = 1;

  for (std::size_t i = 0; i < n; ++i) {
    std::size_t last = 0;
    for (std::size_t s = 1; s < mps.sites.size(); ++s)
      if (tn.couplings.count({i, i + s})) last = s;

    // Head site with x_i moved into its right bond (uncoupled: summed).
    const Tensor& head = mps.sites[0];
    const std::size_t r0 = head.dim("r"), carried = last == 0 ? 1 : g;
    Tensor h = Tensor::zeros({{"l", 1}, {"r", r0 * carried}});
    for (std::size_t x = 0; x < g; ++x)
      for (std::size_t b = 0; b < r0; ++b) h.data()[b * carried + (last == 0 ? 0 : x)] += head.data()[x * r0 + b];

    // Couplings to later variables form an MPO whose bond is x_i.
    for (std::size_t s = 1; s <= last; ++s) {
      const Tensor& site = mps.sites[s];
      const std::size_t l = site.dim("l"), p = site.dim("p"), r = site.dim("r");
      auto it = tn.couplings.find({i, i + s});
      const double* c = it == tn.couplings.end() ? nullptr : it->second.data();
      const auto src = site.data();
      const std::size_t ro = s == last ? r : r * g;
      std::vector<double> out(l * g * p * ro, 0.0);
      for (std::size_t a = 0; a < l; ++a)
        for (std::size_t x = 0; x < g; ++x)
          for (std::size_t y = 0; y < p; ++y)
            for (std::size_t b = 0; b < r; ++b) {
              const double f = c ? c[x * g + y] : 1.0;
              out[((a * g + x) * p + y) * ro + (s == last ? b : b * g + x)] = src[(a * p + y) * r + b] * f;
            }
      mps.sites[s] = make_site(l * g, p, ro, std::move(out));
    }

    if (mps.sites.size() > 1) {
      mps.sites[1] = contract(h.renamed("l", "l'").renamed("r", "l"), mps.sites[1]).renamed("l'", "l").permuted({"l", "p", "r"});
    } else {
      const double v = h.value();
      if (v == 0.0) return zero_report(report.max_bond_reached, report.cumulative_discarded_weight);
      if (v < 0) carry_sign = -carry_sign;
      carry_log += std::log(std::abs(v));
    }
    mps.sites.erase(mps.sites.begin());

    report.max_bond_reached = std::max(report.max_bond_reached, std::min(max_bond(mps), spec.max_chi));
    report.cumulative_discarded_weight += compress(mps, spec);
    if (!normalize(mps)) return zero_report(report.max_bond_reached, report.cumulative_discarded_weight);
  }

  report.value_sign = carry_sign * mps.sign;
  report.value_log = carry_log + mps.log_scale;
  return report;
}

}  // namespace actn
