#include "actn/contraction.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

#include "actn/error.hpp"
#include "actn/random.hpp"

namespace actn {

double ContractionReport::value() const {
  if (value_sign == 0) return 0.0;
  return value_sign * std::exp(value_log);
}

double relative_error(const ContractionReport& est, const ContractionReport& ref) {
  if (ref.value_sign == 0) return std::abs(est.value());
  if (est.value_sign == 0) return 1.0;
  // est/ref = s * exp(d)
  const double d = est.value_log - ref.value_log;
  if (est.value_sign == ref.value_sign) return std::abs(std::expm1(d));
  return 1.0 + std::exp(d);
}

double relative_error(const ContractionReport& est, double ref) {
  ContractionReport r;
  if (ref != 0.0) {
    r.value_sign = ref > 0 ? 1 : -1;
    r.value_log = std::log(std::abs(ref));
  }
  return relative_error(est, r);
}

namespace {

std::size_t element_count_after(const Tensor& a, const Tensor& b) {
  std::size_t n = 1;
  for (const auto& leg : a.legs())
    if (!b.has_leg(leg.name)) n *= leg.dim;
  for (const auto& leg : b.legs())
    if (!a.has_leg(leg.name)) n *= leg.dim;
  return n;
}

}  // namespace

ScaledTensor contract_network(const TensorNetwork& tn, const ExactOptions& options) {
  ScaledTensor out;
  out.log_scale = tn.log_scale();
  out.sign = tn.sign();
  if (tn.size() == 0) {
    out.tensor = Tensor::scalar(1.0);
    return out;
  }

  std::vector<std::optional<Tensor>> live;
  for (const auto& t : tn.tensors()) live.emplace_back(t);

  // Tie-break key per leg name: the name itself, or a seeded random rank.
  std::map<std::string, std::uint64_t> shuffle_key;
  if (options.shuffle_seed) {
    CounterRng rng(*options.shuffle_seed);
    std::uint64_t n = 0;
    for (const auto& b : tn.bonds()) shuffle_key[b] = rng.bits(n++);
  }

  auto normalize = [&](Tensor& t) -> bool {
    const double m = t.max_abs();
    if (m == 0.0) return false;
    t.scale(1.0 / m);
    out.log_scale += std::log(m);
    return true;
  };
  auto zero_result = [&]() {
    out.sign = 0;
    out.log_scale = -std::numeric_limits<double>::infinity();
    out.tensor = Tensor::zeros(tn.open_legs());
    return out;
  };
  for (auto& t : live)
    if (!normalize(*t)) return zero_result();

  std::map<std::string, std::vector<std::size_t>> owners;
  for (std::size_t id = 0; id < live.size(); ++id)
    for (const auto& leg : live[id]->legs()) owners[leg.name].push_back(id);

  for (;;) {
    // Best (cost, tie key, tie name, a, b) over all live bonds.
    bool found = false;
    std::tuple<std::size_t, std::uint64_t, std::string> best;
    std::size_t best_a = 0, best_b = 0;
    for (const auto& [name, ids] : owners) {
      if (ids.size() != 2) continue;
      const auto a = std::min(ids[0], ids[1]), b = std::max(ids[0], ids[1]);
      const auto key = std::make_tuple(element_count_after(*live[a], *live[b]),
                                       options.shuffle_seed ? shuffle_key[name] : 0, name);
      if (!found || key < best) {
        best = key;
        best_a = a;
        best_b = b;
        found = true;
      }
    }
    if (!found) break;

    Tensor merged = contract(*live[best_a], *live[best_b]);
    for (const auto& leg : live[best_a]->legs())
      if (live[best_b]->has_leg(leg.name)) owners.erase(leg.name);
    for (const auto& leg : live[best_b]->legs()) {
      auto it = owners.find(leg.name);
      if (it != owners.end()) std::replace(it->second.begin(), it->second.end(), best_b, best_a);
    }
    live[best_b].reset();
    if (!normalize(merged)) return zero_result();
    live[best_a] = std::move(merged);
  }

  // Remaining tensors are disconnected components; join by outer product.
  std::optional<Tensor> acc;
  for (auto& t : live) {
    if (!t) continue;
    acc = acc ? outer(*acc, *t) : std::move(*t);
  }
  out.tensor = std::move(*acc);
  return out;
}

ContractionReport contract_exact(const TensorNetwork& tn, const ExactOptions& options) {
  const auto open = tn.open_legs();
  if (!open.empty()) throw DimensionError("network has open leg '" + open.front().name + "'");
  ContractionReport report;
  for (const auto& t : tn.tensors())
    for (const auto& leg : t.legs()) report.max_bond_reached = std::max(report.max_bond_reached, leg.dim);
  const auto result = contract_network(tn, options);
  if (result.sign == 0) return report;
  const double v = result.tensor.value();
  if (v == 0.0) return report;
  report.value_sign = result.sign * (v > 0 ? 1 : -1);
  report.value_log = result.log_scale + std::log(std::abs(v));
  return report;
}

TensorNetwork insert_projector_pair(const TensorNetwork& tn, std::span<const ProjectedBond> bonds,
                                    const Tensor& p_left, const Tensor& p_right, const std::string& link_leg,
                                    std::string* link) {
  if (p_left.rank() != bonds.size() + 1 || p_right.rank() != bonds.size() + 1)
    throw DimensionError("projector rank must be the bond count plus one");
  if (p_left.dim(link_leg) != p_right.dim(link_leg)) throw DimensionError("projector link dims differ");

  TensorNetwork out = tn;
  const std::string link_name = out.fresh_leg("link");
  Tensor left = p_left.renamed(link_leg, link_name);
  Tensor right = p_right.renamed(link_leg, link_name);

  for (const auto& bond : bonds) {
    const auto ends = out.endpoints(bond.name);
    if (ends.size() != 2 || (ends[0] != bond.left && ends[1] != bond.left))
      throw DimensionError("'" + bond.name + "' is not a bond of the given tensor");
    const std::size_t other = ends[0] == bond.left ? ends[1] : ends[0];
    const std::size_t d = out.tensor(bond.left).dim(bond.name);
    if (p_left.dim(bond.name) != d || p_right.dim(bond.name) != d)
      throw DimensionError("projector leg '" + bond.name + "' does not match the bond dimension");
    const std::string rewired = out.fresh_leg(bond.name);
    out.replace(other, out.tensor(other).renamed(bond.name, rewired));
    right = right.renamed(bond.name, rewired);
  }
  out.add(std::move(left));
  out.add(std::move(right));
  if (link) *link = link_name;
  return out;
}

TensorNetwork insert_projector_pair(const TensorNetwork& tn, const std::string& bond, const Tensor& p_left,
                                    const Tensor& p_right, const std::string& link_leg) {
  const auto ends = tn.endpoints(bond);
  if (ends.size() != 2) throw DimensionError("'" + bond + "' is not a bond");
  const ProjectedBond b{bond, std::min(ends[0], ends[1])};
  return insert_projector_pair(tn, std::span<const ProjectedBond>(&b, 1), p_left, p_right, link_leg);
}

}  // namespace actn
