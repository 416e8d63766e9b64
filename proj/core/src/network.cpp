#include "actn/network.hpp"

#include <cmath>
#include <limits>
#include <map>

#include "actn/error.hpp"

namespace actn {

void TensorNetwork::check_compatible(const Tensor& t, std::size_t skip) const {
  for (const auto& leg : t.legs()) {
    std::size_t uses = 0;
    for (std::size_t id = 0; id < tensors_.size(); ++id) {
      if (id == skip || !tensors_[id].has_leg(leg.name)) continue;
      ++uses;
      if (tensors_[id].dim(leg.name) != leg.dim)
        throw DimensionError("bond '" + leg.name + "' joins unequal dimensions");
    }
    if (uses >= 2) throw DimensionError("leg name '" + leg.name + "' already joins two tensors");
  }
}

std::size_t TensorNetwork::add(Tensor t) {
  check_compatible(t, std::numeric_limits<std::size_t>::max());
  tensors_.push_back(std::move(t));
  return tensors_.size() - 1;
}

void TensorNetwork::replace(std::size_t id, Tensor t) {
  if (id >= tensors_.size()) throw DimensionError("tensor id out of range");
  check_compatible(t, id);
  tensors_[id] = std::move(t);
}

std::vector<Leg> TensorNetwork::open_legs() const {
  std::map<std::string, std::pair<std::size_t, std::size_t>> count;  // name -> (uses, dim)
  std::vector<std::string> order;
  for (const auto& t : tensors_)
    for (const auto& leg : t.legs()) {
      auto [it, fresh] = count.try_emplace(leg.name, 0, leg.dim);
      if (fresh) order.push_back(leg.name);
      ++it->second.first;
    }
  std::vector<Leg> out;
  for (const auto& name : order)
    if (count[name].first == 1) out.push_back({name, count[name].second});
  return out;
}

std::vector<std::string> TensorNetwork::bonds() const {
  std::map<std::string, std::size_t> count;
  std::vector<std::string> order;
  for (const auto& t : tensors_)
    for (const auto& leg : t.legs())
      if (count[leg.name]++ == 0) order.push_back(leg.name);
  std::vector<std::string> out;
  for (const auto& name : order)
    if (count[name] == 2) out.push_back(name);
  return out;
}

std::vector<std::size_t> TensorNetwork::endpoints(const std::string& leg) const {
  std::vector<std::size_t> ids;
  for (std::size_t id = 0; id < tensors_.size(); ++id)
    if (tensors_[id].has_leg(leg)) ids.push_back(id);
  return ids;
}

void TensorNetwork::scale(double factor) {
  if (factor == 0.0) {
    sign_ = 0;
    log_scale_ = -std::numeric_limits<double>::infinity();
    return;
  }
  if (factor < 0) sign_ = -sign_;
  log_scale_ += std::log(std::abs(factor));
}

std::string TensorNetwork::fresh_leg(const std::string& prefix) {
  for (;;) {
    std::string name = prefix + "#" + std::to_string(next_fresh_++);
    bool used = false;
    for (const auto& t : tensors_)
      if (t.has_leg(name)) {
        used = true;
        break;
      }
    if (!used) return name;
  }
}

}  // namespace actn
