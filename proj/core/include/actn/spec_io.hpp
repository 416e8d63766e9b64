#pragma once

// Flat key=value text for integrand configs. '#' starts a comment; lists
// are comma-separated.

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace actn {

/// Parsed key=value lines. Keys are unique; later duplicates are an error.
class KeyValues {
 public:
  static KeyValues parse(std::string_view text);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::string& get(const std::string& key) const;
  void set(const std::string& key, std::string value) { values_[key] = std::move(value); }
  void erase(const std::string& key) { values_.erase(key); }
  const std::map<std::string, std::string>& entries() const noexcept { return values_; }

  std::size_t get_size(const std::string& key) const;
  std::uint64_t get_u64(const std::string& key) const;
  double get_double(const std::string& key) const;
  std::vector<std::size_t> get_size_list(const std::string& key) const;
  std::vector<std::uint64_t> get_u64_list(const std::string& key) const;
  std::vector<double> get_double_list(const std::string& key) const;

 private:
  std::map<std::string, std::string> values_;
};

enum class Family {
  polynomial_power,
  polynomial_perturbed,
  polynomial_general,
  polynomial_sin,
  gaussian,
  mera,
  expr,
};

std::string to_string(Family f);
/// Throws SpecError on an unknown name.
Family family_from_string(std::string_view name);

/// Parameters of one integrand family plus the χ list. Fields not used by a
/// family keep their defaults and are not written.
struct FamilyConfig {
  Family family = Family::polynomial_power;
  std::size_t n = 0;
  std::size_t k = 0;      ///< polynomial factors
  std::size_t w = 0;      ///< gaussian band width
  std::size_t grid = 0;   ///< G
  double delta = 0.0;
  double lambda = -1.0;
  double c = 0.0;
  std::uint64_t seed = 0;
  std::vector<std::size_t> chi;
  std::string rule;  ///< "uniform", "gauss", or empty for the family default

  void validate() const;
  friend bool operator==(const FamilyConfig&, const FamilyConfig&) = default;
};

/// Reads the family keys; other keys are ignored.
FamilyConfig family_config_from(const KeyValues& kv);
KeyValues to_key_values(const FamilyConfig& config);

std::string to_text(const KeyValues& kv);
std::string to_text(const FamilyConfig& config);
FamilyConfig family_config_from_text(std::string_view text);

}  // namespace actn
