#include "actn/spec_io.hpp"

#include <charconv>
#include <cstdio>

#include "actn/error.hpp"

namespace actn {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(const std::string& key, std::string_view text) {
  text = trim(text);
  T v{};
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || end != text.data() + text.size() || text.empty())
    throw SpecError("key '" + key + "': cannot read '" + std::string(text) + "' as a number");
  return v;
}

template <typename T>
std::vector<T> parse_list(const std::string& key, std::string_view text) {
  std::vector<T> out;
  while (true) {
    const auto comma = text.find(',');
    out.push_back(parse_number<T>(key, text.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

std::string format_double(double v) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

constexpr std::pair<Family, std::string_view> kFamilies[] = {
    {Family::polynomial_power, "polynomial-power"},
    {Family::polynomial_perturbed, "polynomial-perturbed"},
    {Family::polynomial_general, "polynomial-general"},
    {Family::polynomial_sin, "polynomial-sin"},
    {Family::gaussian, "gaussian"},
    {Family::mera, "mera"},
    {Family::expr, "expr"},
};

bool is_polynomial(Family f) {
  return f == Family::polynomial_power || f == Family::polynomial_perturbed || f == Family::polynomial_general ||
         f == Family::polynomial_sin;
}

}  // namespace

KeyValues KeyValues::parse(std::string_view text) {
  KeyValues kv;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw SpecError("line " + std::to_string(line_no) + ": expected key=value");
    const std::string key(trim(line.substr(0, eq)));
    if (key.empty()) throw SpecError("line " + std::to_string(line_no) + ": empty key");
    if (kv.has(key)) throw SpecError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    kv.values_[key] = std::string(trim(line.substr(eq + 1)));
  }
  return kv;
}

const std::string& KeyValues::get(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw SpecError("missing key '" + key + "'");
  return it->second;
}

std::size_t KeyValues::get_size(const std::string& key) const { return parse_number<std::size_t>(key, get(key)); }
std::uint64_t KeyValues::get_u64(const std::string& key) const { return parse_number<std::uint64_t>(key, get(key)); }
double KeyValues::get_double(const std::string& key) const { return parse_number<double>(key, get(key)); }
std::vector<std::size_t> KeyValues::get_size_list(const std::string& key) const {
  return parse_list<std::size_t>(key, get(key));
}
std::vector<std::uint64_t> KeyValues::get_u64_list(const std::string& key) const {
  return parse_list<std::uint64_t>(key, get(key));
}
std::vector<double> KeyValues::get_double_list(const std::string& key) const {
  return parse_list<double>(key, get(key));
}

std::string to_string(Family f) {
  for (const auto& [fam, name] : kFamilies)
    if (fam == f) return std::string(name);
  return "unknown";
}

Family family_from_string(std::string_view name) {
  for (const auto& [fam, n] : kFamilies)
    if (n == name) return fam;
  throw SpecError("unknown family '" + std::string(name) + "'");
}

void FamilyConfig::validate() const {
  if (family != Family::expr && n == 0) throw SpecError("N must be positive");
  if (is_polynomial(family) && k == 0) throw SpecError("k must be positive");
  if (family != Family::expr && grid == 0) throw SpecError("G must be positive");
  if (delta < 0) throw SpecError("delta must be nonnegative");
  if (family == Family::polynomial_general && !(lambda < 1.0)) throw SpecError("lambda must be below 1");
  if (!rule.empty() && rule != "uniform" && rule != "gauss") throw SpecError("rule must be 'uniform' or 'gauss'");
  for (auto x : chi)
    if (x == 0) throw SpecError("chi values must be positive");
}

FamilyConfig family_config_from(const KeyValues& kv) {
  FamilyConfig c;
  c.family = family_from_string(kv.get("family"));
  if (kv.has("N")) c.n = kv.get_size("N");
  if (kv.has("k")) c.k = kv.get_size("k");
  if (kv.has("W")) c.w = kv.get_size("W");
  if (kv.has("G")) c.grid = kv.get_size("G");
  if (kv.has("delta")) c.delta = kv.get_double("delta");
  if (kv.has("lambda")) c.lambda = kv.get_double("lambda");
  if (kv.has("c")) c.c = kv.get_double("c");
  if (kv.has("seed")) c.seed = kv.get_u64("seed");
  if (kv.has("chi")) c.chi = kv.get_size_list("chi");
  if (kv.has("rule")) c.rule = kv.get("rule");
  c.validate();
  return c;
}

KeyValues to_key_values(const FamilyConfig& c) {
  KeyValues kv;
  kv.set("family", to_string(c.family));
  if (c.n) kv.set("N", std::to_string(c.n));
  if (is_polynomial(c.family)) kv.set("k", std::to_string(c.k));
  if (c.family == Family::gaussian) kv.set("W", std::to_string(c.w));
  if (c.grid) kv.set("G", std::to_string(c.grid));
  if (c.family == Family::polynomial_perturbed || c.family == Family::gaussian) kv.set("delta", format_double(c.delta));
  if (c.family == Family::polynomial_general) kv.set("lambda", format_double(c.lambda));
  if (c.family == Family::polynomial_sin) kv.set("c", format_double(c.c));
  kv.set("seed", std::to_string(c.seed));
  if (!c.chi.empty()) {
    std::string s;
    for (std::size_t i = 0; i < c.chi.size(); ++i) s += (i ? "," : "") + std::to_string(c.chi[i]);
    kv.set("chi", s);
  }
  if (!c.rule.empty()) kv.set("rule", c.rule);
  return kv;
}

std::string to_text(const KeyValues& kv) {
  std::string out;
  for (const auto& [k, v] : kv.entries()) out += k + "=" + v + "\n";
  return out;
}

std::string to_text(const FamilyConfig& config) { return to_text(to_key_values(config)); }

FamilyConfig family_config_from_text(std::string_view text) { return family_config_from(KeyValues::parse(text)); }

}  // namespace actn
