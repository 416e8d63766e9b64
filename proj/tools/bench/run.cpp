#include "run.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <cstdio>
#include <mutex>
#include <optional>
#include <ostream>
#include <set>
#include <thread>

#include "actn/boundary.hpp"
#include "actn/expr.hpp"
#include "actn/gaussian.hpp"
#include "actn/mera.hpp"
#include "actn/polynomial.hpp"
#include "actn/qmc.hpp"
#include "actn/random.hpp"

namespace actn::bench {

namespace {

constexpr std::size_t kBruteMaxN = 6;
constexpr double kBruteMaxPoints = 1e8;
constexpr double kReferenceFlag = 1e-12;

const std::set<std::string> kRunKeys{"family", "N",       "k",       "W",     "G",       "delta",  "lambda",
                                     "c",      "seed",    "seeds",   "chi",   "rule",    "n_samples",
                                     "methods", "reference", "expr", "out", "threads", "batch", "report_every"};

bool is_polynomial(Family f) {
  return f == Family::polynomial_power || f == Family::polynomial_perturbed || f == Family::polynomial_general ||
         f == Family::polynomial_sin;
}

ContractionReport report_of(double v) {
  ContractionReport r;
  if (v != 0.0) {
    r.value_sign = v > 0 ? 1 : -1;
    r.value_log = std::log(std::abs(v));
  } else if (std::isnan(v)) {
    r.value_log = v;
  }
  return r;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void collect_functions(const expr::Node& node, std::set<std::string>& out) {
  std::visit(
      [&](const auto& k) {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, expr::FunctionRef>) {
          out.insert(k.name);
        } else if constexpr (std::is_same_v<T, expr::Add> || std::is_same_v<T, expr::Mul>) {
          collect_functions(*k.left, out);
          collect_functions(*k.right, out);
        } else if constexpr (std::is_same_v<T, expr::Pow>) {
          collect_functions(*k.base, out);
        }
      },
      node.kind);
}

/// One integrand instance at a fixed (seed, G).
struct Instance {
  Family family;
  std::optional<PolynomialSpec> poly;
  std::optional<GaussianSpec> gauss;
  std::optional<MeraSpec> mera;
  expr::NodePtr ast;
  expr::CompilationEnv env;
  std::vector<std::string> variables;
};

Instance make_instance(const RunConfig& cfg, std::uint64_t seed, std::size_t g) {
  const auto& f = cfg.family;
  Instance in{f.family, {}, {}, {}, nullptr, {}, {}};
  switch (f.family) {
    case Family::polynomial_power:
      in.poly = make_power_polynomial(f.n, f.k, g, seed);
      break;
    case Family::polynomial_perturbed:
      in.poly = make_perturbed_polynomial(f.n, f.k, g, f.delta, seed);
      break;
    case Family::polynomial_general:
      in.poly = make_general_polynomial(f.n, f.k, g, f.lambda, seed);
      break;
    case Family::polynomial_sin:
      in.poly = make_sin_polynomial(f.n, f.k, f.c, g, seed);
      break;
    case Family::gaussian:
      in.gauss = make_banded_A(f.n, f.w, g, f.delta, seed);
      if (f.rule == "uniform") in.gauss->rule = uniform_rule(g, {-1.0, 1.0});
      break;
    case Family::mera:
      in.mera = make_mera(f.n, g, seed);
      break;
    case Family::expr: {
      in.ast = expr::parse(cfg.expr);
      std::set<std::string> names;
      collect_functions(*in.ast, names);
      std::uint64_t stream = 0;
      for (const auto& name : names) {
        const CounterRng rng(seed, stream++);
        std::vector<double> v(g);
        for (std::size_t p = 0; p < g; ++p) v[p] = rng.uniform(p, -1.0, 1.0);
        in.env.bindings[name] = std::move(v);
      }
      break;
    }
  }
  // Random-sample polynomials carry no nodes, so only the weights change.
  if (in.poly && !in.poly->sin && f.rule == "gauss") in.poly->rule = gauss_legendre(g, {0.0, 1.0});
  return in;
}

QuadratureRule expr_rule(const RunConfig& cfg, std::size_t g) {
  return cfg.family.rule == "uniform" ? uniform_rule(g, {0.0, 1.0}) : gauss_legendre(g, {0.0, 1.0});
}

std::vector<std::string> expr_variables(const expr::Node& node) {
  std::vector<std::string> out;
  std::function<void(const expr::Node&)> walk = [&](const expr::Node& n) {
    std::visit(
        [&](const auto& k) {
          using T = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<T, expr::FunctionRef>) {
            if (std::find(out.begin(), out.end(), k.variable) == out.end()) out.push_back(k.variable);
          } else if constexpr (std::is_same_v<T, expr::Add> || std::is_same_v<T, expr::Mul>) {
            walk(*k.left);
            walk(*k.right);
          } else if constexpr (std::is_same_v<T, expr::Pow>) {
            walk(*k.base);
          }
        },
        n.kind);
  };
  walk(node);
  return out;
}

double grid_points(std::size_t g, std::size_t n) { return std::pow(static_cast<double>(g), static_cast<double>(n)); }

void check_brute_allowed(const RunConfig& cfg, std::size_t g, std::size_t n) {
  if (cfg.family.family == Family::mera) throw UsageError("brute-force is not available for family=mera");
  if (n > kBruteMaxN)
    throw UsageError("brute-force refused: N=" + std::to_string(n) + " exceeds " + std::to_string(kBruteMaxN));
  if (grid_points(g, n) > kBruteMaxPoints)
    throw UsageError("brute-force refused: G^N exceeds " + format_double(kBruteMaxPoints) + " points");
}

double expr_grid_sum(const Instance& in, const QuadratureRule& rule) {
  std::vector<std::size_t> idx(in.variables.size(), 0);
  double total = 0.0;
  std::map<std::string, std::size_t> point;
  for (;;) {
    double w = 1.0;
    for (std::size_t a = 0; a < idx.size(); ++a) {
      point[in.variables[a]] = idx[a];
      w *= rule.weights[idx[a]];
    }
    total += w * expr::interpret(*in.ast, in.env, point);
    std::size_t a = 0;
    while (a < idx.size() && ++idx[a] == rule.size()) idx[a++] = 0;
    if (a == idx.size()) return total;
  }
}

std::size_t variable_count(const RunConfig& cfg, const Instance& in) {
  return cfg.family.family == Family::expr ? in.variables.size() : cfg.family.n;
}

double brute(const RunConfig& cfg, const Instance& in, std::size_t g) {
  check_brute_allowed(cfg, g, variable_count(cfg, in));
  if (in.poly) return brute_force_integral(*in.poly);
  if (in.gauss) return brute_force_integral(*in.gauss);
  return expr_grid_sum(in, in.env.grids.begin()->second);
}

std::vector<std::size_t> chi_list(const RunConfig& cfg) {
  if (!cfg.family.chi.empty()) return cfg.family.chi;
  const auto& f = cfg.family;
  if (is_polynomial(f.family)) return {std::size_t{1} << std::min<std::size_t>(f.k, 20)};
  if (f.family == Family::gaussian) {
    const auto g = *std::max_element(cfg.grids.begin(), cfg.grids.end());
    return {static_cast<std::size_t>(std::min(grid_points(g, f.w), 4096.0))};
  }
  return {0};
}

/// TN estimate at one chi (chi is ignored by mera and expr).
ContractionReport tn_estimate(const Instance& in, std::size_t chi) {
  if (in.poly) return boundary_contract_rows(build_polynomial_tn(*in.poly), {chi});
  if (in.gauss) return boundary_contract_banded(build_gaussian_tn(*in.gauss), {chi});
  if (in.mera) return report_of(mera_integral_structured(*in.mera));
  return expr::integrate(expr::compile(*in.ast, in.env), in.env);
}

QmcEstimate qmc_estimate(const RunConfig& cfg, const Instance& in, std::size_t n, std::ostream* log) {
  QmcOptions opt;
  opt.n_samples = n;
  opt.batch = cfg.batch;
  if (cfg.report_every > 0 && log) {
    opt.report_every = cfg.report_every;
    opt.on_report = [log](const QmcEstimate& e) {
      *log << "  qmc " << e.n_samples << " samples: " << format_double(e.value()) << "\n";
    };
  }
  if (in.poly) {
    if (!in.poly->sin && cfg.family.rule == "gauss")
      throw UsageError("qmc on random-sample polynomials needs the uniform rule");
    const std::vector<Interval> box(in.poly->n, in.poly->rule.interval);
    const auto& spec = *in.poly;
    return qmc_integrate([&spec](std::span<const double> x) { return spec.evaluate(x); }, box, opt);
  }
  if (in.gauss) {
    const std::vector<Interval> box(in.gauss->n, Interval{-1.0, 1.0});
    const auto& spec = *in.gauss;
    return qmc_integrate_log([&spec](std::span<const double> x) { return spec.log_value(x); }, box, opt);
  }
  throw UsageError("qmc is not available for family=" + to_string(cfg.family.family));
}

double analytic(const RunConfig& cfg, const Instance& in) {
  const auto& f = cfg.family;
  if (f.family == Family::polynomial_power) return recursion_integral(*in.poly);
  if (f.family == Family::mera) return std::pow(2.0, static_cast<double>(f.n));
  if (f.family == Family::polynomial_sin && f.k == 1) return static_cast<double>(f.n) * f.c;
  throw UsageError("no analytic reference for family=" + to_string(f.family));
}

Reference default_reference(const RunConfig& cfg) {
  const auto& f = cfg.family;
  if (f.family == Family::polynomial_power || f.family == Family::mera) return Reference::analytic;
  const auto g = *std::max_element(cfg.grids.begin(), cfg.grids.end());
  if (f.family == Family::expr) return Reference::brute_force;
  if (f.n <= kBruteMaxN && grid_points(g, f.n) <= 1e6) return Reference::brute_force;
  return Reference::converged_tn;
}

/// Computes cells on `threads` workers and emits them strictly in index order.
void ordered_parallel(std::size_t count, std::size_t threads, const std::function<ConvergenceRecord(std::size_t)>& cell,
                      const RecordSink& sink) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) sink(cell(i));
    return;
  }
  std::vector<std::optional<ConvergenceRecord>> done(count);
  std::exception_ptr failure;
  std::mutex mu;
  std::condition_variable cv;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < count;) {
      std::optional<ConvergenceRecord> r;
      std::exception_ptr err;
      try {
        r = cell(i);
      } catch (...) {
        err = std::current_exception();
      }
      std::lock_guard lock(mu);
      if (err && !failure) failure = err;
      done[i] = std::move(r);
      cv.notify_all();
      if (failure) return;
    }
  };
  std::vector<std::jthread> pool;
  for (std::size_t t = 0; t < std::min(threads, count); ++t) pool.emplace_back(worker);
  for (std::size_t i = 0; i < count; ++i) {
    std::unique_lock lock(mu);
    cv.wait(lock, [&] { return done[i].has_value() || failure; });
    if (failure) {
      next = count;
      lock.unlock();
      pool.clear();
      std::rethrow_exception(failure);
    }
    const auto rec = *done[i];
    lock.unlock();
    sink(rec);
  }
}

ConvergenceRecord base_record(const RunConfig& cfg, std::uint64_t seed, std::size_t g, double reference) {
  ConvergenceRecord r;
  r.family = to_string(cfg.family.family);
  r.seed = seed;
  r.grid = g;
  r.reference = reference;
  return r;
}

void finish(ConvergenceRecord& r, const ContractionReport& est) {
  r.estimate_log = est.value_log;
  r.estimate_sign = est.value_sign;
  r.max_bond_reached = est.max_bond_reached;
  r.discarded_weight = est.cumulative_discarded_weight;
  if (!std::isnan(r.reference)) r.relative_error = relative_error(est, r.reference);
}

double seconds_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

Instance instance_for(const RunConfig& cfg, std::uint64_t seed, std::size_t g) {
  auto in = make_instance(cfg, seed, g);
  if (cfg.family.family == Family::expr) {
    in.variables = expr_variables(*in.ast);
    for (const auto& v : in.variables) in.env.grids[v] = expr_rule(cfg, g);
  }
  return in;
}

}  // namespace

std::string to_string(Method m) {
  switch (m) {
    case Method::tn:
      return "tn";
    case Method::qmc:
      return "qmc";
    case Method::recursion:
      return "recursion";
    case Method::brute:
      return "brute";
  }
  return "?";
}

Method method_from_string(std::string_view s) {
  for (auto m : {Method::tn, Method::qmc, Method::recursion, Method::brute})
    if (to_string(m) == s) return m;
  throw UsageError("unknown method '" + std::string(s) + "' (tn, qmc, recursion, brute)");
}

std::string to_string(Reference r) {
  switch (r) {
    case Reference::brute_force:
      return "brute-force";
    case Reference::converged_tn:
      return "converged-tn";
    case Reference::analytic:
      return "analytic";
    case Reference::none:
      return "none";
  }
  return "?";
}

Reference reference_from_string(std::string_view s) {
  for (auto r : {Reference::brute_force, Reference::converged_tn, Reference::analytic, Reference::none})
    if (to_string(r) == s) return r;
  throw UsageError("unknown reference '" + std::string(s) + "' (brute-force, converged-tn, analytic, none)");
}

RunConfig run_config_from(const KeyValues& kv) {
  for (const auto& [key, value] : kv.entries())
    if (!kRunKeys.count(key)) throw UsageError("unknown config key '" + key + "'");
  if (!kv.has("family")) throw UsageError("config needs a family");
  if (!kv.has("G")) throw UsageError("config needs G");

  RunConfig cfg;
  cfg.grids = kv.get_size_list("G");
  KeyValues family_kv = kv;
  family_kv.set("G", std::to_string(cfg.grids.front()));
  cfg.family = family_config_from(family_kv);
  for (auto g : cfg.grids)
    if (g == 0) throw UsageError("G values must be positive");

  if (kv.has("seeds")) {
    if (kv.has("seed")) throw UsageError("give either seed or seeds");
    cfg.seeds = kv.get_u64_list("seeds");
  } else {
    cfg.seeds = {cfg.family.seed};
  }
  if (kv.has("n_samples")) cfg.n_samples = kv.get_size_list("n_samples");
  if (kv.has("methods")) {
    cfg.methods.clear();
    std::string list = kv.get("methods");
    std::size_t pos = 0;
    while (pos <= list.size()) {
      const auto end = std::min(list.find(',', pos), list.size());
      std::string item = list.substr(pos, end - pos);
      item.erase(0, item.find_first_not_of(' '));
      item.erase(item.find_last_not_of(' ') + 1);
      cfg.methods.push_back(method_from_string(item));
      pos = end + 1;
    }
  } else if (!cfg.n_samples.empty()) {
    cfg.methods.push_back(Method::qmc);
  }
  if (kv.has("expr")) cfg.expr = kv.get("expr");
  if (kv.has("out")) cfg.out = kv.get("out");
  if (kv.has("threads")) cfg.threads = kv.get_size("threads");
  if (kv.has("batch")) cfg.batch = kv.get_size("batch");
  if (kv.has("report_every")) cfg.report_every = kv.get_size("report_every");

  if (cfg.family.family == Family::expr && cfg.expr.empty()) throw UsageError("family=expr needs an expr key");
  if (cfg.family.family != Family::expr && !cfg.expr.empty()) throw UsageError("expr is only valid with family=expr");
  if (cfg.seeds.empty() || cfg.grids.empty()) throw UsageError("sweep lists must be nonempty");
  if (cfg.threads == 0 || cfg.batch == 0) throw UsageError("threads and batch must be positive");
  for (auto m : cfg.methods)
    if (m == Method::qmc && cfg.n_samples.empty()) throw UsageError("method qmc needs n_samples");
  cfg.reference = kv.has("reference") ? reference_from_string(kv.get("reference")) : default_reference(cfg);
  return cfg;
}

std::string csv_header() {
  return "family,seed,method,chi,G,n_samples,estimate_log,estimate_sign,reference,relative_error,elapsed_seconds,"
         "max_bond_reached,discarded_weight";
}

std::string to_csv(const ConvergenceRecord& r) {
  return r.family + "," + std::to_string(r.seed) + "," + to_string(r.method) + "," + std::to_string(r.chi) + "," +
         std::to_string(r.grid) + "," + std::to_string(r.n_samples) + "," + format_double(r.estimate_log) + "," +
         std::to_string(r.estimate_sign) + "," + format_double(r.reference) + "," + format_double(r.relative_error) +
         "," + format_double(r.elapsed_seconds) + "," + std::to_string(r.max_bond_reached) + "," +
         format_double(r.discarded_weight);
}

void run(const RunConfig& cfg, const RecordSink& sink, std::ostream* log) {
  const auto& f = cfg.family;
  for (auto m : cfg.methods) {
    if (m == Method::recursion && f.family != Family::polynomial_power)
      throw UsageError("method recursion needs family=polynomial-power");
    if (m == Method::qmc && (f.family == Family::mera || f.family == Family::expr))
      throw UsageError("qmc is not available for family=" + to_string(f.family));
  }
  const auto chis = chi_list(cfg);
  const auto g_max = *std::max_element(cfg.grids.begin(), cfg.grids.end());
  const auto chi_max = *std::max_element(chis.begin(), chis.end());

  for (auto seed : cfg.seeds) {
    // converged-tn: one reference per seed at the largest chi and G.
    std::optional<double> seed_reference;
    if (cfg.reference == Reference::converged_tn) {
      const auto est = tn_estimate(instance_for(cfg, seed, g_max), chi_max);
      if (est.cumulative_discarded_weight > kReferenceFlag && log)
        *log << "warning: seed " << seed << " reference discarded weight "
             << format_double(est.cumulative_discarded_weight) << " exceeds " << format_double(kReferenceFlag) << "\n";
      seed_reference = est.value();
    }
    for (auto g : cfg.grids) {
      const auto in = instance_for(cfg, seed, g);
      double reference = std::numeric_limits<double>::quiet_NaN();
      switch (cfg.reference) {
        case Reference::brute_force:
          reference = brute(cfg, in, g);
          break;
        case Reference::analytic:
          reference = analytic(cfg, in);
          break;
        case Reference::converged_tn:
          reference = *seed_reference;
          break;
        case Reference::none:
          break;
      }
      if (log) *log << "seed " << seed << " G " << g << " reference " << format_double(reference) << "\n";
      if (reference == 0.0 && log)
        *log << "warning: seed " << seed << " G " << g << " reference is 0; relative_error holds absolute error\n";

      std::vector<std::function<ConvergenceRecord()>> cells;
      for (auto m : cfg.methods) {
        if (m == Method::tn) {
          const auto tn_chis = in.poly || in.gauss ? chis : std::vector<std::size_t>{0};
          for (auto chi : tn_chis)
            cells.push_back([&, chi] {
              auto r = base_record(cfg, seed, g, reference);
              r.chi = chi;
              const auto t = std::chrono::steady_clock::now();
              const auto est = tn_estimate(in, chi);
              r.elapsed_seconds = seconds_since(t);
              finish(r, est);
              return r;
            });
        } else if (m == Method::qmc) {
          for (auto n : cfg.n_samples)
            cells.push_back([&, n] {
              auto r = base_record(cfg, seed, g, reference);
              r.method = Method::qmc;
              r.n_samples = n;
              const auto t = std::chrono::steady_clock::now();
              const auto est = qmc_estimate(cfg, in, n, log);
              r.elapsed_seconds = seconds_since(t);
              ContractionReport rep;
              rep.value_log = est.log_abs_value;
              rep.value_sign = est.sign;
              finish(r, rep);
              return r;
            });
        } else {
          cells.push_back([&, m] {
            auto r = base_record(cfg, seed, g, reference);
            r.method = m;
            const auto t = std::chrono::steady_clock::now();
            const double v = m == Method::recursion ? recursion_integral(*in.poly) : brute(cfg, in, g);
            r.elapsed_seconds = seconds_since(t);
            finish(r, report_of(v));
            return r;
          });
        }
      }
      ordered_parallel(cells.size(), cfg.threads, [&](std::size_t i) { return cells[i](); }, sink);
    }
  }
}

void run_oracle(const RunConfig& cfg, const RecordSink& sink, std::ostream* log) {
  for (auto seed : cfg.seeds)
    for (auto g : cfg.grids) {
      const auto in = instance_for(cfg, seed, g);
      auto r = base_record(cfg, seed, g, std::numeric_limits<double>::quiet_NaN());
      r.method = Method::brute;
      const auto t = std::chrono::steady_clock::now();
      const double v = brute(cfg, in, g);
      r.elapsed_seconds = seconds_since(t);
      finish(r, report_of(v));
      if (log) *log << "seed " << seed << " G " << g << " brute-force " << format_double(v) << "\n";
      sink(r);
    }
}

QuadratureRule parse_rule(std::string_view spec, Interval interval) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) throw UsageError("rule must look like gauss:<G> or uniform:<G>");
  const auto kind = spec.substr(0, colon);
  std::size_t order = 0;
  try {
    std::size_t used = 0;
    const std::string digits(spec.substr(colon + 1));
    order = std::stoul(digits, &used);
    if (used != digits.size()) throw std::invalid_argument("trailing text");
  } catch (const std::exception&) {
    throw UsageError("rule order must be a positive integer");
  }
  if (order == 0) throw UsageError("rule order must be a positive integer");
  if (!(interval.lo < interval.hi)) throw UsageError("interval must satisfy lo < hi");
  if (kind == "gauss") return gauss_legendre(order, interval);
  if (kind == "uniform") return uniform_rule(order, interval);
  throw UsageError("unknown rule '" + std::string(kind) + "' (gauss, uniform)");
}

ExprResult expr_run(const std::string& text, const KeyValues& bindings, const QuadratureRule& rule) {
  const auto ast = expr::parse(text);
  expr::CompilationEnv env;
  std::set<std::string> names;
  collect_functions(*ast, names);
  for (const auto& name : names) {
    if (!bindings.has(name)) throw UsageError("no binding for function '" + name + "'");
    auto v = bindings.get_double_list(name);
    if (v.size() == 1) v.assign(rule.size(), v.front());
    if (v.size() != rule.size())
      throw UsageError("binding '" + name + "' has " + std::to_string(v.size()) + " samples, rule has " +
                       std::to_string(rule.size()));
    env.bindings[name] = std::move(v);
  }
  for (const auto& v : expr_variables(*ast)) env.grids[v] = rule;
  const auto compiled = expr::compile(*ast, env);
  ExprResult out;
  out.report = expr::integrate(compiled, env);
  out.tensors = compiled.network.size();
  out.variables = compiled.variables;
  return out;
}

}  // namespace actn::bench
