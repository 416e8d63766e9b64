#pragma once

// Sweep driver behind the bench command: builds integrands from a flat
// config, runs TN / quasi-MC / reference methods, and emits CSV records.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "actn/contraction.hpp"
#include "actn/error.hpp"
#include "actn/quadrature.hpp"
#include "actn/spec_io.hpp"

namespace actn::bench {

/// Invalid configuration, or a request the harness refuses to run.
class UsageError : public Error {
 public:
  using Error::Error;
};

enum class Method { tn, qmc, recursion, brute };
enum class Reference { brute_force, converged_tn, analytic, none };

std::string to_string(Method m);
Method method_from_string(std::string_view s);
std::string to_string(Reference r);
Reference reference_from_string(std::string_view s);

struct RunConfig {
  FamilyConfig family;  ///< family.grid mirrors grids.front()
  std::vector<std::size_t> grids;
  std::vector<std::uint64_t> seeds;
  std::vector<std::size_t> n_samples;
  std::vector<Method> methods{Method::tn};
  Reference reference = Reference::none;
  std::string expr;  ///< expression text for family=expr
  std::string out;   ///< empty: standard output
  std::size_t threads = 1;
  std::size_t batch = 1'000'000;
  std::size_t report_every = 0;  ///< quasi-MC progress cadence in batches; 0 is silent
};

/// Family keys plus: G (list), seeds, n_samples, methods, reference, expr,
/// out, threads, batch, report_every. Unknown keys are rejected.
RunConfig run_config_from(const KeyValues& kv);

struct ConvergenceRecord {
  std::string family;
  std::uint64_t seed = 0;
  Method method = Method::tn;
  std::size_t chi = 0;
  std::size_t grid = 0;
  std::size_t n_samples = 0;
  double estimate_log = -std::numeric_limits<double>::infinity();
  int estimate_sign = 0;
  double reference = std::numeric_limits<double>::quiet_NaN();
  /// |est - ref| / |ref|, or |est| when ref is 0 (warned on the log stream).
  double relative_error = std::numeric_limits<double>::quiet_NaN();
  double elapsed_seconds = 0.0;
  std::size_t max_bond_reached = 0;
  double discarded_weight = 0.0;
};

std::string csv_header();
std::string to_csv(const ConvergenceRecord& r);

using RecordSink = std::function<void(const ConvergenceRecord&)>;

/// Runs the sweep (seed, G, method, then chi or n_samples) and hands records
/// to `sink` in that order. Progress goes to `log` when non-null.
void run(const RunConfig& config, const RecordSink& sink, std::ostream* log = nullptr);

/// Brute-force grid sums only, one record per (seed, G); refuses N > 6.
void run_oracle(const RunConfig& config, const RecordSink& sink, std::ostream* log = nullptr);

/// "gauss:<G>" or "uniform:<G>" on `interval`.
QuadratureRule parse_rule(std::string_view spec, Interval interval);

struct ExprResult {
  ContractionReport report;
  std::size_t tensors = 0;
  std::vector<std::string> variables;
};

/// Integrates `text` with every variable on `rule`. Bindings map function
/// names to comma-separated samples at the rule's nodes; a single value is
/// broadcast.
ExprResult expr_run(const std::string& text, const KeyValues& bindings, const QuadratureRule& rule);

}  // namespace actn::bench
