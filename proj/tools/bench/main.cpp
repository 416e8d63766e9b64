// bench: sweeps of TN and quasi-MC integration emitting CSV records.
// Exit codes: 0 success, 1 usage, 2 numeric failure.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "run.hpp"

namespace {

constexpr int kUsage = 1;
constexpr int kNumeric = 2;

struct SweepFlags {
  std::string config;
  std::uint64_t seed = 0;
  std::vector<std::size_t> chi;
  std::vector<std::size_t> grid;
  std::string out;
  std::size_t threads = 0;
  std::vector<std::string> sets;
};

void add_sweep_flags(CLI::App* cmd, SweepFlags& f) {
  cmd->add_option("config", f.config, "key=value config file")->required();
  cmd->add_option("--seed", f.seed, "single seed (replaces seed/seeds)");
  cmd->add_option("--chi", f.chi, "bond dimensions, comma separated")->delimiter(',');
  cmd->add_option("--grid", f.grid, "grid sizes G, comma separated")->delimiter(',');
  cmd->add_option("--out", f.out, "CSV output path (default: stdout)");
  cmd->add_option("--threads", f.threads, "worker threads for sweep cells");
  cmd->add_option("--set", f.sets, "override any config key, key=value");
}

std::string join(const std::vector<std::size_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

actn::bench::RunConfig load(const CLI::App& cmd, const SweepFlags& f) {
  std::ifstream in(f.config);
  if (!in) throw actn::bench::UsageError("cannot read config '" + f.config + "'");
  std::stringstream text;
  text << in.rdbuf();
  auto kv = actn::KeyValues::parse(text.str());
  for (const auto& s : f.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) throw actn::bench::UsageError("--set expects key=value, got '" + s + "'");
    kv.set(s.substr(0, eq), s.substr(eq + 1));
  }
  if (cmd.count("--seed")) {
    kv.erase("seeds");
    kv.set("seed", std::to_string(f.seed));
  }
  if (cmd.count("--chi")) kv.set("chi", join(f.chi));
  if (cmd.count("--grid")) kv.set("G", join(f.grid));
  if (cmd.count("--out")) kv.set("out", f.out);
  if (cmd.count("--threads")) kv.set("threads", std::to_string(f.threads));
  return actn::bench::run_config_from(kv);
}

/// Streams records as CSV, flushing each line; remembers non-finite estimates.
class CsvSink {
 public:
  explicit CsvSink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw actn::bench::UsageError("cannot write '" + path + "'");
    }
    out() << actn::bench::csv_header() << "\n" << std::flush;
  }

  void operator()(const actn::bench::ConvergenceRecord& r) {
    out() << actn::bench::to_csv(r) << "\n" << std::flush;
    if (std::isnan(r.estimate_log) || (r.estimate_sign != 0 && !std::isfinite(r.estimate_log))) bad_ = true;
  }

  bool bad() const noexcept { return bad_; }

 private:
  std::ostream& out() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

  std::ofstream file_;
  bool bad_ = false;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tensor-network and quasi-Monte Carlo integration sweeps"};
  app.require_subcommand(1);

  SweepFlags run_flags, oracle_flags;
  auto* run_cmd = app.add_subcommand("run", "run a sweep from a config file");
  add_sweep_flags(run_cmd, run_flags);
  auto* oracle_cmd = app.add_subcommand("oracle", "brute-force grid sums only (N <= 6)");
  add_sweep_flags(oracle_cmd, oracle_flags);

  std::string text, bindings_path, rule = "gauss:8", interval = "0,1";
  auto* expr_cmd = app.add_subcommand("expr", "integrate an expression over a product grid");
  expr_cmd->add_option("text", text, "expression, e.g. (f(x)+g(y))^2")->required();
  expr_cmd->add_option("--bindings", bindings_path, "file of name=samples lines")->required();
  expr_cmd->add_option("--rule", rule, "gauss:<G> or uniform:<G>")->capture_default_str();
  expr_cmd->add_option("--interval", interval, "lo,hi for every variable")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    if (expr_cmd->parsed()) {
      std::ifstream in(bindings_path);
      if (!in) throw actn::bench::UsageError("cannot read bindings '" + bindings_path + "'");
      std::stringstream buf;
      buf << in.rdbuf();
      const auto comma = interval.find(',');
      if (comma == std::string::npos) throw actn::bench::UsageError("--interval expects lo,hi");
      actn::Interval iv;
      try {
        iv = {std::stod(interval.substr(0, comma)), std::stod(interval.substr(comma + 1))};
      } catch (const std::exception&) {
        throw actn::bench::UsageError("--interval expects two numbers");
      }
      const auto r = actn::bench::expr_run(text, actn::KeyValues::parse(buf.str()), actn::bench::parse_rule(rule, iv));
      const double v = r.report.value();
      std::printf("%.17g\n", v);
      std::fprintf(stderr, "tensors %zu, variables %zu, log|I| %.17g, sign %d\n", r.tensors, r.variables.size(),
                   r.report.value_log, r.report.value_sign);
      return std::isfinite(v) ? 0 : kNumeric;
    }

    const bool oracle = oracle_cmd->parsed();
    const auto cfg = oracle ? load(*oracle_cmd, oracle_flags) : load(*run_cmd, run_flags);
    CsvSink sink(cfg.out);
    auto emit = [&](const actn::bench::ConvergenceRecord& r) { sink(r); };
    if (oracle)
      actn::bench::run_oracle(cfg, emit, &std::cerr);
    else
      actn::bench::run(cfg, emit, &std::cerr);
    if (sink.bad()) {
      std::cerr << "error: non-finite estimate in output\n";
      return kNumeric;
    }
    return 0;
  } catch (const actn::bench::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const actn::SpecError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const actn::ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kNumeric;
  }
}
