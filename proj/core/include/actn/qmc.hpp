#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>

#include "actn/quadrature.hpp"

namespace actn {

/// Running log(sum_i exp(l_i)) using a + log1p(exp(b - a)) with a >= b.
class LogSumExp {
 public:
  void add(double log_value) noexcept;
  void merge(const LogSumExp& other) noexcept { add(other.log_sum_); }
  double log_sum() const noexcept { return log_sum_; }

 private:
  double log_sum_ = -std::numeric_limits<double>::infinity();
};

struct QmcEstimate {
  std::size_t n_samples = 0;
  double domain_volume = 0.0;
  /// Integral estimate as sign * exp(log_abs_value).
  double log_abs_value = -std::numeric_limits<double>::infinity();
  int sign = 0;

  double value() const;
};

struct QmcOptions {
  std::size_t n_samples = 0;
  std::size_t batch = 1'000'000;
  std::uint64_t start_index = 1;
  /// Worker threads per batch; results do not depend on this.
  std::size_t threads = 1;
  /// Called with the running estimate after every `report_every` batches
  /// and after the last batch.
  std::function<void(const QmcEstimate&)> on_report;
  std::size_t report_every = 1;
};

using PointFunction = std::function<double(std::span<const double>)>;

/// Mean of f over Sobol points mapped onto the box, times its volume.
QmcEstimate qmc_integrate(const PointFunction& f, std::span<const Interval> domain, const QmcOptions& options);

/// Same for a positive integrand given as log f, accumulated in log space.
QmcEstimate qmc_integrate_log(const PointFunction& log_f, std::span<const Interval> domain,
                              const QmcOptions& options);

}  // namespace actn
