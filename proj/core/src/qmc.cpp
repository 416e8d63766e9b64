#include "actn/qmc.hpp"

#include <algorithm>
#include <cmath>
#include <thread>
#include <vector>

#include "actn/error.hpp"
#include "actn/sobol.hpp"

namespace actn {

namespace {

// Partial sums are formed over fixed-size chunks and combined in chunk
// order, so the result is independent of the thread count.
constexpr std::size_t kChunk = 1 << 14;

struct Partial {
  double sum = 0.0;  // linear mode
  LogSumExp lse;     // log mode
};

template <typename Accumulate>
void run_chunks(std::size_t chunks, std::size_t threads, Accumulate&& work) {
  threads = std::max<std::size_t>(1, std::min(threads, chunks));
  if (threads == 1) {
    for (std::size_t c = 0; c < chunks; ++c) work(c);
    return;
  }
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t)
    pool.emplace_back([&, t] {
      for (std::size_t c = t; c < chunks; c += threads) work(c);
    });
  for (auto& th : pool) th.join();
}

template <bool Log>
QmcEstimate integrate(const PointFunction& f, std::span<const Interval> domain, const QmcOptions& options) {
  if (domain.empty()) throw SpecError("QMC domain needs at least one interval");
  if (options.n_samples == 0) throw SpecError("QMC needs at least one sample");
  if (options.batch == 0) throw SpecError("QMC batch size must be positive");
  if (options.start_index == 0) throw SpecError("Sobol start index must be at least 1");
  const std::size_t dim = domain.size();
  const SobolSequence sobol(dim);

  QmcEstimate est;
  est.domain_volume = 1.0;
  for (const auto& iv : domain) est.domain_volume *= iv.length();

  double total = 0.0;
  LogSumExp total_lse;
  std::size_t done = 0, batch_no = 0;
  auto finish = [&](QmcEstimate& e) {
    e.n_samples = done;
    if constexpr (Log) {
      e.sign = std::isinf(total_lse.log_sum()) ? 0 : 1;
      e.log_abs_value = total_lse.log_sum() - std::log(static_cast<double>(done)) + std::log(e.domain_volume);
    } else {
      const double v = total / static_cast<double>(done) * e.domain_volume;
      e.sign = v > 0 ? 1 : (v < 0 ? -1 : 0);
      e.log_abs_value = std::log(std::abs(v));
    }
  };

  while (done < options.n_samples) {
    const std::size_t count = std::min(options.batch, options.n_samples - done);
    const std::size_t chunks = (count + kChunk - 1) / kChunk;
    std::vector<Partial> partial(chunks);
    const std::uint64_t first = options.start_index + done;
    run_chunks(chunks, options.threads, [&](std::size_t c) {
      const std::size_t lo = c * kChunk, n = std::min(kChunk, count - lo);
      auto pts = sobol.points(first + lo, n);
      std::vector<double> x(dim);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t d = 0; d < dim; ++d) x[d] = domain[d].lo + domain[d].length() * pts[i * dim + d];
        if constexpr (Log)
          partial[c].lse.add(f(x));
        else
          partial[c].sum += f(x);
      }
    });
    for (const auto& p : partial) {
      if constexpr (Log)
        total_lse.merge(p.lse);
      else
        total += p.sum;
    }
    done += count;
    ++batch_no;
    if (options.on_report && (batch_no % std::max<std::size_t>(1, options.report_every) == 0 ||
                              done == options.n_samples)) {
      QmcEstimate running = est;
      finish(running);
      options.on_report(running);
    }
  }
  finish(est);
  return est;
}

}  // namespace

void LogSumExp::add(double log_value) noexcept {
  if (std::isinf(log_value) && log_value < 0) return;
  if (std::isinf(log_sum_) && log_sum_ < 0) {
    log_sum_ = log_value;
    return;
  }
  const double a = std::max(log_sum_, log_value), b = std::min(log_sum_, log_value);
  log_sum_ = a + std::log1p(std::exp(b - a));
}

double QmcEstimate::value() const { return sign == 0 ? 0.0 : sign * std::exp(log_abs_value); }

QmcEstimate qmc_integrate(const PointFunction& f, std::span<const Interval> domain, const QmcOptions& options) {
  return integrate<false>(f, domain, options);
}

QmcEstimate qmc_integrate_log(const PointFunction& log_f, std::span<const Interval> domain,
                              const QmcOptions& options) {
  return integrate<true>(log_f, domain, options);
}

}  // namespace actn
