#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "actn/random.hpp"
#include "actn/tensor.hpp"

namespace {

actn::Tensor random_tensor(std::vector<actn::Leg> legs, std::uint64_t seed) {
  std::size_t n = 1;
  for (const auto& l : legs) n *= l.dim;
  actn::CounterRng rng(seed);
  std::vector<double> data(n);
  for (std::size_t i = 0; i < n; ++i) data[i] = rng.uniform(i, -1.0, 1.0);
  return actn::Tensor(std::move(legs), std::move(data));
}

void BM_ContractMatrix(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  const auto a = random_tensor({{"i", d}, {"j", d}}, 1);
  const auto b = random_tensor({{"j", d}, {"k", d}}, 2);
  for (auto _ : state) benchmark::DoNotOptimize(actn::contract(a, b));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ContractMatrix)->RangeMultiplier(2)->Range(8, 256)->Complexity(benchmark::oNCubed);

// MPS-like site contraction with a permuted leg order.
void BM_ContractSite(benchmark::State& state) {
  const auto chi = static_cast<std::size_t>(state.range(0));
  const auto a = random_tensor({{"l", chi}, {"p", 4}, {"r", chi}}, 3);
  const auto b = random_tensor({{"r", chi}, {"q", 4}, {"p", 4}}, 4);
  for (auto _ : state) benchmark::DoNotOptimize(actn::contract(a, b));
}
BENCHMARK(BM_ContractSite)->RangeMultiplier(2)->Range(4, 128);

void BM_SvdSplit(benchmark::State& state) {
  const auto chi = static_cast<std::size_t>(state.range(0));
  const auto t = random_tensor({{"l", chi}, {"p", 4}, {"q", 4}, {"r", chi}}, 5);
  const std::vector<std::string> left{"l", "p"};
  const actn::TruncationSpec spec{chi, 0.0};
  for (auto _ : state) benchmark::DoNotOptimize(actn::svd_split(t, left, spec));
}
BENCHMARK(BM_SvdSplit)->RangeMultiplier(2)->Range(4, 64);

}  // namespace

BENCHMARK_MAIN();
