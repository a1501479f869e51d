#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "verifact/analyzer.hpp"

namespace {

void BM_KendallTau(benchmark::State& state) {
  std::mt19937_64 rng(3);
  // few distinct values so ties show up
  std::uniform_int_distribution<int> v(0, 50);
  std::vector<double> x(static_cast<std::size_t>(state.range(0))), y(x.size());
  for (auto& e : x) e = v(rng);
  for (auto& e : y) e = v(rng);
  for (auto _ : state) benchmark::DoNotOptimize(verifact::kendall_tau(x, y));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_KendallTau)->RangeMultiplier(8)->Range(16, 1 << 16)->Complexity(benchmark::oNLogN);

}  // namespace
