#include <benchmark/benchmark.h>

#include <map>
#include <random>
#include <string>
#include <vector>

#include "verifact/scorer.hpp"
#include "verifact/verifier.hpp"

using namespace verifact;

namespace {

void BM_Algebra(benchmark::State& state) {
  const auto parts = static_cast<std::size_t>(state.range(0));
  PartJudgmentMatrix m(std::vector<std::string>(parts, "p"), 10);
  for (std::size_t p = 0; p < parts; ++p) m.set(p, p % 10, Judgment::Supports);
  for (auto _ : state) benchmark::DoNotOptimize(classify_by_algebra(m));
}
BENCHMARK(BM_Algebra)->Arg(1)->Arg(8)->Arg(64);

void BM_ScoreDomain(benchmark::State& state) {
  std::mt19937_64 rng(9);
  std::vector<ResponseClaims> rs;
  std::map<std::string, BinaryLabel> labels;
  for (int r = 0; r < state.range(0); ++r) {
    ResponseClaims rc{"m/p" + std::to_string(r), 20, {}};
    const int n = std::uniform_int_distribution<int>(0, 40)(rng);
    for (int c = 0; c < n; ++c) {
      const auto id = rc.response_id + "#" + std::to_string(c);
      rc.claim_ids.push_back(id);
      labels[id] = rng() % 2 ? BinaryLabel::Supported : BinaryLabel::Unsupported;
    }
    rs.push_back(std::move(rc));
  }
  for (auto _ : state) benchmark::DoNotOptimize(score_domain("d", rs, labels));
}
BENCHMARK(BM_ScoreDomain)->Arg(50)->Arg(500);

}  // namespace
