#include <benchmark/benchmark.h>

#include "scottlab/cosets.hpp"

using namespace scottlab;

static void BM_SuccessorChainRank(benchmark::State& state) {
  FinCosetSystem c = base_system(2, 1);
  for (int k = 0; k < state.range(0); ++k) c = successor(c);
  for (auto _ : state) benchmark::DoNotOptimize(CosetRanks(c).empty_rank());
  state.SetLabel("n=" + std::to_string(c.n()) + " m=" + std::to_string(c.m()));
}
BENCHMARK(BM_SuccessorChainRank)->DenseRange(0, 4);

static void BM_LimitTau(benchmark::State& state) {
  std::vector<FinCosetSystem> parts{base_system(2, 1), successor(base_system(2, 1))};
  LimitSystem l = limit(parts);
  for (auto _ : state) {
    TauEvaluator tau(l);
    for (Word f = 0; f < l.d.domain_size(); ++f)
      for (Word g : l.d.at(f).elements()) benchmark::DoNotOptimize(tau.tau(f, g));
  }
}
BENCHMARK(BM_LimitTau);

BENCHMARK_MAIN();
