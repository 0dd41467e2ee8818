#include <benchmark/benchmark.h>

#include <random>

#include "scottlab/backforth.hpp"
#include "scottlab/verify.hpp"

using namespace scottlab;

static void BM_CompleteTable(benchmark::State& state) {
  std::mt19937_64 rng(1);
  FiniteStructure m = random_structure(rng, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    BfTable t(m);
    benchmark::DoNotOptimize(t.fixpoint_level());
  }
  state.SetLabel("|M|=" + std::to_string(m.size()));
}
BENCHMARK(BM_CompleteTable)->DenseRange(3, 7);

static void BM_BoundedTable(benchmark::State& state) {
  std::mt19937_64 rng(2);
  FiniteStructure m = random_structure(rng, static_cast<std::size_t>(state.range(0)));
  BfOptions o;
  o.max_length = 3;
  for (auto _ : state) {
    BfTable t(m, o);
    benchmark::DoNotOptimize(t.level_count());
  }
}
BENCHMARK(BM_BoundedTable)->RangeMultiplier(2)->Range(8, 64);

static void BM_ScottRank(benchmark::State& state) {
  std::mt19937_64 rng(3);
  FiniteStructure m = random_structure(rng, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(scott_rank(m));
}
BENCHMARK(BM_ScottRank)->DenseRange(3, 6);

BENCHMARK_MAIN();
