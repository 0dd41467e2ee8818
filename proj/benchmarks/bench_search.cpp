#include <benchmark/benchmark.h>

#include <random>

#include "scottlab/search.hpp"
#include "scottlab/verify.hpp"

using namespace scottlab;

static void BM_AutomorphismCheck(benchmark::State& state) {
  std::mt19937_64 rng(4);
  RandomSignature sig;
  sig.density = 0.2;
  FiniteStructure m = random_structure(rng, static_cast<std::size_t>(state.range(0)), sig);
  Caps caps;
  caps.universe = 64;
  for (auto _ : state) benchmark::DoNotOptimize(has_nontrivial_automorphism_fixing(m, {}, caps));
}
BENCHMARK(BM_AutomorphismCheck)->RangeMultiplier(2)->Range(4, 32);

BENCHMARK_MAIN();
