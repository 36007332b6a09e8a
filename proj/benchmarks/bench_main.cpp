#include <benchmark/benchmark.h>

#include "scl_lab/free_words.hpp"
#include "scl_lab/scl_engine.hpp"
#include "scl_lab/sol_geometry.hpp"

using namespace scl_lab;

static void BM_CommutatorIndexBuild(benchmark::State& state) {
  const int max_len = static_cast<int>(state.range(0));
  for (auto _ : state) {
    CommutatorIndex index(2, max_len);
    benchmark::DoNotOptimize(index.size());
  }
}
BENCHMARK(BM_CommutatorIndexBuild)->Arg(4)->Arg(5)->Arg(6)->Unit(benchmark::kMillisecond);

static void BM_GenusTwoSearch(benchmark::State& state) {
  const CommutatorIndex index(2, 6);
  const ReducedWord cube = power(parse_word("[a,b]", 2), 3);
  for (auto _ : state) benchmark::DoNotOptimize(cl_upper(cube, 2, index));
}
BENCHMARK(BM_GenusTwoSearch)->Unit(benchmark::kMillisecond);

static void BM_CountDisjoint(benchmark::State& state) {
  const ReducedWord w = parse_word("abAB", 2);
  const ReducedWord a = power(parse_word("abABaab", 2), state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(count_disjoint_copies(w, a));
}
BENCHMARK(BM_CountDisjoint)->Range(8, 4096);

static void BM_CountDisjointCyclic(benchmark::State& state) {
  const ReducedWord w = parse_word("abAB", 2);
  const CyclicWord a = cyclically_reduce(power(parse_word("abABaab", 2), state.range(0))).core;
  for (auto _ : state) benchmark::DoNotOptimize(count_disjoint_copies_cyclic(w, a));
}
BENCHMARK(BM_CountDisjointCyclic)->Range(1, 256);

static void BM_SolDecompose(benchmark::State& state) {
  const SolDecomposer dec(AnosovMatrix::make(3, 1, 2, 1));
  const IntVec2 a{2 * 987654321987, 2 * -123456789123};
  for (auto _ : state) benchmark::DoNotOptimize(dec.decompose(a, 400));
}
BENCHMARK(BM_SolDecompose);
BENCHMARK_MAIN();
