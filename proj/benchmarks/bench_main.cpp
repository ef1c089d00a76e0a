#include <benchmark/benchmark.h>

#include "corpus.hpp"
#include "dnc/gf_builder.hpp"
#include "dnc/oracle.hpp"
#include "dnc/solver.hpp"

using namespace dnc;
using namespace dnc::testing;

static void BM_ExpandSeries_Example2(benchmark::State& state) {
  const RationalGF gf = build_gf(load_example("ex2.json"));
  const auto cutoff = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(expand_series(gf, cutoff));
}
BENCHMARK(BM_ExpandSeries_Example2)->Arg(30)->Arg(60)->Arg(120);

static void BM_ExpandSeries_MixedFree(benchmark::State& state) {
  const RationalGF gf = build_gf(mixed_free());
  const auto cutoff = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(expand_series(gf, cutoff));
}
BENCHMARK(BM_ExpandSeries_MixedFree)->Arg(30)->Arg(60);

static void BM_Enumerate_Avoid11(benchmark::State& state) {
  const ChannelSpec s = binary_forbidden("11");
  const auto cutoff = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_by_weight(s, cutoff));
}
BENCHMARK(BM_Enumerate_Avoid11)->Arg(15)->Arg(30)->Arg(60);

static void BM_Enumerate_Example2(benchmark::State& state) {
  const ChannelSpec s = load_example("ex2.json");
  const auto cutoff = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_by_weight(s, cutoff));
}
BENCHMARK(BM_Enumerate_Example2)->Arg(30)->Arg(60);

static void BM_CharacteristicRoot_Example2(benchmark::State& state) {
  const RationalGF gf = build_gf(load_example("ex2.json"));
  for (auto _ : state) benchmark::DoNotOptimize(capacity_from_characteristic(gf));
}
BENCHMARK(BM_CharacteristicRoot_Example2);

static void BM_SmallestPole_Example3(benchmark::State& state) {
  const RationalGF gf = build_gf(load_example("ex3.json"));
  for (auto _ : state) benchmark::DoNotOptimize(smallest_positive_pole(gf));
}
BENCHMARK(BM_SmallestPole_Example3);

static void BM_BuildGf_MixedRegex(benchmark::State& state) {
  const ChannelSpec s = mixed_regex();
  for (auto _ : state) benchmark::DoNotOptimize(build_gf(s));
}
BENCHMARK(BM_BuildGf_MixedRegex);

BENCHMARK_MAIN();
