#include <benchmark/benchmark.h>

#include "twistsel/descent.hpp"
#include "twistsel/gf2.hpp"
#include "twistsel/harness.hpp"
#include "twistsel/randmodel.hpp"

using namespace twistsel;

static void BM_Rank(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  Rng rng(1);
  auto M = gf2::sample_matrix(n, n, rng);
  for (auto _ : st) benchmark::DoNotOptimize(gf2::rank(M));
}
BENCHMARK(BM_Rank)->Arg(16)->Arg(64)->Arg(256)->Arg(1024);

static void BM_PhiSelmer(benchmark::State& st) {
  IsogenyDescent desc(enumerate_two_isogenies(CurveModel(-34, 225)).front());
  const auto D = squarefree_kernel(static_cast<i64>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(desc.selmer(D).dim);
}
BENCHMARK(BM_PhiSelmer)->Arg(7)->Arg(30030)->Arg(-9699690);

static void BM_TwoSelmer(benchmark::State& st) {
  TwoDescent desc(CurveModel(-34, 225));
  const auto D = squarefree_kernel(static_cast<i64>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(desc.selmer(D).dim);
}
BENCHMARK(BM_TwoSelmer)->Arg(7)->Arg(30030);

static void BM_PVDistribution(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(randmodel::p_v_distribution(st.range(0), st.range(1)));
}
BENCHMARK(BM_PVDistribution)->Args({10, 2})->Args({40, 20})->Args({100, 100});

static void BM_PVMonteCarlo(benchmark::State& st) {
  Rng rng(3);
  for (auto _ : st) benchmark::DoNotOptimize(randmodel::p_v_monte_carlo(8, 8, 4096, rng));
}
BENCHMARK(BM_PVMonteCarlo);

static void BM_Sweep(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(harness::sweep(CurveModel(-34, 225), std::nullopt, st.range(0)).records.size());
}
BENCHMARK(BM_Sweep)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
