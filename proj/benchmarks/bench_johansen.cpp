#include <benchmark/benchmark.h>

#include "support/simulate.hpp"
#include "support/snapshot.hpp"
#include "vecmtk/johansen.hpp"

namespace {

void BM_TraceSnapshot(benchmark::State& state) {
  const auto panel = vecmtk::testing::snapshot_panel();
  for (auto _ : state) benchmark::DoNotOptimize(vecmtk::johansen_trace(panel, 2));
}
BENCHMARK(BM_TraceSnapshot);

void BM_TraceBivariate(benchmark::State& state) {
  vecmtk::testing::Rng rng(5);
  const auto panel = vecmtk::testing::cointegrated_pair(rng, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(vecmtk::johansen_trace(panel, 1, {false}));
}
BENCHMARK(BM_TraceBivariate)->Arg(200)->Arg(2000);

void BM_LagSelection(benchmark::State& state) {
  const auto panel = vecmtk::testing::snapshot_panel();
  for (auto _ : state) benchmark::DoNotOptimize(vecmtk::select_lag(panel, 6));
}
BENCHMARK(BM_LagSelection);

}  // namespace

BENCHMARK_MAIN();
