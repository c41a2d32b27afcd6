#include <benchmark/benchmark.h>

#include "support/snapshot.hpp"
#include "vecmtk/dynamics.hpp"
#include "vecmtk/unitroot.hpp"

namespace {

// Everything the report needs, minus file output.
void BM_Pipeline(benchmark::State& state) {
  const auto panel = vecmtk::testing::snapshot_panel();
  for (auto _ : state) {
    for (const auto& name : panel.names()) {
      const Eigen::VectorXd x = panel.column(name);
      benchmark::DoNotOptimize(vecmtk::classify_integration({x.data(), static_cast<std::size_t>(x.size())}, 2));
    }
    benchmark::DoNotOptimize(vecmtk::engle_granger(panel, "gdp"));
    const auto fit = panel.head(panel.nobs() - 8);
    const auto v = vecmtk::vecm_to_var(vecmtk::estimate_vecm(panel, 3, 2));
    auto f = vecmtk::forecast(vecmtk::vecm_to_var(vecmtk::estimate_vecm(fit, 3, 2)), fit, 8);
    vecmtk::evaluate(f, panel);
    benchmark::DoNotOptimize(f);
    for (const auto& name : panel.names()) benchmark::DoNotOptimize(vecmtk::irf(v, name, 8));
    benchmark::DoNotOptimize(vecmtk::fevd(v, 8));
  }
}
BENCHMARK(BM_Pipeline)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
