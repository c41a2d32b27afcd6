#include <benchmark/benchmark.h>

#include "support/simulate.hpp"
#include "vecmtk/regress.hpp"

namespace {

void BM_Ols(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  const auto k = static_cast<Eigen::Index>(state.range(1));
  vecmtk::testing::Rng rng(1);
  std::normal_distribution<double> z;
  vecmtk::DesignMatrix X;
  X.values.resize(n, k);
  for (Eigen::Index j = 0; j < k; ++j) X.names.push_back("x" + std::to_string(j));
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    y(i) = z(rng);
    for (Eigen::Index j = 0; j < k; ++j) X.values(i, j) = z(rng);
  }
  for (auto _ : state) benchmark::DoNotOptimize(vecmtk::ols(y, X));
}

}  // namespace

// (rows, columns): a VECM equation on the snapshot is about 266 x 15.
BENCHMARK(BM_Ols)->Args({60, 8})->Args({266, 15})->Args({2000, 30});

BENCHMARK_MAIN();
