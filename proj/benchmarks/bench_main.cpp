#include <benchmark/benchmark.h>

#include "radstein/bounds.hpp"
#include "radstein/chaos.hpp"
#include "radstein/enumeration.hpp"
#include "radstein/report.hpp"
#include "radstein/stats/erdos_renyi.hpp"

namespace {

using namespace radstein;

void BM_StroockDecompose(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  ErdosRenyiModel model(n, 0.0, 0.3);
  RademacherSpace space = model.space();
  Functional f = triangle_statistic(model);
  for (auto _ : state)
    benchmark::DoNotOptimize(stroock_decompose(space, f));
}
BENCHMARK(BM_StroockDecompose)->Arg(5)->Arg(6);

void BM_ExactBound(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  ErdosRenyiModel model(n, 0.0, 0.3);
  RademacherSpace space = model.space();
  Functional f = triangle_statistic(model);
  const auto [mean, sd] = exact_mean_stddev(space, f);
  Functional norm = normalize(f, mean, sd);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        second_order_bound(space, norm, holder_select(0.0), BoundMode::Exact));
}
BENCHMARK(BM_ExactBound)->Arg(5)->Arg(6);

void BM_McBound(benchmark::State& state) {
  RateStudyConfig config;
  config.kind = StatisticKind::Triangles;
  config.theta = 0.3;
  config.samples = static_cast<std::size_t>(state.range(1));
  config.batches = 20;
  for (auto _ : state)
    benchmark::DoNotOptimize(run_bound(config, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_McBound)->Args({16, 10000})->Args({32, 10000});

void BM_TriangleGradientOracle(benchmark::State& state) {
  ErdosRenyiModel model(static_cast<int>(state.range(0)), 0.0, 0.3);
  RademacherSpace space = model.space();
  Functional f = triangle_statistic(model);
  Configuration c = sample_configuration(space, 0, 12345);
  int k = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(f.gradient_oracle(c, k));
    k = (k + 1) % space.size();
  }
}
BENCHMARK(BM_TriangleGradientOracle)->Arg(32)->Arg(64);

}  // namespace

BENCHMARK_MAIN();
