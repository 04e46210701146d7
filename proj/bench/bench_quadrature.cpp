#include <benchmark/benchmark.h>

#include "htype/catalog.hpp"
#include "htype/geodesics.hpp"
#include "htype/mcp.hpp"

namespace {

const char* const kGroups[] = {"heisenberg3", "htype4x3", "contact12", "degenerate-corank1"};

void BM_ContractionReference(benchmark::State& state) {
  const auto sc = htype::catalog_group(kGroups[state.range(0)]);
  const auto box = htype::default_box(sc);
  const auto ts = htype::default_t_grid();
  for (auto _ : state) {
    auto r = htype::integrate_contraction_reference(sc, box, ts, static_cast<int>(state.range(1)));
    benchmark::DoNotOptimize(r.base);
  }
  state.SetLabel(kGroups[state.range(0)]);
}

void BM_ContractionKernel(benchmark::State& state) {
  const auto sc = htype::catalog_group(kGroups[state.range(0)]);
  const auto box = htype::default_box(sc);
  const auto ts = htype::default_t_grid();
  const htype::QuadratureOptions q{static_cast<int>(state.range(1)), static_cast<int>(state.range(2))};
  for (auto _ : state) {
    auto r = htype::integrate_contraction(sc, box, ts, q);
    benchmark::DoNotOptimize(r.base);
  }
  state.SetLabel(kGroups[state.range(0)]);
}

void BM_LogMap(benchmark::State& state) {
  const auto sc = htype::catalog_group("contact12");
  const htype::Covector lambda{Eigen::Vector4d(0.7, -0.2, 0.4, 1.1), Eigen::VectorXd::Constant(1, 2.0)};
  const auto target = htype::exp_map(sc, lambda);
  for (auto _ : state) benchmark::DoNotOptimize(htype::log_map(sc, target).u(0));
}

}  // namespace

BENCHMARK(BM_ContractionReference)->Args({0, 8})->Args({2, 8})->Args({1, 6})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ContractionKernel)
    ->Args({0, 8, 1})
    ->Args({2, 8, 1})
    ->Args({1, 6, 1})
    ->Args({1, 6, 4})
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LogMap);

BENCHMARK_MAIN();
