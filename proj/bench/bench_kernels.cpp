// Serial reference against the OpenMP path for the per-node tensor kernels.

#include <benchmark/benchmark.h>

#include "krf/catalog.hpp"
#include "krf/grid_kernels.hpp"

using namespace krf;

namespace {

Execution mode(const benchmark::State& st) { return st.range(2) ? Execution::parallel : Execution::serial; }

void args(benchmark::internal::Benchmark* b) {
  for (int n : {1, 2})
    for (int N : {64, 128})
      for (int par : {0, 1}) b->Args({n, N, par});
  b->ArgNames({"n", "N", "parallel"})->Unit(benchmark::kMillisecond);
}

void BM_c3_field(benchmark::State& st) {
  const GeometryPtr g = fubini_study(static_cast<int>(st.range(0)), static_cast<int>(st.range(1)));
  const Vec phi = random_admissible_potential(g, 1);
  for (auto _ : st) benchmark::DoNotOptimize(c3_field(g, phi, mode(st)));
}
BENCHMARK(BM_c3_field)->Apply(args);

void BM_tensor_scalar_field(benchmark::State& st) {
  const GeometryPtr g = fubini_study(static_cast<int>(st.range(0)), static_cast<int>(st.range(1)));
  const Vec phi = random_admissible_potential(g, 1);
  for (auto _ : st) benchmark::DoNotOptimize(tensor_scalar_field(g, phi, mode(st)));
}
BENCHMARK(BM_tensor_scalar_field)->Apply(args);

void BM_reference_lambda1_field(benchmark::State& st) {
  const GeometryPtr g = fubini_study(static_cast<int>(st.range(0)), static_cast<int>(st.range(1)));
  for (auto _ : st) benchmark::DoNotOptimize(reference_lambda1_field(g, mode(st)));
}
BENCHMARK(BM_reference_lambda1_field)->Apply(args);

}  // namespace

BENCHMARK_MAIN();
