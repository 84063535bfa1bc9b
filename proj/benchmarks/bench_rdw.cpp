#include "rdwkit/rdw.hpp"
#include "rdwkit/singularity.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace rdwkit;

const GeometryParams kTypeC{0.0, 0.0, 1.5, 1.0, 0.0};

void BM_SingularSet(benchmark::State& state) {
  const int grid = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(singular_set(kTypeC, grid));
  }
}
BENCHMARK(BM_SingularSet)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_ConditioningAt(benchmark::State& state) {
  double z = -0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(try_conditioning_at(kTypeC, {1.4, z}));
    z = z > 0.5 ? -0.5 : z + 1e-3;
  }
}
BENCHMARK(BM_ConditioningAt);

void BM_ComputeRdw(benchmark::State& state) {
  const RdwConfig config = state.range(0) ? RdwConfig{} : RdwConfig::sweep_defaults();
  for (auto _ : state) {
    benchmark::DoNotOptimize(compute_rdw(kTypeC, 0.25, config));
  }
}
BENCHMARK(BM_ComputeRdw)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
