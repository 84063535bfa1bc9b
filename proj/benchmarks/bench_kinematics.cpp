#include "rdwkit/kinematics.hpp"

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

namespace {

using namespace rdwkit;

std::vector<JointConfig> random_configs(std::size_t n) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> angle(-3.14159, 3.14159);
  std::vector<JointConfig> q(n);
  for (auto& c : q) c = {angle(rng), angle(rng), angle(rng)};
  return q;
}

const GeometryParams kTypeC{0.0, 0.0, 1.5, 1.0, 0.0};
const GeometryParams kTypeG{0.0, 4.0, 2.5, 0.0, 1.0};
const GeometryParams kTypeE{4.0, 0.0, 4.0, 0.0, 0.0};

void BM_ForwardKinematics(benchmark::State& state) {
  const auto qs = random_configs(1024);
  std::size_t k = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(forward_kinematics(kTypeG, qs[k++ & 1023]));
  }
}
BENCHMARK(BM_ForwardKinematics);

void BM_ConditioningIndex(benchmark::State& state) {
  const auto qs = random_configs(1024);
  std::size_t k = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(conditioning_index(jacobian(kTypeG, qs[k++ & 1023])));
  }
}
BENCHMARK(BM_ConditioningIndex);

void BM_InverseKinematics(benchmark::State& state, GeometryParams g) {
  const auto qs = random_configs(1024);
  std::vector<CartesianPoint> targets;
  for (const auto& q : qs) targets.push_back(forward_kinematics(g, q));
  std::size_t k = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(inverse_kinematics(g, targets[k++ & 1023]));
  }
}
BENCHMARK_CAPTURE(BM_InverseKinematics, type_c, kTypeC);
BENCHMARK_CAPTURE(BM_InverseKinematics, type_e, kTypeE);
BENCHMARK_CAPTURE(BM_InverseKinematics, type_g, kTypeG);

}  // namespace
