#include <benchmark/benchmark.h>

#include <random>

#include "powerdist/flow.hpp"
#include "powerdist/geometry.hpp"
#include "powerdist/lloyd.hpp"
#include "synthetic.hpp"

using namespace powerdist;

static void BM_AssignmentStep(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const int k = static_cast<int>(state.range(1));
  const Instance inst = synthetic::clustered(n, static_cast<std::int64_t>(n) * 10, k, 1);
  const auto policy = ScaledCostPolicy::for_instance(inst);
  const CenterSet centers = lloyd::seed_centers(inst, k, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(min_cost_balanced_assignment(inst, centers, policy).scaled_cost);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_AssignmentStep)
    ->Args({10000, 7})
    ->Args({10000, 25})
    ->Args({100000, 7})
    ->Args({100000, 53})
    ->Unit(benchmark::kMillisecond);

static void BM_RandomTransshipment(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto k = static_cast<std::size_t>(state.range(1));
  std::mt19937_64 rng(3);
  flow::TransshipmentInstance t;
  std::int64_t total = 0;
  for (std::size_t y = 0; y < n; ++y) {
    t.supplies.push_back(static_cast<std::int64_t>(rng() % 30));
    total += t.supplies.back();
  }
  t.demands.assign(k, 0);
  for (std::int64_t u = 0; u < total; ++u) ++t.demands[rng() % k];
  for (std::size_t i = 0; i < n * k; ++i) t.costs.push_back(static_cast<std::int64_t>(rng() % 1000000));
  for (auto _ : state) benchmark::DoNotOptimize(flow::solve_mcf(t).objective);
}
BENCHMARK(BM_RandomTransshipment)->Args({5000, 10})->Args({5000, 50})->Unit(benchmark::kMillisecond);

static void BM_LloydRun(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const int k = static_cast<int>(state.range(1));
  const Instance inst = synthetic::clustered(n, static_cast<std::int64_t>(n) * 20, k, 5);
  const auto policy = ScaledCostPolicy::for_instance(inst);
  for (auto _ : state) benchmark::DoNotOptimize(lloyd::run(inst, {}, policy).cost);
}
BENCHMARK(BM_LloydRun)->Args({5000, 10})->Unit(benchmark::kMillisecond);

static void BM_Cells(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  std::mt19937_64 rng(8);
  CenterSet c;
  PowerWeights w;
  for (int x = 0; x < k; ++x) {
    c.centers.push_back({synthetic::unit(rng), synthetic::unit(rng)});
    c.capacities.push_back(1);
    w.w.push_back(0.01 * synthetic::unit(rng));
  }
  const geometry::Frame frame{{0, 0}, {1, 1}};
  for (auto _ : state) benchmark::DoNotOptimize(geometry::compute_cells(c, w, frame).size());
}
BENCHMARK(BM_Cells)->Arg(7)->Arg(53);

BENCHMARK_MAIN();
