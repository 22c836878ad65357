#include <benchmark/benchmark.h>

#include "lfends/rays.hpp"
#include "lfends/tower.hpp"

using namespace lfends;

static void BM_MaterializeBall(benchmark::State& state) {
  const auto gen = GraphGenerator::regular_tree(4);
  const int r = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(materialize_ball(gen, r));
}
BENCHMARK(BM_MaterializeBall)->DenseRange(4, 8, 2);

static void BM_BuildTower(benchmark::State& state) {
  const auto gen = GraphGenerator::grid(3);
  const int depth = static_cast<int>(state.range(0));
  auto window = std::make_shared<const Ball>(materialize_ball(gen, depth + 2));
  for (auto _ : state) {
    const auto exh = efficient_exhaustion(window, depth);
    benchmark::DoNotOptimize(build_tower(exh));
  }
}
BENCHMARK(BM_BuildTower)->DenseRange(2, 8, 2);

static void BM_CanonicalCode(benchmark::State& state) {
  const auto t = build_tower(efficient_exhaustion(GraphGenerator::regular_tree(4), 5, 7));
  for (auto _ : state) benchmark::DoNotOptimize(canonical_code(t));
}
BENCHMARK(BM_CanonicalCode);

static void BM_FindAllRays(benchmark::State& state) {
  const auto t = build_tower(efficient_exhaustion(GraphGenerator::regular_tree(4), 4, 6));
  const auto threads = enumerate_prefixes(t, 4);
  for (auto _ : state) {
    for (const auto& eps : threads) benchmark::DoNotOptimize(find_ray(t, eps));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * threads.size()));
}
BENCHMARK(BM_FindAllRays);

static void BM_EmbedEndTree(benchmark::State& state) {
  const auto t = build_tower(efficient_exhaustion(GraphGenerator::binary_tree(), 6, 8));
  for (auto _ : state) benchmark::DoNotOptimize(embed_end_tree(t));
}
BENCHMARK(BM_EmbedEndTree);
