#include <benchmark/benchmark.h>

#include "lfends/endsum.hpp"
#include "lfends/h0.hpp"

using namespace lfends;

namespace {

EndTower cantor(std::size_t depth) {
  std::vector<std::size_t> sizes;
  std::vector<std::vector<std::size_t>> bonds;
  for (std::size_t l = 0; l < depth; ++l) {
    sizes.push_back(std::size_t{2} << l);
    if (l > 0) {
      std::vector<std::size_t> b;
      for (std::size_t e = 0; e < sizes[l]; ++e) b.push_back(e / 2);
      bonds.push_back(b);
    }
  }
  return make_tower(sizes, bonds);
}

}  // namespace

static void BM_BasisDeterminant(benchmark::State& state) {
  const auto t = cantor(static_cast<std::size_t>(state.range(0)));
  const auto b = basis(t);
  const auto m = basis_matrix(t, b, t.depth() - 1);
  for (auto _ : state) benchmark::DoNotOptimize(determinant(m));
}
BENCHMARK(BM_BasisDeterminant)->DenseRange(3, 7, 1);

static void BM_ExpandInBasis(benchmark::State& state) {
  const auto t = cantor(8);
  const auto b = basis(t);
  Cochain c{7, {}};
  for (std::size_t e = 0; e < t.size(7); ++e) c.values.push_back(static_cast<long>(e % 13) - 6);
  const auto x = normalize(t, c);
  for (auto _ : state) benchmark::DoNotOptimize(expand_in_basis(x, b));
}
BENCHMARK(BM_ExpandInBasis);

static void BM_VerifyEndSum(benchmark::State& state) {
  const EndSumSpec spec{with_ray(GraphGenerator::regular_tree(4), 4, 6), with_ray(GraphGenerator::comb(), 4, 6), 4, 6};
  for (auto _ : state) benchmark::DoNotOptimize(verify_end_sum(spec));
}
BENCHMARK(BM_VerifyEndSum);
