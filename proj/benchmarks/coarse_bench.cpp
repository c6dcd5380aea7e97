#include <benchmark/benchmark.h>

#include <random>

#include "coarse/generators.hpp"
#include "coarse/invariants.hpp"
#include "coarse/quasimedian.hpp"

using namespace coarse;

namespace {

void BM_GridBfs(benchmark::State& state) {
  const auto g = grid_window(2, static_cast<std::uint32_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(bfs_distances(g, g.basepoint()));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.size()));
}
BENCHMARK(BM_GridBfs)->Arg(16)->Arg(64)->Arg(128);

void BM_CheegerExhaustive(benchmark::State& state) {
  const auto c = cycle_window(static_cast<std::uint32_t>(state.range(0)));
  const auto a = whole_window(c);
  for (auto _ : state) benchmark::DoNotOptimize(cheeger(a, 1));
}
BENCHMARK(BM_CheegerExhaustive)->Arg(8)->Arg(14)->Arg(18);

void BM_TreeAnnulusCut(benchmark::State& state) {
  const auto k = static_cast<std::uint32_t>(state.range(0));
  const auto t = tree_window(3, -static_cast<std::int64_t>(k) - 1, 1, k + 2);
  const auto tp = tree_product(t, t);
  const auto a = tree_annulus(tp, tp.graph.basepoint(), k);
  for (auto _ : state) {
    benchmark::DoNotOptimize(cut(a, 1, Rational(15, 16), {.with_cheeger_bound = false}));
  }
}
BENCHMARK(BM_TreeAnnulusCut)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_NormalForm(benchmark::State& state) {
  const auto z3 = FiniteGroup::cyclic(3);
  const GraphProduct gp(4, {{0, 1}, {1, 2}, {2, 3}}, {z3, z3, z3, z3});
  std::mt19937_64 rng(7);
  std::vector<Syllable> word(static_cast<std::size_t>(state.range(0)));
  for (auto& s : word) {
    s = {static_cast<std::uint32_t>(rng() % 4), static_cast<GroupElement>(1 + rng() % 2)};
  }
  for (auto _ : state) benchmark::DoNotOptimize(gp.normal_form(word));
}
BENCHMARK(BM_NormalForm)->Arg(8)->Arg(32)->Arg(128);

void BM_QmBall(benchmark::State& state) {
  const auto z2 = FiniteGroup::cyclic(2);
  const GraphProduct gp(3, {{0, 1}, {1, 2}}, {z2, z2, z2});
  const auto r = static_cast<std::uint32_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(qm_ball(gp, r));
}
BENCHMARK(BM_QmBall)->Arg(3)->Arg(5);

}  // namespace

BENCHMARK_MAIN();
