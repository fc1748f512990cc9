#include <benchmark/benchmark.h>

#include "embaudit/engine.h"
#include "embaudit/synthetic.h"

using namespace embaudit;

namespace {

EmbeddingSetPtr bench_set(std::size_t vocab) {
  return share(synthetic::random_set(vocab, 300, 17));
}

AnalogyQuery make_query(const EmbeddingSetPtr& set, Algorithm algorithm) {
  return AnalogyQuery{"w1", "w2", "w3", algorithm, ConstraintMode::kExcludeInputs,
                      VocabView(set, Cutoff::all(), {}), 10};
}

void BM_Solve(benchmark::State& state, Algorithm algorithm) {
  const auto set = bench_set(static_cast<std::size_t>(state.range(0)));
  const auto query = make_query(set, algorithm);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve(query));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK_CAPTURE(BM_Solve, cosadd, Algorithm{CosAdd{}})->Arg(10'000)->Arg(100'000);
BENCHMARK_CAPTURE(BM_Solve, cosmul, Algorithm{CosMul{}})->Arg(10'000)->Arg(100'000);
BENCHMARK_CAPTURE(BM_Solve, bolukbasi, Algorithm{BolukbasiDir{}})->Arg(10'000)->Arg(100'000);

void BM_RankAll(benchmark::State& state) {
  const auto set = bench_set(static_cast<std::size_t>(state.range(0)));
  const auto query = make_query(set, CosAdd{});
  for (auto _ : state) {
    benchmark::DoNotOptimize(rank_all(query));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_RankAll)->Arg(10'000)->Arg(100'000);

// Quadratic in the view size.
void BM_PairSearch(benchmark::State& state) {
  const auto set = bench_set(static_cast<std::size_t>(state.range(0)));
  const VocabView view(set, Cutoff::all(), {});
  for (auto _ : state) {
    benchmark::DoNotOptimize(pair_search("w1", "w3", view, 1.0, 10));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}
BENCHMARK(BM_PairSearch)->Arg(500)->Arg(2'000);

}  // namespace

BENCHMARK_MAIN();
