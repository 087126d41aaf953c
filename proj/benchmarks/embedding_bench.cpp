#include "markov_id/embedding.hpp"
#include "markov_id/generators.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace markov_id;

// Reference on 5 states with a law of denominator range(0).
VtestPair pair_with_delta(std::int64_t delta) {
  RandomSource rng(static_cast<std::uint64_t>(delta), 0);
  for (;;) {
    auto pair = random_vtest_pair(5, delta, rng);
    if (pair.law.delta() == delta) return pair;
  }
}

void BM_BuildSymmetrizer(benchmark::State& state) {
  const auto pair = pair_with_delta(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_symmetrizer(pair.law, pair.p_ref.edges()));
}
BENCHMARK(BM_BuildSymmetrizer)->Arg(8)->Arg(32)->Arg(128);

void BM_EmbedMatrix(benchmark::State& state) {
  const auto pair = pair_with_delta(state.range(0));
  const auto s = build_symmetrizer(pair.law, pair.p_ref.edges());
  for (auto _ : state) benchmark::DoNotOptimize(embed_matrix(s, pair.p));
}
BENCHMARK(BM_EmbedMatrix)->Arg(8)->Arg(32)->Arg(128);

void BM_EmbedTrajectory(benchmark::State& state) {
  const auto pair = pair_with_delta(32);
  const auto s = build_symmetrizer(pair.law, pair.p_ref.edges());
  RandomSource rng(4, 0);
  const auto x = simulate(pair.p_ref, pair.law.distribution().probs(), static_cast<std::size_t>(state.range(0)), rng);
  for (auto _ : state) benchmark::DoNotOptimize(embed_trajectory(s.embedding(), x, rng));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EmbedTrajectory)->Arg(1000)->Arg(100000);

}  // namespace
