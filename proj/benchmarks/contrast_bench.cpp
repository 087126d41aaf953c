#include "markov_id/contrast.hpp"
#include "markov_id/generators.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace markov_id;

void BM_Contrast(benchmark::State& state) {
  RandomSource rng(1, 0);
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto p = random_irreducible(n, rng);
  const auto q = random_irreducible(n, rng);
  for (auto _ : state) benchmark::DoNotOptimize(contrast(p, q));
}
BENCHMARK(BM_Contrast)->RangeMultiplier(4)->Range(4, 256);

void BM_SpectralRadius(benchmark::State& state) {
  RandomSource rng(2, 0);
  const auto n = static_cast<std::size_t>(state.range(0));
  const Eigen::MatrixXd m = hadamard_sqrt_product(random_irreducible(n, rng), random_irreducible(n, rng));
  for (auto _ : state) benchmark::DoNotOptimize(spectral_radius(m));
}
BENCHMARK(BM_SpectralRadius)->RangeMultiplier(4)->Range(4, 256);

void BM_Stationary(benchmark::State& state) {
  RandomSource rng(3, 0);
  const auto p = random_irreducible(static_cast<std::size_t>(state.range(0)), rng);
  for (auto _ : state) benchmark::DoNotOptimize(stationary_distribution(p));
}
BENCHMARK(BM_Stationary)->RangeMultiplier(4)->Range(4, 256);

}  // namespace
