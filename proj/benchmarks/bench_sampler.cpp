#include "perpetua/moments.hpp"
#include "perpetua/random_stream.hpp"
#include "perpetua/sampler.hpp"

#include <benchmark/benchmark.h>

using namespace perpetua;

static void BM_Philox(benchmark::State& state) {
  std::array<std::uint32_t, 4> ctr{0, 0, 0, 0};
  for (auto _ : state) {
    ++ctr[0];
    benchmark::DoNotOptimize(philox4x32(ctr, {0x1234, 0x5678}));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Philox);

static void BM_Uniform(benchmark::State& state) {
  RandomStream s(1, 0);
  for (auto _ : state) benchmark::DoNotOptimize(s.uniform());
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Uniform);

static void BM_SampleGamma(benchmark::State& state) {
  const PerpetuitySampler sampler(
      PerpetuityConfig{JointLaw::independent(ScalarLaw::beta(1.0, 1.0), ScalarLaw::gamma(1.0, 1.0))});
  std::uint64_t id = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sampler.sample(id++));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SampleGamma);

static void BM_SampleLevyHalf(benchmark::State& state) {
  const PerpetuitySampler sampler(PerpetuityConfig{
      JointLaw::independent(ScalarLaw::weibull(0.5, 1.0), ScalarLaw::inverse_gamma(1.5, 0.25))});
  std::uint64_t id = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sampler.sample(id++));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SampleLevyHalf);

static void BM_Batch(benchmark::State& state) {
  const PerpetuitySampler sampler(
      PerpetuityConfig{JointLaw::independent(ScalarLaw::uniform(0.0, 1.0), ScalarLaw::exponential(1.0))});
  const auto n = static_cast<std::uint64_t>(state.range(0));
  const auto workers = static_cast<unsigned>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(draw_batch(sampler, n, {workers, 0}));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Batch)->Args({100'000, 1})->Args({100'000, 4})->Unit(benchmark::kMillisecond);

static void BM_RStar(benchmark::State& state) {
  const JointLaw j = JointLaw::independent(ScalarLaw::finite_discrete({1.0, 0.5}, {0.5, 0.5}),
                                           ScalarLaw::exponential(2.0));
  for (auto _ : state) benchmark::DoNotOptimize(r_star(j));
}
BENCHMARK(BM_RStar);

BENCHMARK_MAIN();
