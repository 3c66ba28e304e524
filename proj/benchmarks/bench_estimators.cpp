#include <benchmark/benchmark.h>

#include "densitrace/channel.hpp"
#include "densitrace/deck.hpp"
#include "densitrace/density.hpp"
#include "densitrace/exact_oracle.hpp"
#include "densitrace/reconstruct.hpp"
#include "densitrace/rng.hpp"

namespace {

using namespace densitrace;

BitString random_bits(std::uint64_t seed, std::size_t length) {
  SplitMix64 rng(seed);
  BitString s;
  s.reserve(length);
  for (std::size_t i = 0; i < length; ++i) s.push_back(static_cast<int>(rng.next() & 1u));
  return s;
}

void BM_SampleTraces(benchmark::State& state) {
  const BitString s = random_bits(1, state.range(0));
  const ChannelParams params(0.2, 7);
  std::uint64_t index = 0;
  BitString trace;
  for (auto _ : state) {
    sample_one_trace_into(s, params, index++, trace);
    benchmark::DoNotOptimize(trace);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SampleTraces)->Arg(20)->Arg(200)->Arg(1000);

void BM_DensityScan(benchmark::State& state) {
  const std::size_t n = state.range(0);
  const std::size_t k = state.range(1);
  const BitString s = random_bits(2, n);
  const ChannelParams params(0.2, 11);
  const std::size_t batch = 2000;
  std::uint64_t round = 0;
  for (auto _ : state) {
    ChannelParams p = params;
    p.seed += round++;
    benchmark::DoNotOptimize(estimate_density_map_streamed(s, p, batch, k));
  }
  state.SetItemsProcessed(state.iterations() * batch);
}
BENCHMARK(BM_DensityScan)->Args({20, 2})->Args({30, 3})->Args({200, 3})->Unit(benchmark::kMillisecond);

void BM_DeckScan(benchmark::State& state) {
  const BitString s = random_bits(3, state.range(0));
  const ChannelParams params(0.1, 13);
  const std::size_t batch = 2000;
  std::uint64_t round = 0;
  for (auto _ : state) {
    ChannelParams p = params;
    p.seed += round++;
    benchmark::DoNotOptimize(estimate_deck_streamed(s, p, batch, 3, DeckMode::full));
  }
  state.SetItemsProcessed(state.iterations() * batch);
}
BENCHMARK(BM_DeckScan)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_SubseqCount(benchmark::State& state) {
  const BitString y = random_bits(4, state.range(0));
  const BitString x = random_bits(5, state.range(0) / 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(subseq_count(y, x));
  }
}
BENCHMARK(BM_SubseqCount)->Arg(16)->Arg(64)->Arg(256);

void BM_WeightedInteriorCount(benchmark::State& state) {
  BitString y = random_bits(6, state.range(0));
  BitString x;
  x.push_back(y.at(1));
  x.push_back(1 - y.at(1));
  x.push_back(y.at(-1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(weighted_interior_count(y, x, 0.25));
  }
}
BENCHMARK(BM_WeightedInteriorCount)->Arg(32)->Arg(128);

void BM_ExactOracle(benchmark::State& state) {
  const BitString s = random_bits(7, state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(exact_statistics(s, 0.25, 2));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ExactOracle)->Arg(10)->Arg(12)->Arg(14)->Unit(benchmark::kMillisecond);

void BM_RidgeReconstruct(benchmark::State& state) {
  const std::size_t n = state.range(0);
  const BitString s = random_bits(8, n);
  const DensityMap map = exact_density_map(s, 3, 0.2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ridge_reconstruct(map, n, 3, 0.2, 1e-6, 0.5));
  }
}
BENCHMARK(BM_RidgeReconstruct)->Arg(30)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
