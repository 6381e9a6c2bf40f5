#include <benchmark/benchmark.h>

#include <algorithm>
#include <random>
#include <vector>

#include "combridge/bridgeio.hpp"
#include "combridge/combinat.hpp"
#include "combridge/synth.hpp"

using namespace combridge;

namespace {

std::vector<std::vector<std::uint32_t>> sample(std::uint32_t n, std::uint32_t k, std::size_t count) {
  std::mt19937_64 rng(42);
  std::vector<std::uint32_t> pool(n);
  for (std::uint32_t i = 0; i < n; ++i) pool[i] = i + 1;
  std::vector<std::vector<std::uint32_t>> out;
  for (std::size_t i = 0; i < count; ++i) {
    std::shuffle(pool.begin(), pool.end(), rng);
    std::vector<std::uint32_t> c(pool.begin(), pool.begin() + k);
    std::sort(c.begin(), c.end());
    out.push_back(std::move(c));
  }
  return out;
}

void BM_Rank(benchmark::State& state) {
  const auto k = static_cast<std::uint32_t>(state.range(0));
  const auto combos = sample(700, k, 256);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(rank_group(combos[i++ % combos.size()], 700));
  }
}
BENCHMARK(BM_Rank)->Arg(4)->Arg(10)->Arg(20);

void BM_Unrank(benchmark::State& state) {
  const auto k = static_cast<std::uint32_t>(state.range(0));
  std::vector<Natural> ranks;
  for (const auto& c : sample(700, k, 256)) ranks.push_back(rank_group(c, 700));
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(unrank_group(ranks[i++ % ranks.size()], k, 700));
  }
}
BENCHMARK(BM_Unrank)->Arg(4)->Arg(10)->Arg(20);

void BM_CompressBridge(benchmark::State& state) {
  SynthOptions options;
  options.group_count = static_cast<std::uint64_t>(state.range(0));
  const SynthDataset data = generate_dataset(options);
  const ClassicBridge bridge(data.bridge);
  const ItemUniverse universe = build_universe(data.items, "Item_PK");
  for (auto _ : state) {
    benchmark::DoNotOptimize(compress_bridge(bridge, universe, BridgeMode::grouped));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(data.bridge.size()));
}
BENCHMARK(BM_CompressBridge)->Arg(741)->Arg(7407)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
