#include <benchmark/benchmark.h>

#include <random>
#include <vsq/synthesis.hpp>

using namespace vsq;

static void BM_PartitionSearch(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(3);
  Distribution dist = random_distribution(HypothesisSet::first(n), rng);
  synthesis::SearchConfig config = synthesis::SearchConfig::for_measure(qsm::rio(2));
  for (auto _ : state) {
    auto trace = synthesis::synthesize_partition(config, HypothesisSet::first(n), dist);
    benchmark::DoNotOptimize(trace);
  }
}
BENCHMARK(BM_PartitionSearch)->Arg(6)->Arg(8)->Arg(10);

static void BM_ExhaustiveBalanceSearch(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(3);
  Distribution dist = random_distribution(HypothesisSet::first(n), rng);
  synthesis::SearchConfig config = synthesis::SearchConfig::for_measure(qsm::rio(2));
  config.optimize_balance = true;
  config.max_expansions = 1 << 20;
  for (auto _ : state) {
    auto trace = synthesis::synthesize_partition(config, HypothesisSet::first(n), dist);
    benchmark::DoNotOptimize(trace);
  }
}
BENCHMARK(BM_ExhaustiveBalanceSearch)->Arg(8)->Arg(10);
