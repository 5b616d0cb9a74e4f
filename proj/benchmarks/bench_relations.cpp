#include <benchmark/benchmark.h>

#include <random>
#include <vsq/enumerate.hpp>
#include <vsq/relations.hpp>

using namespace vsq;

static void BM_DpoPairScan(benchmark::State& state) {
  auto dps = enumerate::all_dps(HypothesisSet::first(static_cast<int>(state.range(0))));
  for (auto _ : state) {
    auto pairs = relations::dpo_related_pairs(dps);
    benchmark::DoNotOptimize(pairs);
  }
  state.SetItemsProcessed(state.iterations() * dps.size() * dps.size());
}
BENCHMARK(BM_DpoPairScan)->Arg(4)->Arg(5);

static void BM_ComplianceCheck(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto dps = enumerate::all_dps(HypothesisSet::first(n));
  auto pairs = relations::dpo_related_pairs(dps);
  std::mt19937_64 rng(2);
  Distribution dist = random_distribution(HypothesisSet::first(n), rng);
  for (auto _ : state) {
    auto report = relations::check_compliance(qsm::ent(), dps, dist, pairs);
    benchmark::DoNotOptimize(report);
  }
}
BENCHMARK(BM_ComplianceCheck)->Arg(4)->Arg(5);
