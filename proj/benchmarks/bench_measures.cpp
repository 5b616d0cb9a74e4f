#include <benchmark/benchmark.h>

#include <random>
#include <vsq/enumerate.hpp>
#include <vsq/qsm.hpp>

using namespace vsq;

namespace {

struct Setup {
  std::vector<Partition> dps;
  Distribution dist;
  Setup(int n) {
    std::mt19937_64 rng(1);
    dist = random_distribution(HypothesisSet::first(n), rng);
    dps = enumerate::all_dps(HypothesisSet::first(n));
  }
};

void evaluate_all(benchmark::State& state, const qsm::MeasureSpec& m) {
  Setup setup(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    double acc = 0.0;
    for (const Partition& p : setup.dps) acc += qsm::evaluate(m, p, setup.dist);
    benchmark::DoNotOptimize(acc);
  }
  state.SetItemsProcessed(state.iterations() * setup.dps.size());
}

}  // namespace

static void BM_EvaluateENT(benchmark::State& state) { evaluate_all(state, qsm::ent()); }
BENCHMARK(BM_EvaluateENT)->Arg(5)->Arg(8);

static void BM_EvaluateKL(benchmark::State& state) { evaluate_all(state, qsm::kl()); }
BENCHMARK(BM_EvaluateKL)->Arg(5)->Arg(8);

static void BM_EvaluateRIO(benchmark::State& state) { evaluate_all(state, qsm::rio(2)); }
BENCHMARK(BM_EvaluateRIO)->Arg(5)->Arg(8);

static void BM_SelectBest(benchmark::State& state) {
  Setup setup(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto best = qsm::select_best(qsm::ent(), setup.dps, setup.dist);
    benchmark::DoNotOptimize(best);
  }
}
BENCHMARK(BM_SelectBest)->Arg(5)->Arg(8);

BENCHMARK_MAIN();
