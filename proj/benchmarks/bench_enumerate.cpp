#include <benchmark/benchmark.h>

#include <vsq/enumerate.hpp>

using namespace vsq;

static void BM_StreamAllDps(benchmark::State& state) {
  HypothesisSet u = HypothesisSet::first(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    enumerate::DpStream stream(u);
    std::uint64_t count = 0;
    while (auto p = stream.next()) {
      benchmark::DoNotOptimize(*p);
      ++count;
    }
    benchmark::DoNotOptimize(count);
  }
  state.SetItemsProcessed(state.iterations() * enumerate::dp_count(state.range(0)));
}
BENCHMARK(BM_StreamAllDps)->Arg(6)->Arg(8)->Arg(10);

static void BM_StreamStrongDps(benchmark::State& state) {
  HypothesisSet u = HypothesisSet::first(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    enumerate::DpStream stream(u, {.strong_only = true});
    while (auto p = stream.next()) benchmark::DoNotOptimize(*p);
  }
}
BENCHMARK(BM_StreamStrongDps)->Arg(8)->Arg(10);
