#include "vsq/sim.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

#include "vsq/synthesis.hpp"

namespace vsq::sim {

namespace {

bool stop_met(const Distribution& dist, const StopRule& stop) {
  if (stop.kind == StopKind::SingletonSupport) return dist.size() == 1;
  return dist.prob(dist.argmax()) >= stop.theta;
}

bool target_identified(const Distribution& dist, const StopRule& stop, HypothesisId target) {
  if (stop.kind == StopKind::SingletonSupport) {
    return dist.support() == HypothesisSet::of({target});
  }
  return dist.prob(target) >= stop.theta;
}

Answer oracle_answer(const Partition& query, HypothesisId target, std::mt19937_64& coin) {
  if (query.plus().contains(target)) return Answer::Yes;
  if (query.minus().contains(target)) return Answer::No;
  return (coin() & 1) ? Answer::Yes : Answer::No;
}

// Next query in pool mode, or nullopt when the pool has no discriminating
// entry left.
std::optional<Partition> select_pool_query(std::vector<Partition>& pool,
                                           const Distribution& dist,
                                           const qsm::MeasureSpec& measure,
                                           const qsm::EvalOptions& opts) {
  std::vector<Partition> live;
  live.reserve(pool.size());
  for (const Partition& p : pool) {
    Partition projected = p.restricted_to(dist.support());
    if (is_discriminating(projected)) live.push_back(projected);
  }
  pool = live;
  if (pool.empty()) return std::nullopt;
  auto [index, value] = qsm::select_best(measure, pool, dist, opts);
  (void)value;
  return pool[index];
}

std::optional<Partition> select_synthesis_query(const SynthesisMode& mode,
                                                const Distribution& dist,
                                                const qsm::MeasureSpec& measure,
                                                const qsm::EvalOptions& opts) {
  if (dist.size() < 2) return std::nullopt;
  synthesis::SearchConfig config = synthesis::SearchConfig::for_measure(measure);
  config.epsilon = mode.epsilon;
  config.max_expansions = mode.max_expansions;
  config.eval = opts;
  try {
    return boxes::synthesize_query(config, mode.scenario, dist.support(), dist).partition;
  } catch (const InfeasibleError&) {
    return std::nullopt;
  }
}

}  // namespace

RunResult run_session(const Distribution& prior, const qsm::MeasureSpec& measure,
                      const SessionMode& mode, const OracleSpec& oracle,
                      const StopRule& stop, const qsm::EvalOptions& opts) {
  if (!prior.support().contains(oracle.target)) {
    throw ValidationError("target hypothesis " + std::to_string(oracle.target) +
                          " has no prior mass");
  }
  if (const auto* pool_mode = std::get_if<PoolMode>(&mode)) {
    for (const Partition& p : pool_mode->pool) {
      if (p.universe() != prior.support()) {
        throw ValidationError("pool partition " + to_string(p) +
                              " does not cover the session universe");
      }
    }
  } else {
    std::get<SynthesisMode>(mode).scenario.validate();
  }

  RunResult result;
  result.final_dist = prior;
  std::mt19937_64 coin(oracle.completion_seed);
  std::vector<Partition> pool;
  if (const auto* pool_mode = std::get_if<PoolMode>(&mode)) pool = pool_mode->pool;

  while (!stop_met(result.final_dist, stop)) {
    std::optional<Partition> query =
        std::holds_alternative<PoolMode>(mode)
            ? select_pool_query(pool, result.final_dist, measure, opts)
            : select_synthesis_query(std::get<SynthesisMode>(mode), result.final_dist,
                                     measure, opts);
    if (!query) break;
    Answer a = oracle_answer(*query, oracle.target, coin);
    // Coin answers only occur when the target is undecided, so it always
    // survives.
    if (eliminated_set(*query, a).contains(oracle.target)) {
      throw std::logic_error("oracle answer eliminated the target hypothesis");
    }
    double pa = answer_probability(*query, result.final_dist, a);
    result.final_dist = bayes_update(result.final_dist, *query, a);
    result.history.push_back({*query, a, pa});
    ++result.queries_asked;
  }
  result.identified = target_identified(result.final_dist, stop, oracle.target);
  return result;
}

namespace {

HypothesisId sample_target(const Distribution& prior, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double r = u(rng);
  double acc = 0.0;
  HypothesisId last = prior.support().min();
  for (auto [h, w] : prior.entries()) {
    acc += w;
    last = h;
    if (r < acc) return h;
  }
  return last;
}

}  // namespace

std::vector<BenchmarkRow> benchmark(std::span<const qsm::MeasureSpec> measures,
                                    std::span<const BenchScenario> scenarios,
                                    int repetitions, std::uint64_t seed,
                                    const StopRule& stop, const qsm::EvalOptions& opts,
                                    int jobs, std::vector<RunDetail>* details) {
  if (measures.empty() || scenarios.empty() || repetitions < 1) {
    throw ValidationError("benchmark needs measures, scenarios and at least 1 repetition");
  }
  const std::size_t cells = measures.size() * scenarios.size() * repetitions;
  std::vector<RunDetail> runs(cells);

  auto run_cell = [&](std::size_t cell) {
    const std::size_t m = cell / (scenarios.size() * repetitions);
    const std::size_t s = (cell / repetitions) % scenarios.size();
    const int rep = static_cast<int>(cell % repetitions);
    // Identical (scenario, repetition) cells share target and coin stream
    // across measures.
    std::uint64_t cell_seed = mix_seed(seed, s, static_cast<std::uint64_t>(rep));
    std::mt19937_64 rng(cell_seed);
    HypothesisId target = sample_target(scenarios[s].prior, rng);
    OracleSpec oracle{target, mix_seed(cell_seed, 1, 0)};
    RunResult r = run_session(scenarios[s].prior, measures[m], scenarios[s].mode, oracle,
                              stop, opts);
    runs[cell] = {m, s, rep, target, r.queries_asked, r.identified};
  };

  if (jobs <= 1) {
    for (std::size_t c = 0; c < cells; ++c) run_cell(c);
  } else {
    std::vector<std::thread> workers;
    std::size_t chunk = (cells + jobs - 1) / jobs;
    for (int w = 0; w < jobs; ++w) {
      std::size_t begin = w * chunk;
      std::size_t end = std::min(cells, begin + chunk);
      if (begin >= end) break;
      workers.emplace_back([&, begin, end] {
        for (std::size_t c = begin; c < end; ++c) run_cell(c);
      });
    }
    for (auto& t : workers) t.join();
  }

  std::vector<BenchmarkRow> rows;
  for (std::size_t m = 0; m < measures.size(); ++m) {
    for (std::size_t s = 0; s < scenarios.size(); ++s) {
      std::vector<int> counts;
      int identified = 0;
      for (int rep = 0; rep < repetitions; ++rep) {
        const RunDetail& d = runs[(m * scenarios.size() + s) * repetitions + rep];
        counts.push_back(d.queries);
        identified += d.identified ? 1 : 0;
      }
      std::sort(counts.begin(), counts.end());
      double mean = 0.0;
      for (int c : counts) mean += c;
      mean /= counts.size();
      double median = counts.size() % 2 == 1
                          ? counts[counts.size() / 2]
                          : 0.5 * (counts[counts.size() / 2 - 1] + counts[counts.size() / 2]);
      rows.push_back({measures[m].str(), scenarios[s].name, repetitions, mean, median,
                      counts.back(), static_cast<double>(identified) / repetitions});
    }
  }
  if (details) *details = std::move(runs);
  return rows;
}

}  // namespace vsq::sim
