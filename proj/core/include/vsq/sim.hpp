#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "vsq/boxes.hpp"
#include "vsq/core.hpp"
#include "vsq/qsm.hpp"

namespace vsq::sim {

/// The simulated oracle answers consistently with the target hypothesis;
/// when the target predicts neither answer, a fair coin seeded by
/// completion_seed decides, which matches the 1/2 prediction probability
/// of undecided hypotheses and keeps sessions reproducible.
struct OracleSpec {
  HypothesisId target = 0;
  std::uint64_t completion_seed = 0;
};

enum class StopKind {
  SingletonSupport,  // exactly one hypothesis left
  MassThreshold,     // some hypothesis reaches posterior mass theta
};

struct StopRule {
  StopKind kind = StopKind::SingletonSupport;
  double theta = 0.95;
};

/// Pool-based selection: pick the measure-best query among the given
/// partitions. After each answer the pool is projected onto the surviving
/// hypotheses and entries that stop discriminating are dropped.
struct PoolMode {
  std::vector<Partition> pool;
};

/// Synthesis-based selection in the box domain: each round searches for a
/// goal partition over the surviving hypotheses and realizes it as a
/// point query.
struct SynthesisMode {
  boxes::BoxScenario scenario;
  double epsilon = 0.05;
  int max_expansions = 0;
};

using SessionMode = std::variant<PoolMode, SynthesisMode>;

struct Step {
  Partition query;
  Answer answer = Answer::No;
  double answer_prob = 0.0;  // probability of the received answer beforehand
};

struct RunResult {
  int queries_asked = 0;
  std::vector<Step> history;
  Distribution final_dist;
  bool identified = false;
};

/// One sequential active-learning session: select a query, obtain the
/// oracle answer, apply the Bayes update, repeat until the stop criterion
/// holds or no discriminating query remains. The target hypothesis is
/// never eliminated (answers are consistent with it by construction).
RunResult run_session(const Distribution& prior, const qsm::MeasureSpec& measure,
                      const SessionMode& mode, const OracleSpec& oracle,
                      const StopRule& stop = {}, const qsm::EvalOptions& opts = {});

struct BenchScenario {
  std::string name;
  Distribution prior;
  SessionMode mode;
};

struct BenchmarkRow {
  std::string measure;
  std::string scenario;
  int repetitions = 0;
  double mean_queries = 0.0;
  double median_queries = 0.0;
  int max_queries = 0;
  double identification_rate = 0.0;
};

struct RunDetail {
  std::size_t measure_index = 0;
  std::size_t scenario_index = 0;
  int repetition = 0;
  HypothesisId target = 0;
  int queries = 0;
  bool identified = false;
};

/// Runs measures x scenarios x repetitions sessions. The target of each
/// (scenario, repetition) cell is sampled proportionally to the prior
/// from a seed mixed out of (seed, scenario index, repetition), so the
/// whole table is reproducible and all measures face identical targets
/// and coin streams. `jobs` > 1 distributes cells over threads; results
/// are aggregated in index order either way.
std::vector<BenchmarkRow> benchmark(std::span<const qsm::MeasureSpec> measures,
                                    std::span<const BenchScenario> scenarios,
                                    int repetitions, std::uint64_t seed,
                                    const StopRule& stop = {},
                                    const qsm::EvalOptions& opts = {}, int jobs = 1,
                                    std::vector<RunDetail>* details = nullptr);

}  // namespace vsq::sim
