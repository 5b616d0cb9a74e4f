#include <doctest.h>

#include <random>
#include <vsq/enumerate.hpp>
#include <vsq/sim.hpp>

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace vsq;
namespace sm = vsq::sim;

TEST_CASE("pool session on the example scenario identifies the target") {
  sm::PoolMode mode{fixtures::pool4()};
  sm::OracleSpec oracle{3, 123};  // target h4
  sm::RunResult r = sm::run_session(fixtures::p1(), qsm::bal(), mode, oracle);

  REQUIRE(r.queries_asked == 2);
  // Q1 wins the first round on the tie-break, h4 answers No.
  CHECK(r.history[0].query == fixtures::q1());
  CHECK(r.history[0].answer == Answer::No);
  CHECK(r.history[0].answer_prob == doctest::Approx(0.6));
  // Second round: the projection of Q3 onto {h3,h4,h5} wins; h4 answers Yes.
  CHECK(r.history[1].query ==
        Partition::make(HypothesisSet::of({3}), HypothesisSet::of({2, 4}), {},
                        HypothesisSet::of({2, 3, 4})));
  CHECK(r.history[1].answer == Answer::Yes);
  CHECK(r.identified);
  CHECK(r.final_dist.support() == HypothesisSet::of({3}));
}

TEST_CASE("a target already above the mass threshold needs no queries") {
  sm::PoolMode mode{fixtures::pool4()};
  sm::OracleSpec oracle{2, 0};  // h3 has mass 0.8 under p2
  sm::RunResult r = sm::run_session(fixtures::p2(), qsm::ent(), mode, oracle,
                                    {sm::StopKind::MassThreshold, 0.75});
  CHECK(r.queries_asked == 0);
  CHECK(r.identified);
}

TEST_CASE("synthesis session in the box domain") {
  sm::SynthesisMode mode{fixtures::box4(), 0.05, 0};
  sm::OracleSpec oracle{3, 9};  // target h4
  sm::RunResult r = sm::run_session(fixtures::fig_dist(), qsm::rio(2), mode, oracle);

  REQUIRE(r.queries_asked >= 1);
  // First query realizes the balanced ({h2,h4} | {h1,h3}) goal; the target
  // predicts Yes, eliminating h1 and h3.
  CHECK(r.history[0].query.plus() == HypothesisSet::of({1, 3}));
  CHECK(r.history[0].answer == Answer::Yes);
  CHECK(r.identified);
  CHECK(r.final_dist.support() == HypothesisSet::of({3}));
  CHECK(r.queries_asked == 2);
}

TEST_CASE("the target hypothesis survives every session") {
  std::mt19937_64 rng(71);
  auto pool = enumerate::all_dps(HypothesisSet::first(5));
  for (int round = 0; round < 25; ++round) {
    Distribution prior = random_distribution(HypothesisSet::first(5), rng);
    HypothesisId target = static_cast<HypothesisId>(rng() % 5);
    sm::RunResult r = sm::run_session(prior, qsm::ent(), sm::PoolMode{pool},
                                      {target, rng()});
    CHECK(r.final_dist.support().contains(target));
    CHECK(r.identified);
    // Pool sessions can never ask more queries than the pool holds.
    CHECK(r.queries_asked <= static_cast<int>(pool.size()));
    // Answers predicted by the target only ever raise its posterior.
    Distribution d = prior;
    for (const sm::Step& step : r.history) {
      double before = d.prob(target);
      d = bayes_update(d, step.query, step.answer);
      bool predicted = (step.answer == Answer::Yes ? step.query.plus() : step.query.minus())
                           .contains(target);
      if (predicted) CHECK(d.prob(target) >= before - 1e-12);
    }
  }
}

TEST_CASE("sessions reject foreign targets and mismatched pools") {
  CHECK_THROWS_AS(sm::run_session(fixtures::p1(), qsm::ent(), sm::PoolMode{fixtures::pool4()},
                                  {7, 0}),
                  ValidationError);
  sm::PoolMode bad{{Partition::make(HypothesisSet::of({0}), HypothesisSet::of({1}), {},
                                    HypothesisSet::first(2))}};
  CHECK_THROWS_AS(sm::run_session(fixtures::p1(), qsm::ent(), bad, {0, 0}), ValidationError);
}

TEST_CASE("equivalent measures run identical sessions") {
  auto pool = enumerate::all_dps(HypothesisSet::first(5));
  for (HypothesisId target = 0; target < 5; ++target) {
    sm::OracleSpec oracle{target, 1234};
    auto a = sm::run_session(fixtures::p1(), qsm::entropy(), sm::PoolMode{pool}, oracle);
    auto b = sm::run_session(fixtures::p1(), qsm::ent_z(0.0), sm::PoolMode{pool}, oracle);
    auto c = sm::run_session(fixtures::p1(), qsm::lc(), sm::PoolMode{pool}, oracle);
    auto d = sm::run_session(fixtures::p1(), qsm::gini(), sm::PoolMode{pool}, oracle);
    REQUIRE(a.queries_asked == b.queries_asked);
    REQUIRE(a.queries_asked == c.queries_asked);
    REQUIRE(a.queries_asked == d.queries_asked);
    for (int i = 0; i < a.queries_asked; ++i) {
      CHECK(a.history[i].query == b.history[i].query);
      CHECK(a.history[i].query == c.history[i].query);
      CHECK(a.history[i].query == d.history[i].query);
      CHECK(a.history[i].answer == b.history[i].answer);
    }
  }
}

TEST_CASE("splitting in half takes exactly log2 queries on a uniform universe") {
  auto pool = enumerate::all_dps(HypothesisSet::first(8), {.strong_only = true});
  CHECK(pool.size() == 254);
  Distribution uniform = Distribution::uniform(HypothesisSet::first(8));
  for (HypothesisId target = 0; target < 8; ++target) {
    for (std::uint64_t seed : {0ULL, 7ULL, 99ULL}) {
      sm::RunResult r = sm::run_session(uniform, qsm::spl(), sm::PoolMode{pool},
                                        {target, seed});
      CHECK(r.queries_asked == 3);
      CHECK(r.identified);
    }
  }
}

TEST_CASE("benchmark is reproducible and fair across equivalent measures") {
  std::vector<qsm::MeasureSpec> measures = {qsm::entropy(), qsm::ent_z(0.0), qsm::spl()};
  std::vector<sm::BenchScenario> scenarios;
  scenarios.push_back({"pool5", fixtures::p1(), sm::PoolMode{enumerate::all_dps(fixtures::universe5())}});
  scenarios.push_back({"boxes", fixtures::fig_dist(), sm::SynthesisMode{fixtures::box4(), 0.05, 0}});

  std::vector<sm::RunDetail> details1, details2;
  auto rows1 = sm::benchmark(measures, scenarios, 6, 42, {}, {}, 1, &details1);
  auto rows2 = sm::benchmark(measures, scenarios, 6, 42, {}, {}, 1, &details2);
  REQUIRE(rows1.size() == rows2.size());
  for (std::size_t i = 0; i < rows1.size(); ++i) {
    CHECK(rows1[i].measure == rows2[i].measure);
    CHECK(rows1[i].mean_queries == rows2[i].mean_queries);
    CHECK(rows1[i].median_queries == rows2[i].median_queries);
    CHECK(rows1[i].max_queries == rows2[i].max_queries);
  }
  // The two equivalent measures see identical targets and therefore
  // identical query counts. Rows are measure-major: (entropy, pool5),
  // (entropy, boxes), (ENT_z=0, pool5), (ENT_z=0, boxes), ...
  CHECK(rows1[0].mean_queries == rows1[2].mean_queries);
  CHECK(rows1[1].mean_queries == rows1[3].mean_queries);

  // Worker parallelism must not change anything.
  auto rows_jobs = sm::benchmark(measures, scenarios, 6, 42, {}, {}, 3);
  for (std::size_t i = 0; i < rows1.size(); ++i) {
    CHECK(rows1[i].mean_queries == rows_jobs[i].mean_queries);
    CHECK(rows1[i].identification_rate == rows_jobs[i].identification_rate);
  }
}

TEST_CASE("a two-hypothesis scenario costs one query for every measure") {
  Distribution coin = Distribution::uniform(HypothesisSet::first(2));
  auto pool = enumerate::all_dps(HypothesisSet::first(2));
  for (const auto& m : {qsm::ent(), qsm::spl(), qsm::lc(), qsm::bme(), qsm::mps(), qsm::kl(),
                        qsm::emcb(), qsm::rio(1)}) {
    sm::RunResult r = sm::run_session(coin, m, sm::PoolMode{pool}, {1, 5});
    CHECK(r.queries_asked == 1);
    CHECK(r.identified);
  }
}
