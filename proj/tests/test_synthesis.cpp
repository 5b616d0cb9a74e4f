#include <doctest.h>

#include <cmath>
#include <random>
#include <set>
#include <vsq/enumerate.hpp>
#include <vsq/synthesis.hpp>

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace vsq;
namespace syn = vsq::synthesis;

namespace {

Partition strong4(std::initializer_list<HypothesisId> plus) {
  HypothesisSet p = HypothesisSet::of(plus);
  return Partition::make(p, HypothesisSet::first(4) - p, {}, HypothesisSet::first(4));
}

}  // namespace

TEST_CASE("measures map onto their equivalence classes") {
  using qsm::MeasureKind;
  CHECK(syn::equiv_class_of(MeasureKind::H) == syn::EquivClass::EC1);
  CHECK(syn::equiv_class_of(MeasureKind::ENT_Z) == syn::EquivClass::EC1);
  CHECK(syn::equiv_class_of(MeasureKind::EMCA) == syn::EquivClass::EC1);
  CHECK(syn::equiv_class_of(MeasureKind::BAL) == syn::EquivClass::EC1);
  CHECK(syn::equiv_class_of(MeasureKind::SPL) == syn::EquivClass::EC2);
  CHECK(syn::equiv_class_of(MeasureKind::VE) == syn::EquivClass::EC2);
  CHECK(syn::equiv_class_of(MeasureKind::RIO) == syn::EquivClass::EC3);
  CHECK(syn::equiv_class_of(MeasureKind::KL) == syn::EquivClass::EC4);
  CHECK(syn::equiv_class_of(MeasureKind::EMCB) == syn::EquivClass::EC5);
  CHECK(syn::equiv_class_of(MeasureKind::MPS) == syn::EquivClass::EC6);
  CHECK(syn::equiv_class_of(MeasureKind::BME) == syn::EquivClass::EC7);
}

TEST_CASE("projected-balance heuristic reproduces the worked values") {
  auto d = fixtures::fig_dist();
  syn::SearchConfig config = syn::SearchConfig::for_measure(qsm::rio(2));
  Partition p1 = strong4({1});     // ({h2} | {h1,h3,h4} | {})
  Partition p2 = strong4({1, 3});  // ({h2,h4} | {h1,h3} | {})
  double g1 = syn::heuristic(syn::EquivClass::EC3, p1, d, config);
  double g2 = syn::heuristic(syn::EquivClass::EC3, p2, d, config);
  CHECK(g1 == doctest::Approx(std::abs(0.15 + 0.85 / 3 - 0.5)).epsilon(1e-12));
  CHECK(std::abs(g1 - 0.067) <= 1e-3);
  CHECK(std::abs(g2 - 0.02) <= 1e-9);

  Partition balanced = strong4({1, 2});  // p = 0.22 vs 0.78
  CHECK(syn::heuristic(syn::EquivClass::EC1, strong4({0, 2}), d, config) ==
        doctest::Approx(0.02).epsilon(1e-9));  // p(h1)+p(h3) = 0.48
  CHECK(syn::heuristic(syn::EquivClass::EC2, balanced, d, config) == 0.0);
}

TEST_CASE("the elimination-target search walks straight to its goal") {
  auto d = fixtures::fig_dist();
  syn::SearchConfig config = syn::SearchConfig::for_measure(qsm::rio(2));
  syn::SearchTrace trace = syn::synthesize_partition(config, HypothesisSet::first(4), d);

  REQUIRE(trace.goal.has_value());
  CHECK(*trace.goal == strong4({1, 3}));
  CHECK(trace.backtracks == 0);
  REQUIRE(trace.expanded.size() == 3);
  CHECK(trace.expanded[0].part == Partition::make({}, HypothesisSet::first(4), {},
                                                  HypothesisSet::first(4)));
  CHECK(trace.expanded[1].part == strong4({1}));
  CHECK(trace.expanded[2].part == strong4({1, 3}));
  CHECK(trace.expanded[1].moved == 1);
  CHECK(trace.expanded[2].moved == 3);
  CHECK(std::abs(trace.expanded[1].g - 0.067) <= 1e-3);
  CHECK(std::abs(trace.expanded[2].g - 0.02) <= 1e-9);
  // Mass moved along the two edges.
  CHECK(d.prob(*trace.expanded[1].moved) == doctest::Approx(0.15));
  CHECK(d.prob(*trace.expanded[2].moved) == doctest::Approx(0.37));
  CHECK(trace.expanded[2].is_goal);
}

TEST_CASE("an elimination-target goal scores below 1") {
  // With the minus-side count at the target, the size reward vanishes and
  // the measure collapses to half the entropy term, which is negative.
  auto d = fixtures::fig_dist();
  syn::SearchConfig config = syn::SearchConfig::for_measure(qsm::rio(2));
  syn::SearchTrace trace = syn::synthesize_partition(config, HypothesisSet::first(4), d);
  REQUIRE(trace.goal.has_value());
  double rio_value = qsm::evaluate(qsm::rio(2), *trace.goal, d);
  CHECK(rio_value == 0.5 * qsm::evaluate(qsm::ent(), *trace.goal, d));
  CHECK(rio_value < 1.0);
}

TEST_CASE("heuristic guards the empty minus side") {
  auto d = fixtures::fig_dist();
  syn::SearchConfig config = syn::SearchConfig::for_measure(qsm::rio(2));
  Partition leaf = Partition::make(HypothesisSet::first(4), {}, {}, HypothesisSet::first(4));
  CHECK(syn::heuristic(syn::EquivClass::EC3, leaf, d, config) ==
        doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("the search streams every goal exactly once") {
  auto d = fixtures::fig_dist();
  syn::SearchConfig config = syn::SearchConfig::for_measure(qsm::rio(2));
  syn::PartitionSearch search(config, HypothesisSet::first(4), d);
  std::vector<Partition> goals;
  while (auto g = search.next_goal()) goals.push_back(*g);
  CHECK(search.exhausted());
  CHECK(search.next_goal() == std::nullopt);
  // Exactly the two balanced two-element plus sides qualify.
  REQUIRE(goals.size() == 2);
  CHECK(goals[0] == strong4({1, 3}));
  CHECK(goals[1] == strong4({0, 2}));
  // Resuming past a goal does not re-expand anything: the trace holds each
  // partition once.
  std::set<Partition> seen;
  for (const auto& node : search.trace().expanded) {
    CHECK(seen.insert(node.part).second);
  }
}

TEST_CASE("excluding the first goal finds the alternative") {
  auto d = fixtures::fig_dist();
  syn::SearchConfig config = syn::SearchConfig::for_measure(qsm::rio(2));
  config.excluded_goals.push_back(strong4({1, 3}));
  syn::SearchTrace trace = syn::synthesize_partition(config, HypothesisSet::first(4), d);
  REQUIRE(trace.goal.has_value());
  CHECK(*trace.goal == strong4({0, 2}));  // ({h1,h3} | {h2,h4}), balance 0.04
  CHECK(trace.backtracks > 0);
}

TEST_CASE("cardinality-split search on even and odd universes") {
  std::mt19937_64 rng(53);
  for (int n : {4, 5, 6}) {
    Distribution d = random_distribution(HypothesisSet::first(n), rng);
    syn::SearchConfig config = syn::SearchConfig::for_measure(qsm::spl());
    syn::SearchTrace trace = syn::synthesize_partition(config, HypothesisSet::first(n), d);
    REQUIRE(trace.goal.has_value());
    CHECK(std::abs(trace.goal->plus().size() - trace.goal->minus().size()) == n % 2);
    CHECK(trace.goal->zero().empty());
  }
}

TEST_CASE("probability-balance search stays within epsilon of the optimum") {
  std::mt19937_64 rng(59);
  for (int round = 0; round < 40; ++round) {
    Distribution d = random_distribution(HypothesisSet::first(6), rng);
    syn::SearchConfig config = syn::SearchConfig::for_measure(qsm::ent());
    syn::GapReport gap = syn::verify_against_bruteforce(config, HypothesisSet::first(6), d);
    CHECK(gap.balance_achieved - gap.balance_optimum <= config.epsilon + 1e-12);
    CHECK(gap.gap >= -1e-12);
  }
}

TEST_CASE("search input validation") {
  auto d = fixtures::fig_dist();
  syn::SearchConfig config = syn::SearchConfig::for_measure(qsm::kl());
  CHECK_THROWS_AS(syn::synthesize_partition(config, HypothesisSet::first(4), d),
                  ValidationError);
  syn::SearchConfig ec1 = syn::SearchConfig::for_measure(qsm::ent());
  CHECK_THROWS_AS(
      syn::synthesize_partition(ec1, HypothesisSet::first(1),
                                Distribution::uniform(HypothesisSet::first(1))),
      ValidationError);
  ec1.epsilon = 0.0;
  CHECK_THROWS_AS(syn::synthesize_partition(ec1, HypothesisSet::first(4), d), ValidationError);
}

TEST_CASE("singleton construction picks the heaviest hypothesis") {
  auto d = fixtures::fig_dist();
  auto result = syn::direct_optimum(syn::EquivClass::EC6, HypothesisSet::first(4), d);
  CHECK(result.part.plus() == HypothesisSet::of({0}));
  CHECK(result.value == doctest::Approx(0.41));
  CHECK(result.feasible);
}

TEST_CASE("biased-side construction takes the largest light side") {
  auto d = fixtures::fig_dist();
  auto result = syn::direct_optimum(syn::EquivClass::EC7, HypothesisSet::first(4), d);
  CHECK(result.part.plus() == HypothesisSet::of({1, 2}));  // mass 0.22
  CHECK(result.feasible);
  // Exhaustive cross-check: no larger side has mass below one half.
  for (const Partition& q : oracle::discriminating_partitions(HypothesisSet::first(4), true)) {
    for (HypothesisSet side : {q.plus(), q.minus()}) {
      if (d.mass(side) < 0.5) CHECK(side.size() <= result.part.plus().size());
    }
  }

  const double even[] = {0.5, 0.5};
  Distribution coin = Distribution::over(HypothesisSet::first(2), even);
  auto infeasible = syn::direct_optimum(syn::EquivClass::EC7, HypothesisSet::first(2), coin);
  CHECK_FALSE(infeasible.feasible);
}

TEST_CASE("candidate scan matches brute force for the saddle measures") {
  std::mt19937_64 rng(61);
  for (int round = 0; round < 20; ++round) {
    Distribution d = random_distribution(HypothesisSet::first(4), rng);
    for (auto [ec, m] : {std::pair{syn::EquivClass::EC4, qsm::kl()},
                         std::pair{syn::EquivClass::EC5, qsm::emcb()}}) {
      auto direct = syn::direct_optimum(ec, HypothesisSet::first(4), d, m);
      auto [part, value] = enumerate::brute_force_optimum(m, HypothesisSet::first(4), d,
                                                          {.strong_only = true});
      CHECK(direct.value == doctest::Approx(value).epsilon(1e-12));
    }
  }
}

TEST_CASE("gap reports for the elimination-target search") {
  auto d = fixtures::fig_dist();
  syn::SearchConfig config = syn::SearchConfig::for_measure(qsm::rio(2));
  syn::GapReport gap = syn::verify_against_bruteforce(config, HypothesisSet::first(4), d);
  CHECK(gap.goal_found);
  CHECK(gap.gap == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(gap.balance_achieved == doctest::Approx(0.04).epsilon(1e-9));
}

TEST_CASE("exhaustive goal optimization tracks the best balance") {
  std::mt19937_64 rng(67);
  for (int round = 0; round < 20; ++round) {
    Distribution d = random_distribution(HypothesisSet::first(5), rng);
    syn::SearchConfig config = syn::SearchConfig::for_measure(qsm::rio(2));
    config.optimize_balance = true;
    syn::GapReport gap = syn::verify_against_bruteforce(config, HypothesisSet::first(5), d);
    CHECK(std::abs(gap.gap) <= 1e-9);
  }
}

TEST_CASE("plus-side mass grows along every branch") {
  auto d = fixtures::fig_dist();
  syn::SearchConfig config = syn::SearchConfig::for_measure(qsm::rio(2));
  config.optimize_balance = true;  // force a full traversal
  syn::SearchTrace trace = syn::synthesize_partition(config, HypothesisSet::first(4), d);
  for (const syn::SearchNode& node : trace.expanded) {
    if (node.parent < 0) continue;
    const syn::SearchNode& parent = trace.expanded[node.parent];
    CHECK(d.mass(node.part.plus()) > d.mass(parent.part.plus()));
    CHECK(node.part.minus().size() < parent.part.minus().size());
    CHECK(node.part.zero().empty());
  }
}
