#include <doctest.h>

#include <algorithm>
#include <random>
#include <vsq/enumerate.hpp>

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace vsq;
namespace en = vsq::enumerate;

namespace {

std::vector<Partition> sorted(std::vector<Partition> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST_CASE("counts match the closed formulas and the literal oracle") {
  for (int n = 2; n <= 8; ++n) {
    HypothesisSet u = HypothesisSet::first(n);
    auto oracle_all = oracle::discriminating_partitions(u);
    auto oracle_strong = oracle::discriminating_partitions(u, true);
    CHECK(en::dp_count(n) == oracle_all.size());
    CHECK(en::strong_dp_count(n) == oracle_strong.size());
    CHECK(en::all_dps(u).size() == oracle_all.size());
    CHECK(en::all_dps(u, {.strong_only = true}).size() == oracle_strong.size());
  }
  CHECK(en::dp_count(3) == 12);
  CHECK(en::strong_dp_count(3) == 6);
  CHECK(en::dp_count(5) == 180);
}

TEST_CASE("enumerated set equals the oracle set") {
  HypothesisSet u = HypothesisSet::first(4);
  CHECK(sorted(en::all_dps(u)) == sorted(oracle::discriminating_partitions(u)));
}

TEST_CASE("every yield is a valid discriminating partition") {
  for (const Partition& p : en::all_dps(HypothesisSet::first(5))) {
    QueryClass c = classify(p);
    CHECK((c == QueryClass::StrongDQ || c == QueryClass::WeakDQ));
    CHECK(p.universe() == HypothesisSet::first(5));
  }
}

TEST_CASE("stream order is stable and restartable") {
  HypothesisSet u = HypothesisSet::first(4);
  auto first_run = en::all_dps(u);
  auto second_run = en::all_dps(u);
  CHECK(first_run == second_run);

  en::DpStream stream(u);
  std::vector<Partition> head;
  std::uint64_t checkpoint = 0;
  for (int i = 0; i < 10; ++i) {
    head.push_back(*stream.next());
    if (i == 4) checkpoint = stream.position();
  }
  en::DpStream resumed(u);
  resumed.restart_from(checkpoint);
  CHECK(*resumed.next() == head[5]);
}

TEST_CASE("mirror dedup keeps exactly one of each pair") {
  HypothesisSet u = HypothesisSet::first(3);
  auto deduped = en::all_dps(u, {.canonical_dedup = true});
  CHECK(deduped.size() == 6);  // half of 12
  for (const Partition& p : deduped) {
    CHECK(std::find(deduped.begin(), deduped.end(), p.mirrored()) == deduped.end());
  }
}

TEST_CASE("universes above the cap are refused") {
  CHECK_THROWS_WITH_AS(en::DpStream(HypothesisSet::first(13)),
                       doctest::Contains("enumeration cap"), ValidationError);
  CHECK_NOTHROW(en::DpStream(HypothesisSet::first(13), {.cap = 13}));
}

TEST_CASE("brute force optimum agrees with a literal scan") {
  auto p1 = fixtures::p1();
  auto [best, value] = en::brute_force_optimum(qsm::bal(), fixtures::universe5(), p1);
  // Independent scan over the oracle enumeration.
  double best_oracle = 1e9;
  Partition part_oracle;
  for (const Partition& q : oracle::discriminating_partitions(fixtures::universe5())) {
    double v = std::abs(p1.mass(q.plus()) - p1.mass(q.minus())) + p1.mass(q.zero());
    if (v < best_oracle) {
      best_oracle = v;
      part_oracle = q;
    }
  }
  CHECK(value == doctest::Approx(best_oracle).epsilon(1e-12));
  // p({h1,h3}) = 0.5 exactly, so the optimum is a perfectly balanced strong split.
  CHECK(value == doctest::Approx(0.0));
  CHECK(is_strong(best));
}

TEST_CASE("brute force optimum handles strong-only pools and ties") {
  Distribution uniform = Distribution::uniform(HypothesisSet::first(4));
  auto [best, value] =
      en::brute_force_optimum(qsm::spl(), HypothesisSet::first(4), uniform,
                              {.strong_only = true});
  CHECK(value == 0.0);
  CHECK(best.plus().size() == 2);
  // Ties resolve to the first optimum in stream order.
  en::DpStream stream(HypothesisSet::first(4), {.strong_only = true});
  while (auto p = stream.next()) {
    double v = qsm::evaluate(qsm::spl(), *p, uniform);
    if (v == 0.0) {
      CHECK(*p == best);
      break;
    }
  }
}

TEST_CASE("brute force optimum for the singleton measure") {
  auto d = fixtures::fig_dist();
  auto [best, value] = en::brute_force_optimum(qsm::mps(), HypothesisSet::first(4), d);
  CHECK(value == doctest::Approx(0.41));
  bool singleton_h1 = best.plus() == HypothesisSet::of({0}) || best.minus() == HypothesisSet::of({0});
  CHECK(singleton_h1);
}
