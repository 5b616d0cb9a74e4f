#include <doctest.h>

#include <random>
#include <vsq/core.hpp>

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace vsq;

TEST_CASE("hypothesis sets behave like sets") {
  HypothesisSet s = HypothesisSet::of({0, 2, 5});
  CHECK(s.size() == 3);
  CHECK(s.contains(2));
  CHECK_FALSE(s.contains(1));
  CHECK(s.subset_of(HypothesisSet::first(6)));
  CHECK((s - HypothesisSet::of({2})) == HypothesisSet::of({0, 5}));
  std::vector<HypothesisId> ids(s.begin(), s.end());
  CHECK(ids == std::vector<HypothesisId>{0, 2, 5});
  CHECK_THROWS_AS(HypothesisSet().insert(64), ValidationError);
}

TEST_CASE("partition validation names the offender") {
  HypothesisSet u = HypothesisSet::first(3);
  CHECK_THROWS_WITH_AS(
      Partition::make(HypothesisSet::of({0, 1}), HypothesisSet::of({1, 2}), {}, u),
      doctest::Contains("hypothesis 1"), ValidationError);
  CHECK_THROWS_WITH_AS(Partition::make(HypothesisSet::of({0}), HypothesisSet::of({1}), {}, u),
                       doctest::Contains("hypothesis 2"), ValidationError);
  CHECK_THROWS_AS(
      Partition::make(HypothesisSet::of({0, 3}), HypothesisSet::of({1, 2}), {}, u),
      ValidationError);
}

TEST_CASE("classification of the example pool") {
  CHECK(classify(fixtures::q1()) == QueryClass::StrongDQ);
  CHECK(classify(fixtures::q3()) == QueryClass::StrongDQ);
  CHECK(classify(fixtures::q2()) == QueryClass::WeakDQ);
  CHECK(classify(fixtures::q4()) == QueryClass::WeakDQ);
  Partition all_minus = Partition::make({}, fixtures::universe5(), {}, fixtures::universe5());
  CHECK(classify(all_minus) == QueryClass::NonDiscriminating);
}

TEST_CASE("answer probabilities match the worked numbers") {
  auto p1 = fixtures::p1();
  CHECK(answer_probability(fixtures::q3(), p1, Answer::Yes) == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(answer_probability(fixtures::q2(), p1, Answer::No) == doctest::Approx(0.5).epsilon(1e-9));

  Distribution other = Distribution::uniform(HypothesisSet::first(4));
  CHECK_THROWS_AS(answer_probability(fixtures::q1(), other, Answer::Yes), ValidationError);
}

TEST_CASE("answer probabilities complement and match the oracle") {
  std::mt19937_64 rng(7);
  for (int round = 0; round < 20; ++round) {
    Distribution d = random_distribution(fixtures::universe5(), rng);
    for (const Partition& q : oracle::all_partitions(fixtures::universe5())) {
      double yes = answer_probability(q, d, Answer::Yes);
      double no = answer_probability(q, d, Answer::No);
      REQUIRE(std::abs(yes + no - 1.0) < 1e-12);
      REQUIRE(yes == doctest::Approx(oracle::answer_prob(q, d, Answer::Yes)).epsilon(1e-12));
    }
  }
}

TEST_CASE("eliminated sets") {
  CHECK(eliminated_set(fixtures::q2(), Answer::No) == HypothesisSet::of({0, 1}));
  CHECK(eliminated_set(fixtures::q3(), Answer::Yes) == HypothesisSet::of({0, 1, 2, 4}));
  Partition all_minus = Partition::make({}, fixtures::universe5(), {}, fixtures::universe5());
  CHECK(eliminated_set(all_minus, Answer::Yes) == fixtures::universe5());

  // Elimination by either answer plus the undecided side tiles the universe.
  for (const Partition& q : oracle::all_partitions(fixtures::universe5())) {
    HypothesisSet a = eliminated_set(q, Answer::Yes);
    HypothesisSet b = eliminated_set(q, Answer::No);
    CHECK((a | b | q.zero()) == fixtures::universe5());
    CHECK_FALSE(a.intersects(b));
    CHECK_FALSE((a | b).intersects(q.zero()));
  }
}

TEST_CASE("bayes update reproduces the worked posterior") {
  Distribution after = bayes_update(fixtures::p1(), fixtures::q2(), Answer::No);
  CHECK(after.support() == HypothesisSet::of({2, 3, 4}));
  CHECK(after.prob(2) == doctest::Approx(0.3).epsilon(1e-9));
  CHECK(after.prob(3) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(after.prob(4) == doctest::Approx(0.2).epsilon(1e-9));
}

TEST_CASE("bayes update on a mixed partition equals the likelihood-table oracle") {
  // Uniform prior over four hypotheses, one per side and two undecided.
  Distribution prior = Distribution::uniform(HypothesisSet::first(4));
  Partition part = Partition::make(HypothesisSet::of({0}), HypothesisSet::of({1}),
                                   HypothesisSet::of({2, 3}), HypothesisSet::first(4));
  auto expected = oracle::posterior(prior, part, Answer::Yes);
  // Frozen oracle output: 1*(1/4) : (1/2)*(1/4) : (1/2)*(1/4) normalized.
  CHECK(expected.at(0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(expected.at(2) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(expected.at(3) == doctest::Approx(0.25).epsilon(1e-12));

  Distribution after = bayes_update(prior, part, Answer::Yes);
  CHECK(after.support() == HypothesisSet::of({0, 2, 3}));
  for (auto [h, w] : after.entries()) {
    CHECK(w == doctest::Approx(expected.at(h)).epsilon(1e-12));
  }
}

TEST_CASE("bayes update is a valid distribution and strong updates renormalize") {
  std::mt19937_64 rng(11);
  for (int round = 0; round < 30; ++round) {
    Distribution d = random_distribution(fixtures::universe5(), rng);
    for (const Partition& q : oracle::discriminating_partitions(fixtures::universe5())) {
      for (Answer a : {Answer::Yes, Answer::No}) {
        Distribution after = bayes_update(d, q, a);
        double total = 0.0;
        for (auto [h, w] : after.entries()) {
          REQUIRE(w > 0.0);
          total += w;
        }
        REQUIRE(std::abs(total - 1.0) < 1e-12);
        if (is_strong(q) && a == Answer::Yes) {
          REQUIRE(after.support() == q.plus());
          double side = d.mass(q.plus());
          for (auto [h, w] : after.entries()) {
            REQUIRE(w == doctest::Approx(d.prob(h) / side).epsilon(1e-12));
          }
        }
      }
    }
  }
}

TEST_CASE("conditioning on an impossible answer fails") {
  Partition all_minus = Partition::make({}, fixtures::universe5(), {}, fixtures::universe5());
  CHECK_THROWS_AS(bayes_update(fixtures::p1(), all_minus, Answer::Yes), ValidationError);
}

TEST_CASE("distribution validation") {
  const double negative[] = {0.5, 0.5, 0.0};
  CHECK_THROWS_AS(Distribution::over(HypothesisSet::first(3), negative), ValidationError);
  const double off[] = {0.5, 0.4};
  CHECK_THROWS_AS(Distribution::over(HypothesisSet::first(2), off), ValidationError);
  const double count[] = {1.0};
  CHECK_THROWS_AS(Distribution::over(HypothesisSet::first(2), count), ValidationError);
}

TEST_CASE("random distributions are positive and normalized") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 50; ++i) {
    Distribution d = random_distribution(HypothesisSet::first(6), rng);
    double sum = 0.0;
    for (auto [h, w] : d.entries()) {
      CHECK(w > 0.0);
      sum += w;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("partition projection keeps validity") {
  Partition q = fixtures::q4();
  Partition projected = q.restricted_to(HypothesisSet::of({2, 3, 4}));
  CHECK(projected.plus() == HypothesisSet::of({4}));
  CHECK(projected.minus() == HypothesisSet::of({3}));
  CHECK(projected.zero() == HypothesisSet::of({2}));
}

TEST_CASE("formatting helpers") {
  std::vector<std::string> names = {"h1", "h2", "h3", "h4", "h5"};
  CHECK(to_string(fixtures::q3().plus(), names) == "{h4}");
  CHECK(to_string(fixtures::q2(), names) == "({h1,h2} | {h3,h4} | {h5})");
}
