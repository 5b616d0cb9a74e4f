#pragma once

// Shared hand-built fixtures: the five-hypothesis running example with its
// four pool partitions and three probability vectors, and the
// four-rectangle box fixture.

#include <vsq/boxes.hpp>
#include <vsq/core.hpp>

namespace fixtures {

using vsq::Distribution;
using vsq::HypothesisSet;
using vsq::Partition;

// Ids 0..4 are h1..h5.
inline HypothesisSet universe5() { return HypothesisSet::first(5); }

inline Distribution p1() {
  const double w[] = {0.35, 0.05, 0.15, 0.25, 0.2};
  return Distribution::over(universe5(), w);
}
inline Distribution p2() {
  const double w[] = {0.01, 0.02, 0.8, 0.15, 0.02};
  return Distribution::over(universe5(), w);
}
inline Distribution p3() {
  const double w[] = {0.4, 0.2, 0.05, 0.1, 0.25};
  return Distribution::over(universe5(), w);
}

inline Partition q1() {
  return Partition::make(HypothesisSet::of({0, 1}), HypothesisSet::of({2, 3, 4}), {},
                         universe5());
}
inline Partition q2() {
  return Partition::make(HypothesisSet::of({0, 1}), HypothesisSet::of({2, 3}),
                         HypothesisSet::of({4}), universe5());
}
inline Partition q3() {
  return Partition::make(HypothesisSet::of({3}), HypothesisSet::of({0, 1, 2, 4}), {},
                         universe5());
}
inline Partition q4() {
  return Partition::make(HypothesisSet::of({0, 1, 4}), HypothesisSet::of({3}),
                         HypothesisSet::of({2}), universe5());
}

inline std::vector<Partition> pool4() { return {q1(), q2(), q3(), q4()}; }

// Four overlapping rectangles with p = (0.41, 0.15, 0.07, 0.37). Chosen so
// that ({h2} | rest) and ({h2,h4} | {h1,h3}) are realizable while
// ({h1,h3} | {h2,h4}) is not: the h1/h3 overlap lies inside h2.
inline vsq::boxes::BoxScenario box4() {
  vsq::boxes::BoxScenario sc;
  sc.names = {"h1", "h2", "h3", "h4"};
  sc.boxes = {{0, 8, 0, 8}, {2, 12, 2, 12}, {3, 9, 3, 9}, {4, 14, 4, 14}};
  const double w[] = {0.41, 0.15, 0.07, 0.37};
  sc.dist = Distribution::over(HypothesisSet::first(4), w);
  sc.positives = {{5, 5}, {6, 6}};
  sc.negatives = {{1, 13}, {13, 1}, {-2, -2}};
  sc.validate();
  return sc;
}

inline Distribution fig_dist() {
  const double w[] = {0.41, 0.15, 0.07, 0.37};
  return Distribution::over(HypothesisSet::first(4), w);
}

}  // namespace fixtures
