#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vsq/core.hpp"
#include "vsq/synthesis.hpp"

namespace vsq::boxes {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Axis-parallel rectangle with closed boundaries: points on an edge
/// count as inside, which keeps realizability decidable from the finite
/// edge arrangement.
struct Box {
  double x_min = 0.0, x_max = 0.0, y_min = 0.0, y_max = 0.0;

  bool contains(const Point& p) const {
    return p.x >= x_min && p.x <= x_max && p.y >= y_min && p.y <= y_max;
  }
};

/// Concept-learning domain where hypotheses are boxes and queries are
/// points ("is the point inside the target box?"). Boxes give complete
/// information: every hypothesis predicts an answer for every point, so
/// induced partitions never have an undecided side. The labeled instances
/// pin the version space: every box must cover all positives and no
/// negative.
struct BoxScenario {
  std::vector<std::string> names;  // hypothesis names, index = id
  std::vector<Box> boxes;          // index = HypothesisId
  Distribution dist;
  std::vector<Point> positives;
  std::vector<Point> negatives;

  HypothesisSet universe() const {
    return HypothesisSet::first(static_cast<int>(boxes.size()));
  }

  /// Throws ValidationError on degenerate boxes, distribution mismatch,
  /// or instances violating the version-space constraint.
  void validate() const;
};

/// The partition a point query induces on `within`: boxes containing the
/// point predict Yes, the rest predict No.
Partition partition_of_point(const Point& pt, const BoxScenario& scenario,
                             HypothesisSet within);
Partition partition_of_point(const Point& pt, const BoxScenario& scenario);

/// Candidate query locations covering every cell of the edge arrangement
/// of the active boxes: each distinct edge coordinate, the midpoints
/// between consecutive ones, and one point beyond each extreme, crossed
/// over both axes. Membership is constant on each arrangement cell, so
/// these points realize every realizable partition.
std::vector<Point> candidate_points(const BoxScenario& scenario, HypothesisSet within);

/// A point whose partition equals `goal`, if the region (intersection of
/// the plus boxes minus the union of the minus boxes) is nonempty. The
/// goal must be discriminating with an empty undecided side.
std::optional<Point> realize_query(const Partition& goal, const BoxScenario& scenario);

/// All distinct discriminating partitions realizable by some point,
/// in deterministic order.
std::vector<Partition> realizable_dps(const BoxScenario& scenario, HypothesisSet within);

struct QuerySynthesis {
  Point point;
  Partition partition;
  synthesis::SearchTrace trace;  // trace of the final search round
  std::vector<Partition> rejected;  // goals that turned out unrealizable
};

/// Two-phase query synthesis: find a goal partition (heuristic search for
/// the searchable classes, closed-form construction otherwise), then
/// realize it as a point. After a realization failure the same search
/// resumes at the next goal; when the goal test is unsatisfiable the
/// expanded partitions are tried in measure order. Throws InfeasibleError
/// when nothing realizable remains.
QuerySynthesis synthesize_query(synthesis::SearchConfig config, const BoxScenario& scenario,
                                HypothesisSet within, const Distribution& dist);
QuerySynthesis synthesize_query(const synthesis::SearchConfig& config,
                                const BoxScenario& scenario);

}  // namespace vsq::boxes
