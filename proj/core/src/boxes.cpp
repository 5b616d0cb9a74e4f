#include "vsq/boxes.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace vsq::boxes {

void BoxScenario::validate() const {
  if (boxes.empty()) throw ValidationError("box scenario has no boxes");
  if (static_cast<int>(boxes.size()) > HypothesisSet::kMaxHypotheses) {
    throw ValidationError("too many boxes");
  }
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    const Box& b = boxes[i];
    if (!(b.x_min < b.x_max) || !(b.y_min < b.y_max) || !std::isfinite(b.x_min) ||
        !std::isfinite(b.x_max) || !std::isfinite(b.y_min) || !std::isfinite(b.y_max)) {
      throw ValidationError("box " + std::to_string(i) + " has degenerate bounds");
    }
  }
  if (dist.support() != universe()) {
    throw ValidationError("box scenario distribution does not cover the boxes");
  }
  for (const Point& p : positives) {
    for (std::size_t i = 0; i < boxes.size(); ++i) {
      if (!boxes[i].contains(p)) {
        throw ValidationError("box " + std::to_string(i) +
                              " misses the positive instance (" + std::to_string(p.x) + ", " +
                              std::to_string(p.y) + ")");
      }
    }
  }
  for (const Point& p : negatives) {
    for (std::size_t i = 0; i < boxes.size(); ++i) {
      if (boxes[i].contains(p)) {
        throw ValidationError("box " + std::to_string(i) +
                              " covers the negative instance (" + std::to_string(p.x) + ", " +
                              std::to_string(p.y) + ")");
      }
    }
  }
}

Partition partition_of_point(const Point& pt, const BoxScenario& scenario,
                             HypothesisSet within) {
  if (!within.subset_of(scenario.universe())) {
    throw ValidationError("hypothesis subset is not part of the box scenario");
  }
  HypothesisSet plus;
  for (HypothesisId h : within) {
    if (scenario.boxes[h].contains(pt)) plus.insert(h);
  }
  return Partition::make(plus, within - plus, {}, within);
}

Partition partition_of_point(const Point& pt, const BoxScenario& scenario) {
  return partition_of_point(pt, scenario, scenario.universe());
}

namespace {

std::vector<double> axis_candidates(std::vector<double> edges) {
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  std::vector<double> out;
  out.reserve(edges.size() * 2 + 1);
  out.push_back(edges.front() - 1.0);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    out.push_back(edges[i]);
    if (i + 1 < edges.size()) out.push_back(0.5 * (edges[i] + edges[i + 1]));
  }
  out.push_back(edges.back() + 1.0);
  return out;
}

}  // namespace

std::vector<Point> candidate_points(const BoxScenario& scenario, HypothesisSet within) {
  if (within.empty()) throw ValidationError("no active boxes");
  std::vector<double> xs, ys;
  for (HypothesisId h : within) {
    xs.push_back(scenario.boxes[h].x_min);
    xs.push_back(scenario.boxes[h].x_max);
    ys.push_back(scenario.boxes[h].y_min);
    ys.push_back(scenario.boxes[h].y_max);
  }
  std::vector<Point> out;
  for (double x : axis_candidates(xs)) {
    for (double y : axis_candidates(ys)) out.push_back({x, y});
  }
  return out;
}

std::optional<Point> realize_query(const Partition& goal, const BoxScenario& scenario) {
  if (!goal.universe().subset_of(scenario.universe())) {
    throw ValidationError("goal partition ranges outside the box scenario universe");
  }
  if (!is_discriminating(goal)) {
    throw ValidationError("goal " + to_string(goal) + " is not discriminating");
  }
  if (!goal.zero().empty()) {
    throw ValidationError("boxes predict every point; a goal with an undecided side "
                          "cannot be realized");
  }
  for (const Point& pt : candidate_points(scenario, goal.universe())) {
    if (partition_of_point(pt, scenario, goal.universe()) == goal) return pt;
  }
  return std::nullopt;
}

std::vector<Partition> realizable_dps(const BoxScenario& scenario, HypothesisSet within) {
  std::set<Partition> seen;
  for (const Point& pt : candidate_points(scenario, within)) {
    Partition p = partition_of_point(pt, scenario, within);
    if (is_discriminating(p)) seen.insert(p);
  }
  return {seen.begin(), seen.end()};
}

QuerySynthesis synthesize_query(synthesis::SearchConfig config, const BoxScenario& scenario,
                                HypothesisSet within, const Distribution& dist) {
  QuerySynthesis result;

  const bool searchable = config.ec == synthesis::EquivClass::EC1 ||
                          config.ec == synthesis::EquivClass::EC2 ||
                          config.ec == synthesis::EquivClass::EC3;
  if (!searchable) {
    // Classes with a closed-form optimum skip the search; when the
    // constructed partition has no witness point, the best realizable
    // one takes its place.
    synthesis::DirectOptimum direct =
        synthesis::direct_optimum(config.ec, within, dist, config.measure, config.eval);
    std::optional<Partition> choice;
    if (realize_query(direct.part, scenario)) {
      choice = direct.part;
    } else {
      result.rejected.push_back(direct.part);
      std::vector<Partition> pool = realizable_dps(scenario, within);
      if (!pool.empty()) {
        choice = pool[qsm::select_best(config.measure, pool, dist, config.eval).first];
      }
    }
    if (!choice) {
      throw InfeasibleError("no realizable discriminating query exists for " +
                            config.measure.str());
    }
    result.partition = *choice;
    result.point = *realize_query(*choice, scenario);
    result.trace.goal = *choice;
    result.trace.goal_value = qsm::evaluate(config.measure, *choice, dist, config.eval);
    return result;
  }

  synthesis::PartitionSearch search(config, within, dist);

  auto accept = [&](const Partition& goal, const Point& pt) {
    result.point = pt;
    result.partition = goal;
    result.trace = search.take_trace();
    result.trace.goal = goal;
    result.trace.goal_value = qsm::evaluate(config.measure, goal, dist, config.eval);
    return result;
  };

  if (config.optimize_balance) {
    // Full exploration first, then try goals best-scored first.
    std::vector<Partition> goals;
    while (auto goal = search.next_goal()) goals.push_back(*goal);
    std::stable_sort(goals.begin(), goals.end(), [&](const Partition& a, const Partition& b) {
      double sa = std::abs(dist.mass(a.plus()) - dist.mass(a.minus()));
      double sb = std::abs(dist.mass(b.plus()) - dist.mass(b.minus()));
      return sa < sb;
    });
    for (const Partition& goal : goals) {
      if (auto pt = realize_query(goal, scenario)) return accept(goal, *pt);
      result.rejected.push_back(goal);
    }
  } else {
    // Rejected goals do not restart anything: the search resumes in place.
    while (auto goal = search.next_goal()) {
      if (auto pt = realize_query(*goal, scenario)) return accept(*goal, *pt);
      result.rejected.push_back(*goal);
    }
  }

  // The goal test came up empty (or everything it produced was
  // unrealizable). Fall back to the expanded discriminating partitions in
  // measure order.
  std::vector<Partition> candidates;
  for (const synthesis::SearchNode& node : search.trace().expanded) {
    if (is_discriminating(node.part) &&
        std::find(result.rejected.begin(), result.rejected.end(), node.part) ==
            result.rejected.end()) {
      candidates.push_back(node.part);
    }
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [&](const Partition& a, const Partition& b) {
                     return qsm::prefers(config.measure, a, b, dist, config.eval);
                   });
  for (const Partition& candidate : candidates) {
    if (auto pt = realize_query(candidate, scenario)) return accept(candidate, *pt);
    result.rejected.push_back(candidate);
  }

  std::string tried;
  for (const Partition& p : result.rejected) {
    if (!tried.empty()) tried += ", ";
    tried += to_string(p);
  }
  throw InfeasibleError("no synthesized goal partition is realizable; tried: " +
                        (tried.empty() ? std::string("none") : tried));
}

QuerySynthesis synthesize_query(const synthesis::SearchConfig& config,
                                const BoxScenario& scenario) {
  return synthesize_query(config, scenario, scenario.universe(), scenario.dist);
}

}  // namespace vsq::boxes
