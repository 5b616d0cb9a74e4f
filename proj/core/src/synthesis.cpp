#include "vsq/synthesis.hpp"

#include <algorithm>
#include <cmath>

#include "vsq/enumerate.hpp"

namespace vsq::synthesis {

EquivClass equiv_class_of(qsm::MeasureKind kind) {
  using K = qsm::MeasureKind;
  switch (kind) {
    case K::LC:
    case K::M:
    case K::H:
    case K::GI:
    case K::ENT:
    case K::ENT_Z:
    case K::EMCA:
    case K::EMCA_Z:
    case K::BAL:
      return EquivClass::EC1;
    case K::SPL:
    case K::SPL_Z:
    case K::VE:
      return EquivClass::EC2;
    case K::RIO:
    case K::RIO_Z:
      return EquivClass::EC3;
    case K::KL:
      return EquivClass::EC4;
    case K::EMCB:
      return EquivClass::EC5;
    case K::MPS:
    case K::MPS_PRIME:
      return EquivClass::EC6;
    case K::BME:
      return EquivClass::EC7;
  }
  throw ValidationError("unhandled measure kind");
}

std::string_view to_string(EquivClass ec) {
  switch (ec) {
    case EquivClass::EC1: return "EC1";
    case EquivClass::EC2: return "EC2";
    case EquivClass::EC3: return "EC3";
    case EquivClass::EC4: return "EC4";
    case EquivClass::EC5: return "EC5";
    case EquivClass::EC6: return "EC6";
    case EquivClass::EC7: return "EC7";
  }
  return "?";
}

SearchConfig SearchConfig::for_measure(const qsm::MeasureSpec& m) {
  SearchConfig c;
  c.measure = m;
  c.ec = equiv_class_of(m.kind);
  return c;
}

namespace {

double balance(const Partition& part, const Distribution& dist) {
  return std::abs(dist.mass(part.plus()) - dist.mass(part.minus()));
}

int count_diff(const Partition& part) {
  return std::abs(part.plus().size() - part.minus().size());
}

void require_searchable(EquivClass ec) {
  if (ec != EquivClass::EC1 && ec != EquivClass::EC2 && ec != EquivClass::EC3) {
    throw ValidationError(std::string("class ") + std::string(to_string(ec)) +
                          " has a direct construction; use direct_optimum");
  }
}

}  // namespace

double heuristic(EquivClass ec, const Partition& part, const Distribution& dist,
                 const SearchConfig& config) {
  require_searchable(ec);
  const int total = part.universe().size();
  switch (ec) {
    case EquivClass::EC1:
      return std::abs(dist.mass(part.plus()) - 0.5);
    case EquivClass::EC2:
      return std::abs(part.plus().size() - total / 2);
    default: {  // EC3
      const int n_minus = part.minus().size();
      if (n_minus == 0) return std::abs(dist.mass(part.plus()) - 0.5);
      const double fill = (config.measure.n - part.plus().size()) *
                          (dist.mass(part.minus()) / n_minus);
      return std::abs(dist.mass(part.plus()) + fill - 0.5);
    }
  }
}

namespace {

double goal_score(EquivClass ec, const Partition& part, const Distribution& dist) {
  return ec == EquivClass::EC2 ? count_diff(part) : balance(part, dist);
}

}  // namespace

PartitionSearch::PartitionSearch(SearchConfig config, HypothesisSet universe,
                                 Distribution dist)
    : config_(std::move(config)), universe_(universe), dist_(std::move(dist)) {
  require_searchable(config_.ec);
  if (universe_.size() < 2) {
    throw ValidationError("partition search needs at least 2 hypotheses");
  }
  if (universe_ != dist_.support()) {
    throw ValidationError("search universe does not match the distribution support");
  }
  if (config_.ec == EquivClass::EC3 && config_.measure.n < 1) {
    throw ValidationError("EC3 search needs the elimination target n of a RIO measure");
  }
  if (!(config_.epsilon > 0.0)) throw ValidationError("epsilon must be positive");
  budget_ = config_.max_expansions > 0 ? config_.max_expansions
                                       : 10 * universe_.size() * universe_.size();
  Partition root = Partition::make({}, universe_, {}, universe_);
  expand(root, heuristic(config_.ec, root, dist_, config_), std::nullopt, -1);
}

bool PartitionSearch::is_goal(const Partition& part) const {
  if (!is_discriminating(part)) return false;
  switch (config_.ec) {
    case EquivClass::EC1:
      return balance(part, dist_) <= config_.epsilon;
    case EquivClass::EC2:
      return count_diff(part) <= universe_.size() % 2;
    default:  // EC3
      return std::min(part.plus().size(), part.minus().size()) == config_.measure.n &&
             balance(part, dist_) <= config_.epsilon;
  }
}

// True when no descendant of a node with this plus side can be a goal;
// p(V+) and |V+| only grow along a branch.
bool PartitionSearch::prune_below(const Partition& part) const {
  switch (config_.ec) {
    case EquivClass::EC1:
      return dist_.mass(part.plus()) - dist_.mass(part.minus()) > config_.epsilon;
    case EquivClass::EC2:
      return part.plus().size() > (universe_.size() + 1) / 2;
    default:  // EC3
      return part.plus().size() > config_.measure.n;
  }
}

bool PartitionSearch::excluded(const Partition& part) const {
  return std::find(config_.excluded_goals.begin(), config_.excluded_goals.end(), part) !=
         config_.excluded_goals.end();
}

// Records the node, keeps the best-by-measure fallback up to date, and
// pushes its frame with the children ordered best-heuristic-first.
int PartitionSearch::expand(const Partition& part, double g,
                            std::optional<HypothesisId> moved, int parent) {
  const int index = static_cast<int>(trace_.expanded.size());
  const bool usable_goal = is_goal(part) && !excluded(part);
  trace_.expanded.push_back({part, g, moved, parent, usable_goal, 0, false});
  if (is_discriminating(part) && !excluded(part)) {
    const double value = qsm::evaluate(config_.measure, part, dist_, config_.eval);
    if (!trace_.best_found ||
        qsm::improves(value, trace_.best_value, config_.measure.direction())) {
      trace_.best_found = part;
      trace_.best_value = value;
    }
  }
  Frame frame{index, {}, 0};
  for (HypothesisId h : part.minus()) {
    // Ascending move indices make every plus-side subset reachable
    // exactly once.
    if (moved && h <= *moved) continue;
    Partition child = Partition::make(part.plus() | HypothesisSet::of({h}),
                                      part.minus() - HypothesisSet::of({h}), part.zero(),
                                      universe_);
    ++trace_.generated;
    if (prune_below(child) && !is_goal(child)) {
      ++trace_.pruned;
      ++trace_.expanded[index].pruned_children;
      continue;
    }
    frame.children.emplace_back(h, heuristic(config_.ec, child, dist_, config_));
  }
  std::sort(frame.children.begin(), frame.children.end(),
            [](const auto& a, const auto& b) {
              return a.second != b.second ? a.second < b.second : a.first < b.first;
            });
  stack_.push_back(std::move(frame));
  return index;
}

std::optional<Partition> PartitionSearch::next_goal() {
  if (exhausted_) return std::nullopt;
  // Goals are yielded at expansion time, so each one comes out exactly
  // once; resumption descends into the latest goal's own subtree first.
  while (!stack_.empty()) {
    Frame& frame = stack_.back();
    if (frame.next >= frame.children.size()) {
      trace_.expanded[frame.node_index].backtracked = true;
      ++trace_.backtracks;
      stack_.pop_back();
      continue;
    }
    if (static_cast<int>(trace_.expanded.size()) >= budget_) {
      exhausted_ = true;
      return std::nullopt;
    }
    const Partition parent = trace_.expanded[frame.node_index].part;
    auto [moved, g] = frame.children[frame.next++];
    Partition child = Partition::make(parent.plus() | HypothesisSet::of({moved}),
                                      parent.minus() - HypothesisSet::of({moved}),
                                      parent.zero(), universe_);
    int index = expand(child, g, moved, frame.node_index);
    if (trace_.expanded[index].is_goal) return trace_.expanded[index].part;
  }
  // Exhausted the whole tree; the root retreat is not a backtrack.
  exhausted_ = true;
  --trace_.backtracks;
  trace_.expanded[0].backtracked = false;
  return std::nullopt;
}

SearchTrace synthesize_partition(const SearchConfig& config, HypothesisSet universe,
                                 const Distribution& dist) {
  PartitionSearch search(config, universe, dist);
  if (!config.optimize_balance) {
    std::optional<Partition> goal = search.next_goal();
    SearchTrace trace = search.take_trace();
    if (goal) {
      trace.goal = *goal;
      trace.goal_value = qsm::evaluate(config.measure, *goal, dist, config.eval);
    }
    return trace;
  }
  // Full exploration: keep the goal with the best secondary criterion
  // (ties resolve to the earlier find).
  std::optional<Partition> best;
  double best_score = 0.0;
  while (auto goal = search.next_goal()) {
    double score = goal_score(config.ec, *goal, dist);
    if (!best || score < best_score - 1e-15) {
      best = *goal;
      best_score = score;
    }
  }
  SearchTrace trace = search.take_trace();
  if (best) {
    trace.goal = *best;
    trace.goal_value = qsm::evaluate(config.measure, *best, dist, config.eval);
  }
  return trace;
}

DirectOptimum direct_optimum(EquivClass ec, HypothesisSet universe, const Distribution& dist,
                             const std::optional<qsm::MeasureSpec>& measure,
                             const qsm::EvalOptions& eval) {
  if (universe.size() < 2) {
    throw ValidationError("optimal-query construction needs at least 2 hypotheses");
  }
  if (universe != dist.support()) {
    throw ValidationError("universe does not match the distribution support");
  }
  auto value_of = [&](const Partition& p, double fallback) {
    return measure ? qsm::evaluate(*measure, p, dist, eval) : fallback;
  };
  switch (ec) {
    case EquivClass::EC6: {
      HypothesisId star = dist.argmax();
      HypothesisSet single = HypothesisSet::of({star});
      Partition part = Partition::make(single, universe - single, {}, universe);
      return {part, value_of(part, dist.prob(star)), true};
    }
    case EquivClass::EC7: {
      // Cheapest-first greedy fills the largest side of mass < 1/2: any
      // (k+1)-subset weighs at least the k+1 cheapest hypotheses.
      std::vector<HypothesisId> ids(universe.begin(), universe.end());
      std::sort(ids.begin(), ids.end(), [&](HypothesisId a, HypothesisId b) {
        return dist.prob(a) != dist.prob(b) ? dist.prob(a) < dist.prob(b) : a < b;
      });
      HypothesisSet side;
      double mass = 0.0;
      for (HypothesisId h : ids) {
        if (mass + dist.prob(h) >= 0.5) break;
        side.insert(h);
        mass += dist.prob(h);
      }
      if (side.empty()) {
        HypothesisSet single = HypothesisSet::of({ids.front()});
        Partition part = Partition::make(single, universe - single, {}, universe);
        return {part, value_of(part, 1.0), false};
      }
      Partition part = Partition::make(side, universe - side, {}, universe);
      return {part, value_of(part, static_cast<double>(side.size())), true};
    }
    case EquivClass::EC4:
    case EquivClass::EC5: {
      qsm::MeasureSpec m = measure.value_or(ec == EquivClass::EC4 ? qsm::kl() : qsm::emcb());
      std::vector<HypothesisId> ids(universe.begin(), universe.end());
      std::sort(ids.begin(), ids.end(), [&](HypothesisId a, HypothesisId b) {
        return dist.prob(a) != dist.prob(b) ? dist.prob(a) > dist.prob(b) : a < b;
      });
      // A side of fixed size k is only optimal with extremal mass, so the
      // k most probable hypotheses (in either orientation) cover all
      // candidates.
      std::optional<Partition> best;
      double best_value = 0.0;
      HypothesisSet top;
      for (std::size_t k = 0; k + 1 < ids.size(); ++k) {
        top.insert(ids[k]);
        for (Partition p : {Partition::make(top, universe - top, {}, universe),
                            Partition::make(universe - top, top, {}, universe)}) {
          double v = qsm::evaluate(m, p, dist, eval);
          if (!best || qsm::improves(v, best_value, m.direction())) {
            best = p;
            best_value = v;
          }
        }
      }
      return {*best, best_value, true};
    }
    default:
      throw ValidationError(std::string("class ") + std::string(to_string(ec)) +
                            " is synthesized by search; use synthesize_partition");
  }
}

GapReport verify_against_bruteforce(const SearchConfig& config, HypothesisSet universe,
                                    const Distribution& dist) {
  GapReport report;
  switch (config.ec) {
    case EquivClass::EC1:
    case EquivClass::EC2:
    case EquivClass::EC3: {
      SearchTrace trace = synthesize_partition(config, universe, dist);
      report.goal_found = trace.goal.has_value();
      if (trace.goal) {
        report.achieved_part = *trace.goal;
        report.achieved_value = trace.goal_value;
      } else if (trace.best_found) {
        report.achieved_part = *trace.best_found;
        report.achieved_value = trace.best_value;
      } else {
        throw InfeasibleError("search expanded no discriminating partition");
      }
      break;
    }
    default: {
      DirectOptimum direct = direct_optimum(config.ec, universe, dist, config.measure,
                                            config.eval);
      report.achieved_part = direct.part;
      report.achieved_value = qsm::evaluate(config.measure, direct.part, dist, config.eval);
      report.goal_found = direct.feasible;
      break;
    }
  }
  auto [opt_part, opt_value] = enumerate::brute_force_optimum(
      config.measure, universe, dist, {.strong_only = true}, config.eval);
  report.optimum_part = opt_part;
  report.optimum_value = opt_value;
  report.gap = config.measure.direction() == qsm::Direction::Minimize
                   ? report.achieved_value - opt_value
                   : opt_value - report.achieved_value;
  report.balance_achieved = balance(report.achieved_part, dist);
  report.balance_optimum = balance(opt_part, dist);
  return report;
}

}  // namespace vsq::synthesis
