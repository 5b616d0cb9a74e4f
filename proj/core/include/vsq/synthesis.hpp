#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "vsq/core.hpp"
#include "vsq/qsm.hpp"

namespace vsq::synthesis {

/// Equivalence classes of measures over strong discriminating queries.
/// Measures in one class rank strong DQs identically, so one search or
/// construction per class covers them all.
enum class EquivClass { EC1, EC2, EC3, EC4, EC5, EC6, EC7 };

/// EC1 probability balance (LC, M, H, GI, ENT*, EMCa*, BAL), EC2 cardinality
/// balance (SPL*, VE), EC3 elimination-target measures (RIO*), EC4 KL,
/// EC5 EMCb, EC6 singleton measures (MPS, MPS'), EC7 BME.
EquivClass equiv_class_of(qsm::MeasureKind kind);
std::string_view to_string(EquivClass ec);

struct SearchConfig {
  qsm::MeasureSpec measure;
  EquivClass ec = EquivClass::EC1;
  double epsilon = 0.05;
  /// 0 means the default budget of 10*|V|^2 expanded nodes.
  int max_expansions = 0;
  /// Goal partitions to skip (already known to be unrealizable); the
  /// search keeps going past them.
  std::vector<Partition> excluded_goals;
  /// Stop at the first goal (default, mirrors the sketched procedure) or
  /// keep exploring for the goal with the best secondary criterion.
  bool optimize_balance = false;
  qsm::EvalOptions eval;

  static SearchConfig for_measure(const qsm::MeasureSpec& m);
};

struct SearchNode {
  Partition part;
  double g = 0.0;  // heuristic value, lower is better
  std::optional<HypothesisId> moved;
  int parent = -1;  // index into SearchTrace::expanded
  bool is_goal = false;
  int pruned_children = 0;  // successors cut by the class prune rule
  bool backtracked = false;  // search retreated from this node
};

struct SearchTrace {
  std::vector<SearchNode> expanded;  // in visit order; [0] is the start node
  int backtracks = 0;
  int generated = 0;
  int pruned = 0;
  std::optional<Partition> goal;
  double goal_value = 0.0;  // measure value of the goal
  /// Best discriminating node seen (by measure value, excluded goals
  /// skipped); the fallback answer when the goal test is unsatisfiable or
  /// the budget runs out.
  std::optional<Partition> best_found;
  double best_value = 0.0;
};

/// Heuristic cost of a node for the searchable classes EC1-EC3 (lower is
/// better): EC1 distance of p(V+) from 1/2, EC2 distance of |V+| from
/// floor(|V|/2), EC3 projected balance assuming the plus side is filled
/// up to n hypotheses of average minus-side mass.
double heuristic(EquivClass ec, const Partition& part, const Distribution& dist,
                 const SearchConfig& config);

/// Resumable depth-first backtracking search over strong partitions.
/// Starts from (empty | V | empty); successors transfer one hypothesis
/// from the minus to the plus side; children are visited
/// best-heuristic-first with index tie-breaking. Goal tests and pruning
/// rules are per equivalence class; pruned subtrees cannot contain goals
/// (up to mirror symmetry, which the measures in each class cannot
/// distinguish). next_goal() suspends at each acceptable goal so callers
/// that reject one (an unrealizable partition, say) can continue the same
/// search in place.
class PartitionSearch {
 public:
  PartitionSearch(SearchConfig config, HypothesisSet universe, Distribution dist);

  /// Runs to the next goal; nullopt once the reachable space or the
  /// expansion budget is exhausted.
  std::optional<Partition> next_goal();

  bool exhausted() const { return exhausted_; }
  const SearchTrace& trace() const { return trace_; }
  SearchTrace take_trace() { return std::move(trace_); }
  const SearchConfig& config() const { return config_; }

 private:
  struct Frame {
    int node_index;
    std::vector<std::pair<HypothesisId, double>> children;  // (moved, g), best first
    std::size_t next = 0;
  };

  bool is_goal(const Partition& part) const;
  bool prune_below(const Partition& part) const;
  bool excluded(const Partition& part) const;
  int expand(const Partition& part, double g, std::optional<HypothesisId> moved, int parent);

  SearchConfig config_;
  HypothesisSet universe_;
  Distribution dist_;
  int budget_ = 0;
  SearchTrace trace_;
  std::vector<Frame> stack_;
  bool exhausted_ = false;
};

/// One-shot wrapper around PartitionSearch: the first goal found, or with
/// optimize_balance the best-scored goal after full exploration.
SearchTrace synthesize_partition(const SearchConfig& config, HypothesisSet universe,
                                 const Distribution& dist);

struct DirectOptimum {
  Partition part;
  double value = 0.0;
  /// EC7 has no feasible side when every single hypothesis carries mass
  /// >= 1/2; the minimum-mass singleton is returned flagged instead.
  bool feasible = true;
};

/// Closed-form optimal strong partitions for the non-searchable classes:
/// EC6 puts the most probable hypothesis alone, EC7 the largest set of
/// mass < 1/2, EC4/EC5 scan the 2(|V|-1) candidates that put the k most
/// probable hypotheses on one side (only such sides can be optimal).
DirectOptimum direct_optimum(EquivClass ec, HypothesisSet universe, const Distribution& dist,
                             const std::optional<qsm::MeasureSpec>& measure = std::nullopt,
                             const qsm::EvalOptions& eval = {});

struct GapReport {
  Partition achieved_part;
  double achieved_value = 0.0;
  Partition optimum_part;
  double optimum_value = 0.0;
  /// Direction-signed measure gap; >= 0, with 0 meaning the synthesized
  /// partition is exactly optimal.
  double gap = 0.0;
  double balance_achieved = 0.0;  // |p(V+) - p(V-)| of the synthesized partition
  double balance_optimum = 0.0;
  bool goal_found = false;
};

/// Runs the class-appropriate synthesis and compares its result against
/// the exhaustive optimum over all strong discriminating partitions.
GapReport verify_against_bruteforce(const SearchConfig& config, HypothesisSet universe,
                                    const Distribution& dist);

}  // namespace vsq::synthesis
