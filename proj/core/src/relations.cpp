#include "vsq/relations.hpp"

#include <algorithm>
#include <random>

namespace vsq::relations {

namespace {

void check_same_universe(const Partition& q, const Partition& q2) {
  if (q.universe() != q2.universe()) {
    throw ValidationError("partitions range over different universes: " +
                          to_string(q.universe()) + " vs " + to_string(q2.universe()));
  }
}

DpoWitness make_witness(const Partition& q, const Partition& q2, bool swapped) {
  return DpoWitness{q2.zero() - q.zero(), swapped};
}

}  // namespace

DpoVerdict dpo_preferred_direct(const Partition& q, const Partition& q2) {
  check_same_universe(q, q2);
  // Answer a of q eliminates plus (a=No) or minus (a=Yes). The identity
  // mapping compares like sides, the swapped mapping crossed sides; in
  // both cases one inclusion must be strict.
  const bool identity = q2.minus().subset_of(q.minus()) && q2.plus().subset_of(q.plus()) &&
                        (q2.minus() != q.minus() || q2.plus() != q.plus());
  if (identity) return {true, make_witness(q, q2, false)};
  const bool swapped = q2.minus().subset_of(q.plus()) && q2.plus().subset_of(q.minus()) &&
                       (q2.minus() != q.plus() || q2.plus() != q.minus());
  if (swapped) return {true, make_witness(q, q2, true)};
  return {};
}

DpoVerdict dpo_preferred_constructive(const Partition& q, const Partition& q2) {
  check_same_universe(q, q2);
  if (!q.zero().proper_subset_of(q2.zero())) return {};
  HypothesisSet x = q2.zero() - q.zero();  // the only candidate transfer set
  if (q2.plus() == q.plus() - x && q2.minus() == q.minus() - x) {
    return {true, DpoWitness{x, false}};
  }
  if (q2.plus() == q.minus() - x && q2.minus() == q.plus() - x) {
    return {true, DpoWitness{x, true}};
  }
  return {};
}

std::vector<Partition> dpo_dispreferred_all(const Partition& q) {
  if (!is_discriminating(q)) {
    throw ValidationError("dispreferred enumeration needs a discriminating partition, got " +
                          to_string(q));
  }
  const HypothesisSet universe = q.universe();
  const std::uint64_t mask = (q.plus() | q.minus()).bits();
  std::vector<Partition> out;
  // All nonempty transfer sets X, both orientations. At X = plus|minus the
  // two orientations coincide, so that one is emitted once.
  for (std::uint64_t sub = mask; sub != 0; sub = (sub - 1) & mask) {
    HypothesisSet x(sub);
    HypothesisSet new_zero = q.zero() | x;
    out.push_back(Partition::make(q.plus() - x, q.minus() - x, new_zero, universe));
    if (sub != mask) {
      out.push_back(Partition::make(q.minus() - x, q.plus() - x, new_zero, universe));
    }
  }
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> dpo_related_pairs(
    std::span<const Partition> parts) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    for (std::size_t j = 0; j < parts.size(); ++j) {
      if (i == j) continue;
      if (dpo_preferred_constructive(parts[i], parts[j])) pairs.emplace_back(i, j);
    }
  }
  return pairs;
}

std::string_view to_string(ComplianceMode mode) {
  switch (mode) {
    case ComplianceMode::Satisfies: return "satisfies";
    case ComplianceMode::ConsistentOnly: return "consistent-only";
    case ComplianceMode::Inconsistent: return "inconsistent";
  }
  return "?";
}

ComplianceReport check_compliance(const qsm::MeasureSpec& m, std::span<const Partition> parts,
                                  const Distribution& dist, const qsm::EvalOptions& opts) {
  return check_compliance(m, parts, dist, dpo_related_pairs(parts), opts);
}

ComplianceReport check_compliance(const qsm::MeasureSpec& m, std::span<const Partition> parts,
                                  const Distribution& dist,
                                  std::span<const std::pair<std::size_t, std::size_t>> dpo_pairs,
                                  const qsm::EvalOptions& opts) {
  std::vector<double> value(parts.size());
  for (std::size_t i = 0; i < parts.size(); ++i) {
    value[i] = qsm::evaluate(m, parts[i], dist, opts);
  }
  const bool minimize = m.direction() == qsm::Direction::Minimize;
  ComplianceReport report;
  report.pairs_checked = dpo_pairs.size();
  for (auto [i, j] : dpo_pairs) {
    const bool satisfied = minimize ? value[i] < value[j] : value[i] > value[j];
    if (satisfied) continue;
    const bool inverted = minimize ? value[j] < value[i] : value[j] > value[i];
    report.violations.push_back({i, j, value[i], value[j], inverted, 0});
    if (inverted) report.mode = ComplianceMode::Inconsistent;
  }
  if (report.mode != ComplianceMode::Inconsistent && !report.violations.empty()) {
    report.mode = ComplianceMode::ConsistentOnly;
  }
  return report;
}

EquivalenceReport check_equivalence(const qsm::MeasureSpec& m1, const qsm::MeasureSpec& m2,
                                    std::span<const Partition> parts, const Distribution& dist,
                                    const qsm::EvalOptions& opts) {
  std::vector<double> v1(parts.size()), v2(parts.size());
  for (std::size_t i = 0; i < parts.size(); ++i) {
    v1[i] = qsm::evaluate(m1, parts[i], dist, opts);
    v2[i] = qsm::evaluate(m2, parts[i], dist, opts);
  }
  const bool min1 = m1.direction() == qsm::Direction::Minimize;
  const bool min2 = m2.direction() == qsm::Direction::Minimize;
  EquivalenceReport report;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    for (std::size_t j = 0; j < parts.size(); ++j) {
      if (i == j) continue;
      ++report.pairs_checked;
      const bool p1 = min1 ? v1[i] < v1[j] : v1[i] > v1[j];
      const bool p2 = min2 ? v2[i] < v2[j] : v2[i] > v2[j];
      if (p1 != p2) {
        report.equivalent = false;
        report.witness = {i, j};
        return report;
      }
    }
  }
  return report;
}

std::string_view to_string(Superiority s) {
  switch (s) {
    case Superiority::FirstSuperior: return "first-superior";
    case Superiority::SecondSuperior: return "second-superior";
    case Superiority::Neither: return "neither";
  }
  return "?";
}

SuperiorityVerdict check_superiority(const qsm::MeasureSpec& m1, const qsm::MeasureSpec& m2,
                                     std::span<const Partition> parts,
                                     std::span<const Distribution> dists,
                                     const qsm::EvalOptions& opts) {
  const auto pairs = dpo_related_pairs(parts);
  const bool min1 = m1.direction() == qsm::Direction::Minimize;
  const bool min2 = m2.direction() == qsm::Direction::Minimize;
  SuperiorityVerdict verdict;
  verdict.pairs_checked = pairs.size() * dists.size();
  std::vector<double> v1(parts.size()), v2(parts.size());
  for (std::size_t d = 0; d < dists.size(); ++d) {
    for (std::size_t i = 0; i < parts.size(); ++i) {
      v1[i] = qsm::evaluate(m1, parts[i], dists[d], opts);
      v2[i] = qsm::evaluate(m2, parts[i], dists[d], opts);
    }
    for (auto [i, j] : pairs) {
      const bool s1 = min1 ? v1[i] < v1[j] : v1[i] > v1[j];
      const bool s2 = min2 ? v2[i] < v2[j] : v2[i] > v2[j];
      if (s1 && !s2) verdict.first_only.push_back({d, i, j});
      if (s2 && !s1) verdict.second_only.push_back({d, i, j});
    }
  }
  if (!verdict.first_only.empty() && verdict.second_only.empty()) {
    verdict.value = Superiority::FirstSuperior;
  } else if (!verdict.second_only.empty() && verdict.first_only.empty()) {
    verdict.value = Superiority::SecondSuperior;
  }
  return verdict;
}

StrictOrderReport check_dpo_strict_order(std::span<const Partition> parts,
                                         std::uint64_t triple_budget, std::uint64_t seed) {
  StrictOrderReport report;
  const std::size_t n = parts.size();
  std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    if (dpo_preferred_constructive(parts[i], parts[i])) report.irreflexive = false;
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) adj[i][j] = dpo_preferred_constructive(parts[i], parts[j]).preferred;
    }
  }
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (!adj[i][j]) continue;
      edges.emplace_back(i, j);
      if (adj[j][i]) report.asymmetric = false;
    }
  }
  // Composable pairs (i->j, j->k) are the triples transitivity talks about.
  std::vector<std::vector<std::size_t>> succ(n);
  for (auto [i, j] : edges) succ[i].push_back(j);
  std::uint64_t total = 0;
  for (auto [i, j] : edges) total += succ[j].size();
  if (total <= triple_budget) {
    for (auto [i, j] : edges) {
      for (std::size_t k : succ[j]) {
        ++report.triples_checked;
        if (!adj[i][k]) report.transitive = false;
      }
    }
  } else {
    report.sampled = true;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick_edge(0, edges.size() - 1);
    while (report.triples_checked < triple_budget) {
      auto [i, j] = edges[pick_edge(rng)];
      if (succ[j].empty()) continue;
      std::uniform_int_distribution<std::size_t> pick_succ(0, succ[j].size() - 1);
      std::size_t k = succ[j][pick_succ(rng)];
      ++report.triples_checked;
      if (!adj[i][k]) report.transitive = false;
    }
  }
  return report;
}

}  // namespace vsq::relations
