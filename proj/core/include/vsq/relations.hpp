#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "vsq/core.hpp"
#include "vsq/qsm.hpp"

namespace vsq::relations {

/// How a discrimination-preferred partition turns into the dispreferred
/// one: move `transfer` from the predicted sides into the undecided set,
/// optionally swapping the two predicted sides.
struct DpoWitness {
  HypothesisSet transfer;
  bool swapped = false;
};

struct DpoVerdict {
  bool preferred = false;
  std::optional<DpoWitness> witness;

  explicit operator bool() const { return preferred; }
};

/// Discrimination preference by definition: some injective mapping of
/// q2's answers onto q's answers makes every answer of q eliminate at
/// least what the matched answer of q2 eliminates, strictly more for one
/// of them. Queries over different universes cannot be compared.
DpoVerdict dpo_preferred_direct(const Partition& q, const Partition& q2);

/// Constant-time characterization of the same relation: q2 must be
/// reconstructible from q by transferring a nonempty X from the predicted
/// sides into the undecided set (possibly swapping the sides). X is
/// forced to be zero(q2) minus zero(q), so no search is involved.
DpoVerdict dpo_preferred_constructive(const Partition& q, const Partition& q2);

/// Every partition the given discriminating partition is
/// discrimination-preferred to: all transfer sets, both orientations,
/// duplicates removed. Outputs need not be discriminating themselves.
std::vector<Partition> dpo_dispreferred_all(const Partition& q);

/// Ordered index pairs (i, j) with parts[i] discrimination-preferred to
/// parts[j]. The relation does not depend on any distribution, so suites
/// compute it once and reuse it across distributions.
std::vector<std::pair<std::size_t, std::size_t>> dpo_related_pairs(
    std::span<const Partition> parts);

enum class ComplianceMode { Satisfies, ConsistentOnly, Inconsistent };
std::string_view to_string(ComplianceMode mode);

struct ComplianceViolation {
  std::size_t preferred_index = 0;     // q  with q DPO-preferred to q2
  std::size_t dispreferred_index = 0;  // q2
  double preferred_value = 0.0;
  double dispreferred_value = 0.0;
  bool inverted = false;  // measure strictly prefers q2 over q
  std::size_t dist_index = 0;
};

/// Violations are failures of the satisfaction test (the measure does not
/// strictly prefer the DPO-preferred query); inverted ones additionally
/// contradict the order. Satisfies = no violations, Inconsistent = some
/// inverted violation, ConsistentOnly in between.
struct ComplianceReport {
  ComplianceMode mode = ComplianceMode::Satisfies;
  std::vector<ComplianceViolation> violations;
  std::size_t pairs_checked = 0;
};

ComplianceReport check_compliance(const qsm::MeasureSpec& m, std::span<const Partition> parts,
                                  const Distribution& dist, const qsm::EvalOptions& opts = {});

/// Same check over precomputed DPO pairs (for suites that scan many
/// distributions over a fixed partition set).
ComplianceReport check_compliance(const qsm::MeasureSpec& m, std::span<const Partition> parts,
                                  const Distribution& dist,
                                  std::span<const std::pair<std::size_t, std::size_t>> dpo_pairs,
                                  const qsm::EvalOptions& opts = {});

struct EquivalenceReport {
  bool equivalent = true;
  /// First ordered pair the two preference orders disagree on.
  std::optional<std::pair<std::size_t, std::size_t>> witness;
  std::size_t pairs_checked = 0;
};

/// Do the two measures impose the same strict preference order on parts?
EquivalenceReport check_equivalence(const qsm::MeasureSpec& m1, const qsm::MeasureSpec& m2,
                                    std::span<const Partition> parts, const Distribution& dist,
                                    const qsm::EvalOptions& opts = {});

enum class Superiority { FirstSuperior, SecondSuperior, Neither };
std::string_view to_string(Superiority s);

struct SuperiorityEvidence {
  std::size_t dist_index = 0;
  std::size_t preferred_index = 0;
  std::size_t dispreferred_index = 0;
};

/// first_only holds DPO pairs honored by the first measure but not the
/// second; second_only the reverse. FirstSuperior needs first_only
/// nonempty and second_only empty. Verdicts are statements about the
/// checked set only, which is why pairs_checked is always carried along.
struct SuperiorityVerdict {
  Superiority value = Superiority::Neither;
  std::vector<SuperiorityEvidence> first_only;
  std::vector<SuperiorityEvidence> second_only;
  std::size_t pairs_checked = 0;
};

SuperiorityVerdict check_superiority(const qsm::MeasureSpec& m1, const qsm::MeasureSpec& m2,
                                     std::span<const Partition> parts,
                                     std::span<const Distribution> dists,
                                     const qsm::EvalOptions& opts = {});

struct StrictOrderReport {
  bool irreflexive = true;
  bool asymmetric = true;
  bool transitive = true;
  std::uint64_t triples_checked = 0;
  bool sampled = false;  // triple budget exceeded, checked a random sample
};

/// Verifies the strict-order axioms of the discrimination preference
/// order on the given partitions. Transitivity is exhaustive while the
/// number of composable pairs stays within the budget, sampled otherwise.
StrictOrderReport check_dpo_strict_order(std::span<const Partition> parts,
                                         std::uint64_t triple_budget = 1'000'000,
                                         std::uint64_t seed = 0);

}  // namespace vsq::relations
