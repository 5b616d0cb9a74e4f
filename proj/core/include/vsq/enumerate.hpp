#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "vsq/core.hpp"
#include "vsq/qsm.hpp"

namespace vsq::enumerate {

struct EnumOptions {
  bool strong_only = false;
  /// Keep only one of each mirror pair (A|B|Z) / (B|A|Z). Off by default:
  /// the discrimination preference order is not mirror symmetric.
  bool canonical_dedup = false;
  /// Ternary assignments explode as 3^n; refuse universes above this size.
  int cap = 12;
};

/// Streams every discriminating partition of a universe: each way of
/// assigning the hypotheses to plus/minus/zero with both predicted sides
/// nonempty (and an empty zero side under strong_only). Order is the
/// lexicographic order of the ternary assignment vector (first hypothesis
/// most significant, digits plus < minus < zero), so the stream is a pure
/// function of the universe and is restartable from any index.
class DpStream {
 public:
  explicit DpStream(HypothesisSet universe, EnumOptions opts = {});

  std::optional<Partition> next();

  /// Ternary index the stream will inspect next.
  std::uint64_t position() const { return index_; }
  void restart_from(std::uint64_t ternary_index) { index_ = ternary_index; }

 private:
  HypothesisSet universe_;
  std::vector<HypothesisId> ids_;  // ascending
  EnumOptions opts_;
  std::uint64_t index_ = 0;
  std::uint64_t end_ = 0;
};

/// Materialized convenience wrapper around DpStream.
std::vector<Partition> all_dps(HypothesisSet universe, EnumOptions opts = {});

/// 3^n - 2*2^n + 1
std::uint64_t dp_count(int n);
/// 2^n - 2
std::uint64_t strong_dp_count(int n);

/// Exact optimizer of a measure over the enumerated partitions; ties
/// resolve to the first partition in stream order.
std::pair<Partition, double> brute_force_optimum(const qsm::MeasureSpec& m,
                                                 HypothesisSet universe,
                                                 const Distribution& dist,
                                                 EnumOptions opts = {},
                                                 const qsm::EvalOptions& eval = {});

}  // namespace vsq::enumerate
