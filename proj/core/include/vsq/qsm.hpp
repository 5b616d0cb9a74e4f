#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "vsq/core.hpp"

namespace vsq::qsm {

/// The query selection measures known to the library. Kinds ending in Z
/// carry a real penalty weight z; RIO kinds carry the worst-case
/// elimination target n. BAL is the probability-balance measure
/// |p(V+) - p(V-)| + p(V0), kept as a first-class kind because several
/// worked examples are expressed in it.
enum class MeasureKind {
  LC,         // least confidence: probability of the most likely answer
  M,          // margin between the two answer probabilities
  H,          // answer entropy
  GI,         // Gini impurity of the answer distribution
  ENT,        // expected posterior entropy proxy: p(V0) + sum_a p(a) log2 p(a)
  ENT_Z,      // ENT with weight z on p(V0)
  SPL,        // split-in-half: ||V+| - |V-|| + |V0|
  SPL_Z,      // SPL with weight z on |V0|
  VE,         // vote entropy of the predicting committee
  KL,         // mean committee divergence from the consensus
  EMCA,       // expected eliminated probability mass (with 1/2 penalty on p(V0))
  EMCA_Z,     // EMCa with weight z on the p(V0)/2 penalty
  EMCB,       // expected number of eliminated hypotheses
  MPS,        // most probable singleton side
  MPS_PRIME,  // MPS with a penalty of -|V0| instead of 0
  BME,        // size of the side with strictly smaller mass (biased elimination)
  RIO,        // ENT/2 + V_{Q,n} where V_{Q,n} rewards min side size n
  RIO_Z,      // RIO with ENT_z in place of ENT
  BAL,        // |p(V+) - p(V-)| + p(V0)
};

enum class Direction { Minimize, Maximize };

/// Fixed optimization direction of each measure kind.
Direction direction(MeasureKind kind);

bool requires_z(MeasureKind kind);
bool requires_n(MeasureKind kind);

/// One concrete measure: a kind plus its parameters. Parameters must be
/// present exactly when the kind demands them (z finite, n >= 1).
struct MeasureSpec {
  MeasureKind kind = MeasureKind::ENT;
  double z = 0.0;
  int n = 0;

  static MeasureSpec make(MeasureKind kind, std::optional<double> z = std::nullopt,
                          std::optional<int> n = std::nullopt);

  /// Parses the CLI grammar: "ENT", "ENT_z=1.5", "SPL_z=1.1", "RIO_n=2",
  /// "RIO_z=1.5_n=2", "MPSp", ... Parse errors name the offending token.
  static MeasureSpec parse(std::string_view text);

  /// Canonical rendering in the same grammar parse() accepts.
  std::string str() const;

  Direction direction() const { return qsm::direction(kind); }

  friend bool operator==(const MeasureSpec&, const MeasureSpec&) = default;
};

// Shorthand factories.
inline MeasureSpec lc() { return MeasureSpec::make(MeasureKind::LC); }
inline MeasureSpec margin() { return MeasureSpec::make(MeasureKind::M); }
inline MeasureSpec entropy() { return MeasureSpec::make(MeasureKind::H); }
inline MeasureSpec gini() { return MeasureSpec::make(MeasureKind::GI); }
inline MeasureSpec ent() { return MeasureSpec::make(MeasureKind::ENT); }
inline MeasureSpec ent_z(double z) { return MeasureSpec::make(MeasureKind::ENT_Z, z); }
inline MeasureSpec spl() { return MeasureSpec::make(MeasureKind::SPL); }
inline MeasureSpec spl_z(double z) { return MeasureSpec::make(MeasureKind::SPL_Z, z); }
inline MeasureSpec ve() { return MeasureSpec::make(MeasureKind::VE); }
inline MeasureSpec kl() { return MeasureSpec::make(MeasureKind::KL); }
inline MeasureSpec emca() { return MeasureSpec::make(MeasureKind::EMCA); }
inline MeasureSpec emca_z(double z) { return MeasureSpec::make(MeasureKind::EMCA_Z, z); }
inline MeasureSpec emcb() { return MeasureSpec::make(MeasureKind::EMCB); }
inline MeasureSpec mps() { return MeasureSpec::make(MeasureKind::MPS); }
inline MeasureSpec mps_prime() { return MeasureSpec::make(MeasureKind::MPS_PRIME); }
inline MeasureSpec bme() { return MeasureSpec::make(MeasureKind::BME); }
inline MeasureSpec rio(int n) { return MeasureSpec::make(MeasureKind::RIO, std::nullopt, n); }
inline MeasureSpec rio_z(double z, int n) { return MeasureSpec::make(MeasureKind::RIO_Z, z, n); }
inline MeasureSpec bal() { return MeasureSpec::make(MeasureKind::BAL); }

struct EvalOptions {
  /// MPS/MPS' condition for the rewarded case. The default requires the
  /// smaller side of a strong DQ to be a singleton; the literal variant
  /// instead tests ||V+| - |V-|| == 2, which coincides with the singleton
  /// reading only for universes of size 4. Reports should label which
  /// variant produced a number.
  bool mps_literal = false;
};

/// Value of the measure on a discriminating partition. Throws for
/// non-discriminating input: measures are defined on the region of
/// uncertainty only. 0*log2(0) is taken as 0 throughout.
double evaluate(const MeasureSpec& m, const Partition& part, const Distribution& dist,
                const EvalOptions& opts = {});

/// Strict preference of q over q2 under m: a strictly better value in m's
/// optimization direction. Equal values are mutually non-preferred.
bool prefers(const MeasureSpec& m, const Partition& q, const Partition& q2,
             const Distribution& dist, const EvalOptions& opts = {});

/// Best pool element under m; ties break toward the lowest index.
/// Values within 1e-12 (relative) of the incumbent optimum count as ties,
/// so mathematically equal scores computed along different floating-point
/// routes still resolve to the earlier element. The pool must be nonempty
/// and all elements discriminating.
std::pair<std::size_t, double> select_best(const MeasureSpec& m,
                                           std::span<const Partition> pool,
                                           const Distribution& dist,
                                           const EvalOptions& opts = {});

/// Strict improvement test with the same 1e-12 tie band select_best uses.
bool improves(double candidate, double incumbent, Direction dir);

/// Minimal z for which the ENT_z penalty is guaranteed order-safe when
/// every answer probability exceeds t: max(-(log2 t - log2(1-t))/2, 1).
/// Requires 0 < t < 0.5.
double ent_z_threshold(double t);

/// Smallest answer probability over all partitions and both answers.
double min_answer_probability(std::span<const Partition> parts, const Distribution& dist);

}  // namespace vsq::qsm
