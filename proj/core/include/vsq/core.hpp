#pragma once

#include <iterator>
#include <bit>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace vsq {

/// Index of a hypothesis within a scenario universe. Hypotheses are opaque:
/// everything the library does depends only on which side of a query
/// partition an id lands on and on its probability mass.
using HypothesisId = int;

/// An input violates a documented precondition (malformed partition,
/// universe mismatch, bad parameter, unparsable file).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The request is well formed but has no solution (e.g. no realizable
/// query exists for any acceptable goal partition).
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A set of hypotheses, stored as a 64-bit mask. Universes are capped at
/// 64 hypotheses, far above the exhaustive-analysis sizes this library
/// targets.
class HypothesisSet {
 public:
  static constexpr int kMaxHypotheses = 64;

  constexpr HypothesisSet() = default;
  constexpr explicit HypothesisSet(std::uint64_t bits) : bits_(bits) {}

  /// {0, 1, ..., n-1}
  static constexpr HypothesisSet first(int n) {
    return HypothesisSet(n >= kMaxHypotheses ? ~0ULL : (1ULL << n) - 1);
  }

  static HypothesisSet of(std::initializer_list<HypothesisId> ids) {
    HypothesisSet s;
    for (HypothesisId h : ids) s.insert(h);
    return s;
  }

  constexpr bool contains(HypothesisId h) const {
    return h >= 0 && h < kMaxHypotheses && (bits_ >> h) & 1ULL;
  }
  HypothesisSet& insert(HypothesisId h) {
    check_id(h);
    bits_ |= 1ULL << h;
    return *this;
  }
  HypothesisSet& remove(HypothesisId h) {
    check_id(h);
    bits_ &= ~(1ULL << h);
    return *this;
  }

  constexpr int size() const { return std::popcount(bits_); }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::uint64_t bits() const { return bits_; }

  constexpr bool subset_of(HypothesisSet o) const { return (bits_ & ~o.bits_) == 0; }
  constexpr bool proper_subset_of(HypothesisSet o) const {
    return subset_of(o) && bits_ != o.bits_;
  }
  constexpr bool intersects(HypothesisSet o) const { return (bits_ & o.bits_) != 0; }

  /// Lowest id in the set; the set must be nonempty.
  HypothesisId min() const;

  friend constexpr HypothesisSet operator|(HypothesisSet a, HypothesisSet b) {
    return HypothesisSet(a.bits_ | b.bits_);
  }
  friend constexpr HypothesisSet operator&(HypothesisSet a, HypothesisSet b) {
    return HypothesisSet(a.bits_ & b.bits_);
  }
  /// Set difference.
  friend constexpr HypothesisSet operator-(HypothesisSet a, HypothesisSet b) {
    return HypothesisSet(a.bits_ & ~b.bits_);
  }
  friend constexpr bool operator==(HypothesisSet a, HypothesisSet b) = default;

  /// Iterates ids in ascending order.
  class iterator {
   public:
    using iterator_category = std::forward_iterator_tag;
    using value_type = HypothesisId;
    using difference_type = std::ptrdiff_t;
    using pointer = const HypothesisId*;
    using reference = HypothesisId;

    explicit constexpr iterator(std::uint64_t rest) : rest_(rest) {}
    constexpr HypothesisId operator*() const { return std::countr_zero(rest_); }
    constexpr iterator& operator++() {
      rest_ &= rest_ - 1;
      return *this;
    }
    constexpr bool operator==(const iterator&) const = default;

   private:
    std::uint64_t rest_;
  };
  constexpr iterator begin() const { return iterator(bits_); }
  constexpr iterator end() const { return iterator(0); }

 private:
  static void check_id(HypothesisId h);
  std::uint64_t bits_ = 0;
};

/// Binary query answer. Yes corresponds to label 1, No to label 0.
enum class Answer : int { No = 0, Yes = 1 };

constexpr Answer opposite(Answer a) { return a == Answer::Yes ? Answer::No : Answer::Yes; }
constexpr int label(Answer a) { return static_cast<int>(a); }

/// Probability measure over the current hypothesis universe. Weights are
/// strictly positive and sum to 1 (checked to 1e-9 on construction).
class Distribution {
 public:
  Distribution() = default;

  /// `weights` are given in ascending id order of `support`.
  static Distribution over(HypothesisSet support, std::span<const double> weights);
  static Distribution uniform(HypothesisSet support);

  HypothesisSet support() const { return support_; }
  int size() const { return support_.size(); }

  double prob(HypothesisId h) const;

  /// Total mass of `s`. Ids outside the support contribute nothing.
  double mass(HypothesisSet s) const;

  /// Hypothesis of maximal probability (lowest id on ties).
  HypothesisId argmax() const;

  /// Ids in ascending order with their weights.
  std::vector<std::pair<HypothesisId, double>> entries() const;

 private:
  HypothesisSet support_;
  std::vector<double> weight_;  // indexed by id, zero outside the support
};

/// The three-way split a query induces on the universe: hypotheses
/// predicting answer Yes (plus), predicting No (minus), and predicting
/// neither (zero). The sets are pairwise disjoint and cover the universe;
/// this is validated eagerly on construction, so downstream code can
/// assume validity.
class Partition {
 public:
  Partition() = default;

  static Partition make(HypothesisSet plus, HypothesisSet minus, HypothesisSet zero,
                        HypothesisSet universe);

  HypothesisSet plus() const { return plus_; }
  HypothesisSet minus() const { return minus_; }
  HypothesisSet zero() const { return zero_; }
  HypothesisSet universe() const { return plus_ | minus_ | zero_; }

  /// The same query read with sides swapped.
  Partition mirrored() const;

  /// Projection onto a surviving subset of the universe.
  Partition restricted_to(HypothesisSet survivors) const;

  friend bool operator==(const Partition&, const Partition&) = default;
  friend auto operator<=>(const Partition& a, const Partition& b) {
    if (auto c = a.plus_.bits() <=> b.plus_.bits(); c != 0) return c;
    if (auto c = a.minus_.bits() <=> b.minus_.bits(); c != 0) return c;
    return a.zero_.bits() <=> b.zero_.bits();
  }

 private:
  HypothesisSet plus_, minus_, zero_;
};

enum class QueryClass { NonDiscriminating, StrongDQ, WeakDQ };

/// A query discriminates iff both predicted sides are nonempty; it is
/// strong when additionally nothing is undecided.
QueryClass classify(const Partition& part);
bool is_discriminating(const Partition& part);
bool is_strong(const Partition& part);

/// P(answer = a) under `dist`: the mass of the predicting side plus half
/// the undecided mass. The probabilities of the two answers sum to 1.
double answer_probability(const Partition& part, const Distribution& dist, Answer a);

/// Hypotheses ruled out when the query is answered by `a`: the side that
/// predicted the opposite answer.
HypothesisSet eliminated_set(const Partition& part, Answer a);

/// Posterior over the surviving hypotheses after observing answer `a`.
/// A surviving hypothesis keeps likelihood 1 if it predicted `a` and 1/2
/// if it predicted nothing. Throws if the answer has probability 0.
Distribution bayes_update(const Distribution& dist, const Partition& part, Answer a);

/// Weights drawn independently from U(floor, 1) and normalized; `floor`
/// keeps every weight strictly positive.
Distribution random_distribution(HypothesisSet universe, std::mt19937_64& rng,
                                 double floor = 0.01);

/// splitmix64-style finalizer used for deriving independent per-cell seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b);

/// "{h1,h2}" when names are provided, "{0,1}" otherwise.
std::string to_string(HypothesisSet s, std::span<const std::string> names = {});
/// "({h1,h2} | {h3} | {})"
std::string to_string(const Partition& p, std::span<const std::string> names = {});
std::string to_string(QueryClass c);

/// A hypothesis universe with its prior and an optional pool of queries
/// represented by their partitions.
struct Scenario {
  std::vector<std::string> names;  // hypothesis names, index = id
  Distribution dist;
  std::vector<Partition> partitions;
  std::vector<std::string> partition_names;

  HypothesisSet universe() const { return dist.support(); }

  /// Index of a named hypothesis, -1 if absent.
  int id_of(std::string_view name) const;
  /// Index of a named partition, -1 if absent.
  int partition_index(std::string_view name) const;
};

}  // namespace vsq
