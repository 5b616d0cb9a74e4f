#include "vsq/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace vsq {

namespace {

std::string id_name(HypothesisId h, std::span<const std::string> names) {
  if (h >= 0 && static_cast<std::size_t>(h) < names.size()) return names[h];
  return std::to_string(h);
}

}  // namespace

void HypothesisSet::check_id(HypothesisId h) {
  if (h < 0 || h >= kMaxHypotheses) {
    throw ValidationError("hypothesis id " + std::to_string(h) + " out of range [0, " +
                          std::to_string(kMaxHypotheses) + ")");
  }
}

HypothesisId HypothesisSet::min() const {
  if (empty()) throw ValidationError("min() on empty hypothesis set");
  return std::countr_zero(bits_);
}

Distribution Distribution::over(HypothesisSet support, std::span<const double> weights) {
  if (static_cast<int>(weights.size()) != support.size()) {
    throw ValidationError("distribution has " + std::to_string(weights.size()) +
                          " weights for " + std::to_string(support.size()) + " hypotheses");
  }
  if (support.empty()) throw ValidationError("distribution over empty universe");
  Distribution d;
  d.support_ = support;
  int max_id = 0;
  for (HypothesisId h : support) max_id = h;
  d.weight_.assign(max_id + 1, 0.0);
  double sum = 0.0;
  std::size_t k = 0;
  for (HypothesisId h : support) {
    double w = weights[k++];
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw ValidationError("weight of hypothesis " + std::to_string(h) +
                            " must be strictly positive, got " + std::to_string(w));
    }
    d.weight_[h] = w;
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw ValidationError("distribution weights sum to " + std::to_string(sum) +
                          ", expected 1 within 1e-9");
  }
  return d;
}

Distribution Distribution::uniform(HypothesisSet support) {
  std::vector<double> w(support.size(), 1.0 / support.size());
  return over(support, w);
}

double Distribution::prob(HypothesisId h) const {
  if (!support_.contains(h)) return 0.0;
  return weight_[h];
}

double Distribution::mass(HypothesisSet s) const {
  double sum = 0.0;
  for (HypothesisId h : s & support_) sum += weight_[h];
  return sum;
}

HypothesisId Distribution::argmax() const {
  HypothesisId best = support_.min();
  for (HypothesisId h : support_) {
    if (weight_[h] > weight_[best]) best = h;
  }
  return best;
}

std::vector<std::pair<HypothesisId, double>> Distribution::entries() const {
  std::vector<std::pair<HypothesisId, double>> out;
  out.reserve(support_.size());
  for (HypothesisId h : support_) out.emplace_back(h, weight_[h]);
  return out;
}

Partition Partition::make(HypothesisSet plus, HypothesisSet minus, HypothesisSet zero,
                          HypothesisSet universe) {
  HypothesisSet overlap = (plus & minus) | (plus & zero) | (minus & zero);
  if (!overlap.empty()) {
    throw ValidationError("hypothesis " + std::to_string(overlap.min()) +
                          " appears on more than one side of the partition");
  }
  HypothesisSet all = plus | minus | zero;
  if (all != universe) {
    HypothesisSet missing = universe - all;
    if (!missing.empty()) {
      throw ValidationError("hypothesis " + std::to_string(missing.min()) +
                            " of the universe is missing from the partition");
    }
    throw ValidationError("hypothesis " + std::to_string((all - universe).min()) +
                          " does not belong to the universe");
  }
  Partition p;
  p.plus_ = plus;
  p.minus_ = minus;
  p.zero_ = zero;
  return p;
}

Partition Partition::mirrored() const { return make(minus_, plus_, zero_, universe()); }

Partition Partition::restricted_to(HypothesisSet survivors) const {
  return make(plus_ & survivors, minus_ & survivors, zero_ & survivors,
              universe() & survivors);
}

QueryClass classify(const Partition& part) {
  if (part.plus().empty() || part.minus().empty()) return QueryClass::NonDiscriminating;
  return part.zero().empty() ? QueryClass::StrongDQ : QueryClass::WeakDQ;
}

bool is_discriminating(const Partition& part) {
  return !part.plus().empty() && !part.minus().empty();
}

bool is_strong(const Partition& part) {
  return classify(part) == QueryClass::StrongDQ;
}

double answer_probability(const Partition& part, const Distribution& dist, Answer a) {
  if (part.universe() != dist.support()) {
    throw ValidationError("partition universe does not match the distribution support");
  }
  HypothesisSet side = a == Answer::Yes ? part.plus() : part.minus();
  return dist.mass(side) + 0.5 * dist.mass(part.zero());
}

HypothesisSet eliminated_set(const Partition& part, Answer a) {
  return a == Answer::Yes ? part.minus() : part.plus();
}

Distribution bayes_update(const Distribution& dist, const Partition& part, Answer a) {
  double pa = answer_probability(part, dist, a);
  if (pa <= 0.0) {
    throw ValidationError("cannot condition on an answer of probability 0");
  }
  HypothesisSet predicted = a == Answer::Yes ? part.plus() : part.minus();
  HypothesisSet survivors = predicted | part.zero();
  std::vector<double> w;
  w.reserve(survivors.size());
  for (HypothesisId h : survivors) {
    double likelihood = predicted.contains(h) ? 1.0 : 0.5;
    w.push_back(dist.prob(h) * likelihood / pa);
  }
  return Distribution::over(survivors, w);
}

Distribution random_distribution(HypothesisSet universe, std::mt19937_64& rng, double floor) {
  std::uniform_real_distribution<double> u(floor, 1.0);
  std::vector<double> w(universe.size());
  double sum = 0.0;
  for (double& x : w) {
    x = u(rng);
    sum += x;
  }
  for (double& x : w) x /= sum;
  return Distribution::over(universe, w);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  auto split = [](std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  };
  return split(seed ^ split(a ^ split(b + 0x1234567ULL)));
}

std::string to_string(HypothesisSet s, std::span<const std::string> names) {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (HypothesisId h : s) {
    if (!first) os << ',';
    os << id_name(h, names);
    first = false;
  }
  os << '}';
  return os.str();
}

std::string to_string(const Partition& p, std::span<const std::string> names) {
  return "(" + to_string(p.plus(), names) + " | " + to_string(p.minus(), names) + " | " +
         to_string(p.zero(), names) + ")";
}

std::string to_string(QueryClass c) {
  switch (c) {
    case QueryClass::NonDiscriminating: return "non-discriminating";
    case QueryClass::StrongDQ: return "strong DQ";
    case QueryClass::WeakDQ: return "weak DQ";
  }
  return "?";
}

int Scenario::id_of(std::string_view name) const {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return static_cast<int>(i);
  }
  return -1;
}

int Scenario::partition_index(std::string_view name) const {
  for (std::size_t i = 0; i < partition_names.size(); ++i) {
    if (partition_names[i] == name) return static_cast<int>(i);
  }
  return -1;
}

}  // namespace vsq
