#include "vsq/enumerate.hpp"

#include <cmath>

namespace vsq::enumerate {

namespace {

std::uint64_t pow_u64(std::uint64_t base, int exp) {
  std::uint64_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

}  // namespace

DpStream::DpStream(HypothesisSet universe, EnumOptions opts)
    : universe_(universe), opts_(opts) {
  int n = universe.size();
  if (n < 1) throw ValidationError("enumeration needs a nonempty universe");
  if (n > opts.cap) {
    throw ValidationError("universe size " + std::to_string(n) +
                          " exceeds the enumeration cap " + std::to_string(opts.cap) +
                          "; exhaustive enumeration is infeasible, fall back to "
                          "sampled spot checks");
  }
  ids_.assign(universe.begin(), universe.end());
  end_ = pow_u64(3, n);
}

std::optional<Partition> DpStream::next() {
  const int n = static_cast<int>(ids_.size());
  while (index_ < end_) {
    std::uint64_t code = index_++;
    HypothesisSet plus, minus, zero;
    std::uint64_t mirror_code = 0;
    // First hypothesis is the most significant ternary digit.
    for (int i = n - 1; i >= 0; --i) {
      int digit = static_cast<int>(code % 3);
      code /= 3;
      switch (digit) {
        case 0: plus.insert(ids_[i]); break;
        case 1: minus.insert(ids_[i]); break;
        default: zero.insert(ids_[i]); break;
      }
      int mirror_digit = digit == 2 ? 2 : 1 - digit;
      mirror_code += static_cast<std::uint64_t>(mirror_digit) * pow_u64(3, n - 1 - i);
    }
    if (plus.empty() || minus.empty()) continue;
    if (opts_.strong_only && !zero.empty()) continue;
    if (opts_.canonical_dedup && mirror_code < index_ - 1) continue;
    return Partition::make(plus, minus, zero, universe_);
  }
  return std::nullopt;
}

std::vector<Partition> all_dps(HypothesisSet universe, EnumOptions opts) {
  std::vector<Partition> out;
  DpStream stream(universe, opts);
  while (auto p = stream.next()) out.push_back(*p);
  return out;
}

std::uint64_t dp_count(int n) { return pow_u64(3, n) - 2 * pow_u64(2, n) + 1; }

std::uint64_t strong_dp_count(int n) { return pow_u64(2, n) - 2; }

std::pair<Partition, double> brute_force_optimum(const qsm::MeasureSpec& m,
                                                 HypothesisSet universe,
                                                 const Distribution& dist,
                                                 EnumOptions opts,
                                                 const qsm::EvalOptions& eval) {
  DpStream stream(universe, opts);
  std::optional<Partition> best;
  double best_value = 0.0;
  while (auto p = stream.next()) {
    double v = qsm::evaluate(m, *p, dist, eval);
    if (!best || qsm::improves(v, best_value, m.direction())) {
      best = *p;
      best_value = v;
    }
  }
  if (!best) throw ValidationError("universe has no discriminating partition");
  return {*best, best_value};
}

}  // namespace vsq::enumerate
