#include "vsq/qsm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace vsq::qsm {

namespace {

// 0*log2(0) := 0.
double plogp(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

double format_guard(double z) {
  if (!std::isfinite(z)) throw ValidationError("measure parameter z must be finite");
  return z;
}

std::string kind_name(MeasureKind k) {
  switch (k) {
    case MeasureKind::LC: return "LC";
    case MeasureKind::M: return "M";
    case MeasureKind::H: return "H";
    case MeasureKind::GI: return "GI";
    case MeasureKind::ENT:
    case MeasureKind::ENT_Z: return "ENT";
    case MeasureKind::SPL:
    case MeasureKind::SPL_Z: return "SPL";
    case MeasureKind::VE: return "VE";
    case MeasureKind::KL: return "KL";
    case MeasureKind::EMCA:
    case MeasureKind::EMCA_Z: return "EMCa";
    case MeasureKind::EMCB: return "EMCb";
    case MeasureKind::MPS: return "MPS";
    case MeasureKind::MPS_PRIME: return "MPSp";
    case MeasureKind::BME: return "BME";
    case MeasureKind::RIO:
    case MeasureKind::RIO_Z: return "RIO";
    case MeasureKind::BAL: return "BAL";
  }
  return "?";
}

std::optional<MeasureKind> base_kind(std::string_view name) {
  if (name == "LC") return MeasureKind::LC;
  if (name == "M") return MeasureKind::M;
  if (name == "H") return MeasureKind::H;
  if (name == "GI") return MeasureKind::GI;
  if (name == "ENT") return MeasureKind::ENT;
  if (name == "SPL") return MeasureKind::SPL;
  if (name == "VE") return MeasureKind::VE;
  if (name == "KL") return MeasureKind::KL;
  if (name == "EMCa") return MeasureKind::EMCA;
  if (name == "EMCb") return MeasureKind::EMCB;
  if (name == "MPS") return MeasureKind::MPS;
  if (name == "MPSp" || name == "MPS'") return MeasureKind::MPS_PRIME;
  if (name == "BME") return MeasureKind::BME;
  if (name == "RIO") return MeasureKind::RIO;
  if (name == "BAL") return MeasureKind::BAL;
  return std::nullopt;
}

std::string short_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace

Direction direction(MeasureKind kind) {
  switch (kind) {
    case MeasureKind::LC:
    case MeasureKind::M:
    case MeasureKind::ENT:
    case MeasureKind::ENT_Z:
    case MeasureKind::SPL:
    case MeasureKind::SPL_Z:
    case MeasureKind::RIO:
    case MeasureKind::RIO_Z:
    case MeasureKind::BAL:
      return Direction::Minimize;
    default:
      return Direction::Maximize;
  }
}

bool requires_z(MeasureKind kind) {
  switch (kind) {
    case MeasureKind::ENT_Z:
    case MeasureKind::SPL_Z:
    case MeasureKind::EMCA_Z:
    case MeasureKind::RIO_Z:
      return true;
    default:
      return false;
  }
}

bool requires_n(MeasureKind kind) {
  return kind == MeasureKind::RIO || kind == MeasureKind::RIO_Z;
}

MeasureSpec MeasureSpec::make(MeasureKind kind, std::optional<double> z, std::optional<int> n) {
  MeasureSpec m;
  m.kind = kind;
  if (requires_z(kind) != z.has_value()) {
    throw ValidationError(requires_z(kind)
                              ? "measure " + kind_name(kind) + "_z needs a z parameter"
                              : "measure " + kind_name(kind) + " takes no z parameter");
  }
  if (requires_n(kind) != n.has_value()) {
    throw ValidationError(requires_n(kind)
                              ? "measure " + kind_name(kind) + " needs an n parameter"
                              : "measure " + kind_name(kind) + " takes no n parameter");
  }
  if (z) m.z = format_guard(*z);
  if (n) {
    if (*n < 1) throw ValidationError("measure parameter n must be >= 1");
    m.n = *n;
  }
  return m;
}

MeasureSpec MeasureSpec::parse(std::string_view text) {
  if (text.empty()) throw ValidationError("empty measure specification");
  std::vector<std::string_view> tokens;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t sep = text.find('_', start);
    if (sep == std::string_view::npos) sep = text.size();
    tokens.push_back(text.substr(start, sep - start));
    start = sep + 1;
  }
  auto kind = base_kind(tokens[0]);
  if (!kind) {
    throw ValidationError("unknown measure '" + std::string(tokens[0]) + "' in '" +
                          std::string(text) + "'");
  }
  std::optional<double> z;
  std::optional<int> n;
  for (std::size_t i = 1; i < tokens.size(); ++i) {
    std::string_view tok = tokens[i];
    auto bad = [&] {
      return ValidationError("bad measure parameter '" + std::string(tok) + "' in '" +
                             std::string(text) + "'");
    };
    if (tok.starts_with("z=")) {
      if (z) throw bad();
      std::size_t used = 0;
      std::string value(tok.substr(2));
      try {
        z = std::stod(value, &used);
      } catch (const std::exception&) {
        throw bad();
      }
      if (used != value.size()) throw bad();
    } else if (tok.starts_with("n=")) {
      if (n) throw bad();
      std::size_t used = 0;
      std::string value(tok.substr(2));
      try {
        n = std::stoi(value, &used);
      } catch (const std::exception&) {
        throw bad();
      }
      if (used != value.size()) throw bad();
    } else {
      throw bad();
    }
  }
  MeasureKind k = *kind;
  if (z) {
    switch (k) {
      case MeasureKind::ENT: k = MeasureKind::ENT_Z; break;
      case MeasureKind::SPL: k = MeasureKind::SPL_Z; break;
      case MeasureKind::EMCA: k = MeasureKind::EMCA_Z; break;
      case MeasureKind::RIO: k = MeasureKind::RIO_Z; break;
      default:
        throw ValidationError("measure " + std::string(tokens[0]) + " takes no z parameter");
    }
  }
  return make(k, z, n);
}

std::string MeasureSpec::str() const {
  std::string s = kind_name(kind);
  if (requires_z(kind)) s += "_z=" + short_real(z);
  if (requires_n(kind)) s += "_n=" + std::to_string(n);
  return s;
}

namespace {

// Measures with a mathematical side symmetry are computed from
// expressions that are also symmetric at the floating point level
// (commutative sums/products of the two answer probabilities), so a
// partition and its mirror always get bit-identical values. EMCa is
// therefore computed as 2*p1*p0 rather than 2*(p1 - p1^2); the two agree
// up to the ~1e-16 closure error of p1 + p0 = 1.
double evaluate_impl(const MeasureSpec& m, const Partition& part, const Distribution& dist,
                     const EvalOptions& opts) {
  const double p1 = answer_probability(part, dist, Answer::Yes);
  const double p0 = answer_probability(part, dist, Answer::No);
  const double pz = dist.mass(part.zero());
  const int n_plus = part.plus().size();
  const int n_minus = part.minus().size();
  const int n_zero = part.zero().size();

  switch (m.kind) {
    case MeasureKind::LC:
      return std::max(p1, p0);
    case MeasureKind::M:
      return std::abs(p1 - p0);
    case MeasureKind::H:
      return -(plogp(p1) + plogp(p0));
    case MeasureKind::GI:
      return 1.0 - (p1 * p1 + p0 * p0);
    case MeasureKind::ENT:
      return pz + (plogp(p1) + plogp(p0));
    case MeasureKind::ENT_Z:
      return m.z * pz + (plogp(p1) + plogp(p0));
    case MeasureKind::SPL:
      return std::abs(n_plus - n_minus) + n_zero;
    case MeasureKind::SPL_Z:
      return std::abs(n_plus - n_minus) + m.z * n_zero;
    case MeasureKind::VE: {
      const double c = n_plus + n_minus;
      return -(plogp(n_plus / c) + plogp(n_minus / c));
    }
    case MeasureKind::KL: {
      const double c = n_plus + n_minus;
      const double pc = dist.mass(part.plus() | part.minus());
      return -((n_plus / c) * std::log2(dist.mass(part.plus()) / pc) +
               (n_minus / c) * std::log2(dist.mass(part.minus()) / pc));
    }
    case MeasureKind::EMCA:
      return 2.0 * p1 * p0 - 0.5 * pz;
    case MeasureKind::EMCA_Z:
      return 2.0 * p1 * p0 - m.z * 0.5 * pz;
    case MeasureKind::EMCB:
      return p1 * n_minus + p0 * n_plus;
    case MeasureKind::MPS:
    case MeasureKind::MPS_PRIME: {
      const bool rewarded = is_strong(part) &&
                            (opts.mps_literal ? std::abs(n_plus - n_minus) == 2
                                              : std::min(n_plus, n_minus) == 1);
      if (rewarded) {
        HypothesisSet small = n_plus <= n_minus ? part.plus() : part.minus();
        return dist.mass(small);
      }
      return m.kind == MeasureKind::MPS ? 0.0 : -static_cast<double>(n_zero);
    }
    case MeasureKind::BME: {
      const double mp = dist.mass(part.plus());
      const double mm = dist.mass(part.minus());
      if (mp < mm) return n_plus;
      if (mm < mp) return n_minus;
      return 0.0;
    }
    case MeasureKind::RIO:
    case MeasureKind::RIO_Z: {
      const int small = std::min(n_plus, n_minus);
      const double v_qn = small >= m.n ? small - m.n
                                       : static_cast<double>(part.universe().size());
      const double zz = m.kind == MeasureKind::RIO ? 1.0 : m.z;
      const double ent = zz * pz + (plogp(p1) + plogp(p0));
      return 0.5 * ent + v_qn;
    }
    case MeasureKind::BAL:
      return std::abs(p1 - p0) + pz;
  }
  throw ValidationError("unhandled measure kind");
}

}  // namespace

double evaluate(const MeasureSpec& m, const Partition& part, const Distribution& dist,
                const EvalOptions& opts) {
  if (!is_discriminating(part)) {
    throw ValidationError("measure " + m.str() +
                          " is undefined on a non-discriminating partition " +
                          to_string(part));
  }
  return evaluate_impl(m, part, dist, opts);
}

bool prefers(const MeasureSpec& m, const Partition& q, const Partition& q2,
             const Distribution& dist, const EvalOptions& opts) {
  const double a = evaluate(m, q, dist, opts);
  const double b = evaluate(m, q2, dist, opts);
  return m.direction() == Direction::Minimize ? a < b : a > b;
}

bool improves(double candidate, double incumbent, Direction dir) {
  double tol = 1e-12 * std::max(1.0, std::abs(incumbent));
  return dir == Direction::Minimize ? candidate < incumbent - tol
                                    : candidate > incumbent + tol;
}

std::pair<std::size_t, double> select_best(const MeasureSpec& m,
                                           std::span<const Partition> pool,
                                           const Distribution& dist,
                                           const EvalOptions& opts) {
  if (pool.empty()) throw ValidationError("select_best on an empty pool");
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (!is_discriminating(pool[i])) {
      throw ValidationError("pool element " + std::to_string(i) + " " +
                            to_string(pool[i]) + " is not discriminating");
    }
  }
  std::size_t best = 0;
  double best_value = evaluate(m, pool[0], dist, opts);
  for (std::size_t i = 1; i < pool.size(); ++i) {
    double v = evaluate(m, pool[i], dist, opts);
    if (improves(v, best_value, m.direction())) {
      best = i;
      best_value = v;
    }
  }
  return {best, best_value};
}

double ent_z_threshold(double t) {
  if (!(t > 0.0) || !(t < 0.5)) {
    throw ValidationError("ent_z_threshold requires 0 < t < 0.5, got " + std::to_string(t));
  }
  return std::max(-0.5 * (std::log2(t) - std::log2(1.0 - t)), 1.0);
}

double min_answer_probability(std::span<const Partition> parts, const Distribution& dist) {
  double best = 1.0;
  for (const Partition& p : parts) {
    best = std::min({best, answer_probability(p, dist, Answer::Yes),
                     answer_probability(p, dist, Answer::No)});
  }
  return best;
}

}  // namespace vsq::qsm
