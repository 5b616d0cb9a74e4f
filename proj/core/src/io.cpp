#include "vsq/io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace vsq::io {

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json(const std::string& text, const std::string& what) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ValidationError(what + ": not valid JSON");
  return j;
}

std::vector<std::string> read_names(const json& j, std::size_t count) {
  std::vector<std::string> names;
  if (j.contains("hypotheses")) {
    for (const auto& n : j.at("hypotheses")) names.push_back(n.get<std::string>());
    if (names.size() != count) {
      throw ValidationError("field 'hypotheses' lists " + std::to_string(names.size()) +
                            " names for " + std::to_string(count) + " entries of 'p'");
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) names.push_back("h" + std::to_string(i + 1));
  }
  return names;
}

Distribution read_distribution(const json& j) {
  if (!j.contains("p")) throw ValidationError("missing field 'p'");
  std::vector<double> weights = j.at("p").get<std::vector<double>>();
  if (weights.empty()) throw ValidationError("field 'p' is empty");
  if (weights.size() > HypothesisSet::kMaxHypotheses) {
    throw ValidationError("field 'p' lists more than 64 hypotheses");
  }
  return Distribution::over(HypothesisSet::first(static_cast<int>(weights.size())), weights);
}

HypothesisSet read_side(const json& j, const char* field,
                        const std::vector<std::string>& names) {
  HypothesisSet s;
  if (!j.contains(field)) return s;
  for (const auto& entry : j.at(field)) {
    std::string name = entry.get<std::string>();
    auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) {
      throw ValidationError("partition field '" + std::string(field) +
                            "' names unknown hypothesis '" + name + "'");
    }
    s.insert(static_cast<HypothesisId>(it - names.begin()));
  }
  return s;
}

}  // namespace

Scenario parse_scenario(const std::string& json_text) {
  json j = parse_json(json_text, "scenario");
  Scenario sc;
  sc.dist = read_distribution(j);
  sc.names = read_names(j, sc.dist.size());
  if (j.contains("partitions")) {
    std::size_t index = 0;
    for (const auto& pj : j.at("partitions")) {
      HypothesisSet plus = read_side(pj, "plus", sc.names);
      HypothesisSet minus = read_side(pj, "minus", sc.names);
      HypothesisSet zero = read_side(pj, "zero", sc.names);
      try {
        sc.partitions.push_back(Partition::make(plus, minus, zero, sc.universe()));
      } catch (const ValidationError& e) {
        throw ValidationError("partition " + std::to_string(index) + ": " + e.what());
      }
      sc.partition_names.push_back(pj.contains("name")
                                       ? pj.at("name").get<std::string>()
                                       : "P" + std::to_string(index + 1));
      ++index;
    }
  }
  return sc;
}

Scenario load_scenario(const std::string& path) {
  try {
    return parse_scenario(read_file(path));
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

boxes::BoxScenario parse_box_scenario(const std::string& json_text) {
  json j = parse_json(json_text, "box scenario");
  boxes::BoxScenario sc;
  sc.dist = read_distribution(j);
  sc.names = read_names(j, sc.dist.size());
  if (!j.contains("boxes")) throw ValidationError("missing field 'boxes'");
  for (const auto& bj : j.at("boxes")) {
    auto q = bj.get<std::vector<double>>();
    if (q.size() != 4) {
      throw ValidationError("each box needs [x_min, x_max, y_min, y_max]");
    }
    sc.boxes.push_back({q[0], q[1], q[2], q[3]});
  }
  if (sc.boxes.size() != static_cast<std::size_t>(sc.dist.size())) {
    throw ValidationError("field 'boxes' lists " + std::to_string(sc.boxes.size()) +
                          " boxes for " + std::to_string(sc.dist.size()) +
                          " entries of 'p'");
  }
  auto read_points = [&](const char* field, std::vector<boxes::Point>& out) {
    if (!j.contains(field)) return;
    for (const auto& pj : j.at(field)) {
      auto xy = pj.get<std::vector<double>>();
      if (xy.size() != 2) throw ValidationError(std::string(field) + ": points are [x, y]");
      out.push_back({xy[0], xy[1]});
    }
  };
  read_points("positives", sc.positives);
  read_points("negatives", sc.negatives);
  sc.validate();
  return sc;
}

boxes::BoxScenario load_box_scenario(const std::string& path) {
  try {
    return parse_box_scenario(read_file(path));
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

std::string file_digest(const std::string& path) {
  std::string data = read_file(path);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace vsq::io
