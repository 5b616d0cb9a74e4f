// vsq: query selection measures over version-space partitions.
//
// Subcommands evaluate measures, rank query pools, check discrimination
// preference and measure compliance/equivalence/superiority, enumerate
// partitions, synthesize (nearly) optimal queries, and run active-learning
// session benchmarks. Reports are machine-first (csv/json) with a text
// renderer; identical command + seed gives byte-identical output.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include <vsq/enumerate.hpp>
#include <vsq/io.hpp>
#include <vsq/qsm.hpp>
#include <vsq/relations.hpp>
#include <vsq/sim.hpp>
#include <vsq/synthesis.hpp>

namespace {

using nlohmann::json;
using namespace vsq;

constexpr int kExitUsage = 2;
constexpr int kExitValidation = 3;
constexpr int kExitInfeasible = 4;

std::string fmt6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

struct CommonOpts {
  std::string scenario_path;
  std::string boxes_path;
  std::vector<std::string> measure_specs;
  std::string format = "text";
  std::string output;
  std::uint64_t seed = 0;
  double epsilon = 0.05;
  int jobs = 1;
  bool mps_literal = false;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_seed = true) {
  cmd->add_option("--format", o.format, "Report format")
      ->check(CLI::IsMember({"text", "json", "csv"}))
      ->capture_default_str();
  cmd->add_option("-o,--output", o.output, "Write the report to a file instead of stdout");
  if (with_seed) {
    cmd->add_option("--seed", o.seed, "Random seed (always logged in the report)")
        ->capture_default_str();
  }
  cmd->add_flag("--mps-literal", o.mps_literal,
                "Use the size-difference gate for MPS/MPSp instead of the singleton test");
}

qsm::EvalOptions eval_opts(const CommonOpts& o) { return {o.mps_literal}; }

std::string measure_label(const qsm::MeasureSpec& m, const CommonOpts& o) {
  std::string s = m.str();
  if (o.mps_literal &&
      (m.kind == qsm::MeasureKind::MPS || m.kind == qsm::MeasureKind::MPS_PRIME)) {
    s += "[literal]";
  }
  return s;
}

std::vector<qsm::MeasureSpec> parse_measures(const CommonOpts& o, std::size_t min_count = 1) {
  std::vector<qsm::MeasureSpec> out;
  for (const std::string& text : o.measure_specs) out.push_back(qsm::MeasureSpec::parse(text));
  if (out.size() < min_count) {
    throw ValidationError("need at least " + std::to_string(min_count) +
                          " --measure argument(s)");
  }
  return out;
}

// Accumulates provenance key/value pairs plus result rows and renders them
// in the requested format.
struct Report {
  std::string command;
  std::vector<std::pair<std::string, std::string>> params;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  json extra;  // json-only payload (witnesses, traces)

  void param(const std::string& k, const std::string& v) { params.emplace_back(k, v); }

  void render(std::ostream& os, const std::string& format) const {
    if (format == "json") {
      json doc;
      doc["command"] = command;
      json p = json::object();
      for (const auto& [k, v] : params) p[k] = v;
      doc["params"] = p;
      json rws = json::array();
      for (const auto& row : rows) {
        json r = json::object();
        for (std::size_t i = 0; i < columns.size(); ++i) r[columns[i]] = row[i];
        rws.push_back(r);
      }
      doc["results"] = rws;
      if (!extra.is_null()) doc["detail"] = extra;
      os << doc.dump(2) << "\n";
    } else if (format == "csv") {
      for (const auto& [k, v] : params) os << "# " << k << "=" << v << "\n";
      for (std::size_t i = 0; i < columns.size(); ++i) {
        os << columns[i] << (i + 1 < columns.size() ? "," : "\n");
      }
      for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
          os << row[i] << (i + 1 < row.size() ? "," : "\n");
        }
      }
    } else {
      os << "vsq " << command << "\n";
      for (const auto& [k, v] : params) os << "  " << k << " = " << v << "\n";
      os << "\n";
      for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
          os << row[i] << (i + 1 < row.size() ? " " : "\n");
        }
      }
    }
  }

  int emit(const CommonOpts& o) const {
    if (o.output.empty()) {
      render(std::cout, o.format);
    } else {
      std::ofstream out(o.output, std::ios::binary);
      if (!out) throw ValidationError("cannot write to " + o.output);
      render(out, o.format);
    }
    return 0;
  }
};

Scenario require_scenario(const CommonOpts& o, Report& report) {
  if (o.scenario_path.empty()) throw ValidationError("--scenario is required");
  Scenario sc = io::load_scenario(o.scenario_path);
  report.param("scenario", o.scenario_path);
  report.param("scenario_digest", io::file_digest(o.scenario_path));
  return sc;
}

boxes::BoxScenario require_boxes(const CommonOpts& o, Report& report) {
  if (o.boxes_path.empty()) throw ValidationError("--boxes is required");
  boxes::BoxScenario sc = io::load_box_scenario(o.boxes_path);
  report.param("boxes", o.boxes_path);
  report.param("boxes_digest", io::file_digest(o.boxes_path));
  return sc;
}

json json_partition(const Partition& p, std::span<const std::string> names) {
  auto side = [&](HypothesisSet s) {
    json a = json::array();
    for (HypothesisId h : s) {
      a.push_back(h < static_cast<int>(names.size()) ? names[h] : std::to_string(h));
    }
    return a;
  };
  return {{"plus", side(p.plus())}, {"minus", side(p.minus())}, {"zero", side(p.zero())}};
}

// Partition set + distributions for the relation-checking verbs: either a
// scenario file (its pool and distribution) or an enumerated universe of
// --n hypotheses; --dists adds seeded random distributions.
struct RelationInputs {
  std::vector<std::string> names;
  std::vector<Partition> parts;
  std::vector<std::string> part_names;
  std::vector<Distribution> dists;
};

RelationInputs relation_inputs(const CommonOpts& o, int n, int extra_dists, bool strong_only,
                               Report& report) {
  RelationInputs in;
  if (!o.scenario_path.empty()) {
    Scenario sc = require_scenario(o, report);
    in.names = sc.names;
    if (!sc.partitions.empty()) {
      in.parts = sc.partitions;
      in.part_names = sc.partition_names;
    } else {
      in.parts = enumerate::all_dps(sc.universe(), {.strong_only = strong_only});
    }
    in.dists.push_back(sc.dist);
  } else if (n > 0) {
    HypothesisSet u = HypothesisSet::first(n);
    for (int i = 0; i < n; ++i) in.names.push_back("h" + std::to_string(i + 1));
    in.parts = enumerate::all_dps(u, {.strong_only = strong_only});
    report.param("universe_size", std::to_string(n));
  } else {
    throw ValidationError("provide --scenario or --n");
  }
  if (in.part_names.empty()) {
    for (std::size_t i = 0; i < in.parts.size(); ++i) {
      in.part_names.push_back("P" + std::to_string(i + 1));
    }
  }
  if (extra_dists > 0) {
    HypothesisSet u = in.parts.front().universe();
    for (int i = 0; i < extra_dists; ++i) {
      std::mt19937_64 rng(mix_seed(o.seed, 0x6469737473ULL, i));
      in.dists.push_back(random_distribution(u, rng));
    }
  }
  if (in.dists.empty()) throw ValidationError("no distribution: give --scenario or --dists");
  report.param("partitions", std::to_string(in.parts.size()));
  report.param("distributions", std::to_string(in.dists.size()));
  report.param("strong_only", strong_only ? "true" : "false");
  return in;
}

void run_parallel(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn) {
  if (jobs <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> workers;
  std::size_t chunk = (count + jobs - 1) / jobs;
  for (int w = 0; w < jobs; ++w) {
    std::size_t begin = w * chunk;
    std::size_t end = std::min(count, begin + chunk);
    if (begin >= end) break;
    workers.emplace_back([&fn, begin, end] {
      for (std::size_t i = begin; i < end; ++i) fn(i);
    });
  }
  for (auto& t : workers) t.join();
}

// ---------------------------------------------------------------------------

int cmd_eval(const CommonOpts& o) {
  Report report;
  report.command = "eval";
  Scenario sc = require_scenario(o, report);
  if (sc.partitions.empty()) throw ValidationError("scenario has no partitions to evaluate");
  auto measures = parse_measures(o);
  report.param("mps_literal", o.mps_literal ? "true" : "false");
  report.columns = {"measure", "partition", "value"};
  for (const auto& m : measures) {
    for (std::size_t i = 0; i < sc.partitions.size(); ++i) {
      double v = qsm::evaluate(m, sc.partitions[i], sc.dist, eval_opts(o));
      report.rows.push_back({measure_label(m, o), sc.partition_names[i], fmt6(v)});
    }
  }
  return report.emit(o);
}

int cmd_rank(const CommonOpts& o) {
  Report report;
  report.command = "rank";
  Scenario sc = require_scenario(o, report);
  if (sc.partitions.empty()) throw ValidationError("scenario has no partitions to rank");
  auto measures = parse_measures(o);
  report.param("mps_literal", o.mps_literal ? "true" : "false");
  report.columns = {"measure", "rank", "partition", "value", "selected"};
  for (const auto& m : measures) {
    auto [best, best_value] = qsm::select_best(m, sc.partitions, sc.dist, eval_opts(o));
    (void)best_value;
    std::vector<std::size_t> order(sc.partitions.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::vector<double> value(sc.partitions.size());
    for (std::size_t i = 0; i < value.size(); ++i) {
      value[i] = qsm::evaluate(m, sc.partitions[i], sc.dist, eval_opts(o));
    }
    const bool minimize = m.direction() == qsm::Direction::Minimize;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return minimize ? value[a] < value[b] : value[a] > value[b];
    });
    for (std::size_t r = 0; r < order.size(); ++r) {
      report.rows.push_back({measure_label(m, o), std::to_string(r + 1),
                             sc.partition_names[order[r]], fmt6(value[order[r]]),
                             order[r] == best ? "*" : "-"});
    }
  }
  return report.emit(o);
}

int cmd_dpo(const CommonOpts& o, const std::vector<std::string>& names, bool all_pairs) {
  Report report;
  report.command = "dpo";
  Scenario sc = require_scenario(o, report);
  report.columns = {"preferred_query", "dispreferred_query", "verdict", "witness"};
  auto describe = [&](std::size_t i, std::size_t j) {
    auto direct = relations::dpo_preferred_direct(sc.partitions[i], sc.partitions[j]);
    auto constructive =
        relations::dpo_preferred_constructive(sc.partitions[i], sc.partitions[j]);
    if (direct.preferred != constructive.preferred) {
      throw std::logic_error("definition and constructive checks disagree");
    }
    std::string witness = "-";
    if (direct.preferred) {
      witness = "transfer X = " + to_string(direct.witness->transfer, sc.names) +
                ", orientation " + (direct.witness->swapped ? "swapped" : "kept");
    }
    report.rows.push_back({sc.partition_names[i], sc.partition_names[j],
                           direct.preferred ? "preferred" : "unrelated", witness});
  };
  if (all_pairs) {
    for (std::size_t i = 0; i < sc.partitions.size(); ++i) {
      for (std::size_t j = 0; j < sc.partitions.size(); ++j) {
        if (i != j) describe(i, j);
      }
    }
  } else {
    if (names.size() != 2) throw ValidationError("dpo needs two partition names or --all");
    std::vector<std::size_t> idx;
    for (const std::string& name : names) {
      int k = sc.partition_index(name);
      if (k < 0) throw ValidationError("scenario has no partition named '" + name + "'");
      idx.push_back(static_cast<std::size_t>(k));
    }
    describe(idx[0], idx[1]);
  }
  return report.emit(o);
}

int cmd_compliance(const CommonOpts& o, int n, int dists, bool strong_only) {
  Report report;
  report.command = "compliance";
  report.param("seed", std::to_string(o.seed));
  RelationInputs in = relation_inputs(o, n, dists, strong_only, report);
  auto measures = parse_measures(o);
  report.param("mps_literal", o.mps_literal ? "true" : "false");
  auto pairs = relations::dpo_related_pairs(in.parts);
  report.param("dpo_pairs_per_distribution", std::to_string(pairs.size()));
  report.columns = {"measure", "mode", "pairs_checked", "violations", "inversions"};
  json witnesses = json::array();
  for (const auto& m : measures) {
    std::vector<relations::ComplianceReport> per_dist(in.dists.size());
    run_parallel(in.dists.size(), o.jobs, [&](std::size_t d) {
      per_dist[d] = relations::check_compliance(m, in.parts, in.dists[d], pairs, eval_opts(o));
    });
    relations::ComplianceMode mode = relations::ComplianceMode::Satisfies;
    std::size_t checked = 0, violations = 0, inversions = 0;
    for (std::size_t d = 0; d < per_dist.size(); ++d) {
      checked += per_dist[d].pairs_checked;
      for (const auto& v : per_dist[d].violations) {
        ++violations;
        if (v.inverted) ++inversions;
        if (witnesses.size() < 50) {
          witnesses.push_back(
              {{"measure", measure_label(m, o)},
               {"distribution", d},
               {"preferred", json_partition(in.parts[v.preferred_index], in.names)},
               {"dispreferred", json_partition(in.parts[v.dispreferred_index], in.names)},
               {"preferred_value", v.preferred_value},
               {"dispreferred_value", v.dispreferred_value},
               {"inverted", v.inverted}});
        }
      }
      if (per_dist[d].mode == relations::ComplianceMode::Inconsistent) {
        mode = relations::ComplianceMode::Inconsistent;
      } else if (per_dist[d].mode == relations::ComplianceMode::ConsistentOnly &&
                 mode == relations::ComplianceMode::Satisfies) {
        mode = relations::ComplianceMode::ConsistentOnly;
      }
    }
    report.rows.push_back({measure_label(m, o), std::string(relations::to_string(mode)),
                           std::to_string(checked), std::to_string(violations),
                           std::to_string(inversions)});
  }
  report.extra = witnesses;
  return report.emit(o);
}

int cmd_equiv(const CommonOpts& o, int n, int dists, bool strong_only) {
  Report report;
  report.command = "equiv";
  report.param("seed", std::to_string(o.seed));
  RelationInputs in = relation_inputs(o, n, dists, strong_only, report);
  auto measures = parse_measures(o, 2);
  if (measures.size() != 2) throw ValidationError("equiv compares exactly two measures");
  report.param("mps_literal", o.mps_literal ? "true" : "false");
  report.columns = {"measure_1", "measure_2", "equivalent", "pairs_checked", "witness"};
  bool equivalent = true;
  std::size_t checked = 0;
  std::string witness = "-";
  for (std::size_t d = 0; d < in.dists.size() && equivalent; ++d) {
    auto r = relations::check_equivalence(measures[0], measures[1], in.parts, in.dists[d],
                                          eval_opts(o));
    checked += r.pairs_checked;
    if (!r.equivalent) {
      equivalent = false;
      witness = in.part_names[r.witness->first] + " vs " + in.part_names[r.witness->second] +
                " (distribution " + std::to_string(d) + ")";
    }
  }
  report.rows.push_back({measure_label(measures[0], o), measure_label(measures[1], o),
                         equivalent ? "true" : "false", std::to_string(checked), witness});
  return report.emit(o);
}

int cmd_superior(const CommonOpts& o, int n, int dists, bool strong_only) {
  Report report;
  report.command = "superior";
  report.param("seed", std::to_string(o.seed));
  RelationInputs in = relation_inputs(o, n, dists, strong_only, report);
  auto measures = parse_measures(o, 2);
  if (measures.size() != 2) throw ValidationError("superior compares exactly two measures");
  report.param("mps_literal", o.mps_literal ? "true" : "false");
  auto verdict = relations::check_superiority(measures[0], measures[1], in.parts, in.dists,
                                              eval_opts(o));
  report.columns = {"measure_1", "measure_2", "verdict", "first_only_pairs",
                    "second_only_pairs", "pairs_checked"};
  report.rows.push_back({measure_label(measures[0], o), measure_label(measures[1], o),
                         std::string(relations::to_string(verdict.value)),
                         std::to_string(verdict.first_only.size()),
                         std::to_string(verdict.second_only.size()),
                         std::to_string(verdict.pairs_checked)});
  json evidence = json::object();
  auto sample = [&](const std::vector<relations::SuperiorityEvidence>& ev) {
    json a = json::array();
    for (std::size_t i = 0; i < ev.size() && i < 20; ++i) {
      a.push_back({{"distribution", ev[i].dist_index},
                   {"preferred", json_partition(in.parts[ev[i].preferred_index], in.names)},
                   {"dispreferred",
                    json_partition(in.parts[ev[i].dispreferred_index], in.names)}});
    }
    return a;
  };
  evidence["first_only"] = sample(verdict.first_only);
  evidence["second_only"] = sample(verdict.second_only);
  report.extra = evidence;
  return report.emit(o);
}

int cmd_enumerate(const CommonOpts& o, int n, bool strong_only, bool dedup) {
  Report report;
  report.command = "enumerate";
  std::vector<std::string> names;
  HypothesisSet universe;
  if (!o.scenario_path.empty()) {
    Scenario sc = require_scenario(o, report);
    names = sc.names;
    universe = sc.universe();
  } else if (n > 0) {
    universe = HypothesisSet::first(n);
    for (int i = 0; i < n; ++i) names.push_back("h" + std::to_string(i + 1));
  } else {
    throw ValidationError("provide --scenario or --n");
  }
  enumerate::EnumOptions opts{strong_only, dedup, 12};
  enumerate::DpStream stream(universe, opts);

  std::ostream* os = &std::cout;
  std::ofstream file;
  if (!o.output.empty()) {
    file.open(o.output, std::ios::binary);
    if (!file) throw ValidationError("cannot write to " + o.output);
    os = &file;
  }
  if (o.format == "csv") *os << "plus,minus,zero,class\n";
  std::uint64_t count = 0;
  while (auto p = stream.next()) {
    ++count;
    if (o.format == "json") {
      json j = json_partition(*p, names);
      j["class"] = to_string(classify(*p));
      *os << j.dump() << "\n";
    } else if (o.format == "csv") {
      auto flat = [&](HypothesisSet s) {
        std::string out;
        for (HypothesisId h : s) {
          if (!out.empty()) out += ';';
          out += names[h];
        }
        return out;
      };
      *os << flat(p->plus()) << "," << flat(p->minus()) << "," << flat(p->zero()) << ","
          << to_string(classify(*p)) << "\n";
    } else {
      *os << to_string(*p, names) << "\n";
    }
  }
  if (o.format == "text") *os << count << " partitions\n";
  return 0;
}

void append_trace(Report& report, const synthesis::SearchTrace& trace,
                  std::span<const std::string> names, const Distribution& dist) {
  report.param("expanded", std::to_string(trace.expanded.size()));
  report.param("generated", std::to_string(trace.generated));
  report.param("pruned", std::to_string(trace.pruned));
  report.param("backtracks", std::to_string(trace.backtracks));
  report.columns = {"depth", "partition", "g", "moved", "mass_moved", "goal"};
  std::vector<int> depth(trace.expanded.size(), 0);
  json records = json::array();
  for (std::size_t i = 0; i < trace.expanded.size(); ++i) {
    const synthesis::SearchNode& node = trace.expanded[i];
    depth[i] = node.parent >= 0 ? depth[node.parent] + 1 : 0;
    std::string moved = node.moved ? names[*node.moved] : "-";
    std::string mass = node.moved ? fmt6(dist.prob(*node.moved)) : "-";
    report.rows.push_back({std::string(depth[i], '.') + std::to_string(depth[i]),
                           to_string(node.part, names), fmt6(node.g), moved, mass,
                           node.is_goal ? "goal" : "-"});
    records.push_back({{"partition", json_partition(node.part, names)},
                       {"g", node.g},
                       {"moved", moved},
                       {"parent", node.parent},
                       {"goal", node.is_goal},
                       {"pruned_children", node.pruned_children},
                       {"backtracked", node.backtracked}});
  }
  report.extra["trace"] = records;
}

int cmd_synthesize(const CommonOpts& o, int budget, bool optimize_balance) {
  Report report;
  report.command = "synthesize";
  auto measures = parse_measures(o);
  if (measures.size() != 1) throw ValidationError("synthesize takes exactly one --measure");
  synthesis::SearchConfig config = synthesis::SearchConfig::for_measure(measures[0]);
  config.epsilon = o.epsilon;
  config.max_expansions = budget;
  config.optimize_balance = optimize_balance;
  config.eval = eval_opts(o);
  report.param("measure", measure_label(measures[0], o));
  report.param("equiv_class", std::string(synthesis::to_string(config.ec)));
  report.param("epsilon", fmt6(o.epsilon));

  const bool searchable = config.ec == synthesis::EquivClass::EC1 ||
                          config.ec == synthesis::EquivClass::EC2 ||
                          config.ec == synthesis::EquivClass::EC3;

  if (!o.boxes_path.empty()) {
    boxes::BoxScenario sc = require_boxes(o, report);
    boxes::QuerySynthesis result = boxes::synthesize_query(config, sc);
    append_trace(report, result.trace, sc.names, sc.dist);
    report.param("goal", to_string(result.partition, sc.names));
    report.param("point", "(" + fmt6(result.point.x) + ", " + fmt6(result.point.y) + ")");
    std::string rejected;
    for (const Partition& p : result.rejected) {
      if (!rejected.empty()) rejected += ", ";
      rejected += to_string(p, sc.names);
    }
    report.param("unrealizable_goals", rejected.empty() ? "-" : rejected);
    return report.emit(o);
  }

  Scenario sc = require_scenario(o, report);
  if (searchable) {
    synthesis::SearchTrace trace =
        synthesis::synthesize_partition(config, sc.universe(), sc.dist);
    append_trace(report, trace, sc.names, sc.dist);
    if (trace.goal) {
      report.param("goal", to_string(*trace.goal, sc.names));
      report.param("goal_value", fmt6(trace.goal_value));
    } else if (trace.best_found) {
      report.param("goal", "none");
      report.param("best_found", to_string(*trace.best_found, sc.names));
      report.param("best_value", fmt6(trace.best_value));
    }
  } else {
    synthesis::DirectOptimum direct =
        synthesis::direct_optimum(config.ec, sc.universe(), sc.dist, measures[0], config.eval);
    report.columns = {"partition", "value", "feasible"};
    report.rows.push_back({to_string(direct.part, sc.names), fmt6(direct.value),
                           direct.feasible ? "true" : "false"});
  }
  return report.emit(o);
}

int cmd_realize(const CommonOpts& o, const std::string& plus, const std::string& minus,
                bool list_cells) {
  Report report;
  report.command = "realize";
  boxes::BoxScenario sc = require_boxes(o, report);
  if (list_cells) {
    report.columns = {"plus", "minus", "point_x", "point_y"};
    for (const Partition& p : boxes::realizable_dps(sc, sc.universe())) {
      auto pt = boxes::realize_query(p, sc);
      auto flat = [&](HypothesisSet s) {
        std::string out;
        for (HypothesisId h : s) {
          if (!out.empty()) out += ';';
          out += sc.names[h];
        }
        return out;
      };
      report.rows.push_back({flat(p.plus()), flat(p.minus()), fmt6(pt->x), fmt6(pt->y)});
    }
    return report.emit(o);
  }
  auto side = [&](const std::string& csv) {
    HypothesisSet s;
    std::stringstream ss(csv);
    std::string name;
    while (std::getline(ss, name, ',')) {
      auto it = std::find(sc.names.begin(), sc.names.end(), name);
      if (it == sc.names.end()) throw ValidationError("unknown hypothesis '" + name + "'");
      s.insert(static_cast<HypothesisId>(it - sc.names.begin()));
    }
    return s;
  };
  if (plus.empty() || minus.empty()) {
    throw ValidationError("realize needs --plus and --minus (or --cells)");
  }
  Partition goal = Partition::make(side(plus), side(minus), {}, sc.universe());
  report.param("goal", to_string(goal, sc.names));
  auto pt = boxes::realize_query(goal, sc);
  if (!pt) {
    throw InfeasibleError("no point realizes " + to_string(goal, sc.names));
  }
  report.columns = {"point_x", "point_y"};
  report.rows.push_back({fmt6(pt->x), fmt6(pt->y)});
  return report.emit(o);
}

int cmd_simulate(const CommonOpts& o, const std::string& target_name, const std::string& stop,
                 double theta) {
  Report report;
  report.command = "simulate";
  report.param("seed", std::to_string(o.seed));
  auto measures = parse_measures(o);
  if (measures.size() != 1) throw ValidationError("simulate takes exactly one --measure");
  report.param("measure", measure_label(measures[0], o));

  std::vector<std::string> names;
  Distribution prior;
  sim::SessionMode mode;
  if (!o.boxes_path.empty()) {
    boxes::BoxScenario sc = require_boxes(o, report);
    names = sc.names;
    prior = sc.dist;
    mode = sim::SynthesisMode{std::move(sc), o.epsilon, 0};
  } else {
    Scenario sc = require_scenario(o, report);
    if (sc.partitions.empty()) throw ValidationError("pool simulation needs partitions");
    names = sc.names;
    prior = sc.dist;
    mode = sim::PoolMode{sc.partitions};
  }

  HypothesisId target;
  if (!target_name.empty()) {
    auto it = std::find(names.begin(), names.end(), target_name);
    if (it == names.end()) throw ValidationError("unknown hypothesis '" + target_name + "'");
    target = static_cast<HypothesisId>(it - names.begin());
  } else {
    std::mt19937_64 rng(mix_seed(o.seed, 0x746172ULL, 0));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double r = u(rng), acc = 0.0;
    target = prior.support().min();
    for (auto [h, w] : prior.entries()) {
      acc += w;
      target = h;
      if (r < acc) break;
    }
  }
  report.param("target", names[target]);
  sim::StopRule rule{stop == "mass" ? sim::StopKind::MassThreshold
                                    : sim::StopKind::SingletonSupport,
                     theta};
  report.param("stop", stop == "mass" ? "mass>=" + fmt6(theta) : "singleton");

  sim::RunResult r = sim::run_session(prior, measures[0], mode,
                                      {target, mix_seed(o.seed, 0xC01ULL, 1)}, rule,
                                      eval_opts(o));
  report.columns = {"step", "query", "answer", "answer_prob"};
  for (std::size_t i = 0; i < r.history.size(); ++i) {
    report.rows.push_back({std::to_string(i + 1), to_string(r.history[i].query, names),
                           r.history[i].answer == Answer::Yes ? "1" : "0",
                           fmt6(r.history[i].answer_prob)});
  }
  report.param("queries_asked", std::to_string(r.queries_asked));
  report.param("identified", r.identified ? "true" : "false");
  std::string posterior;
  for (auto [h, w] : r.final_dist.entries()) {
    if (!posterior.empty()) posterior += ", ";
    posterior += names[h] + ":" + fmt6(w);
  }
  report.param("posterior", posterior);
  return report.emit(o);
}

int cmd_benchmark(const CommonOpts& o, const std::vector<std::string>& pool_paths,
                  const std::vector<std::string>& box_paths, int reps,
                  const std::string& stop, double theta, const std::string& detail_path) {
  Report report;
  report.command = "benchmark";
  report.param("seed", std::to_string(o.seed));
  report.param("repetitions", std::to_string(reps));
  auto measures = parse_measures(o);
  std::vector<sim::BenchScenario> scenarios;
  for (const std::string& path : pool_paths) {
    Scenario sc = io::load_scenario(path);
    if (sc.partitions.empty()) throw ValidationError(path + ": pool scenario needs partitions");
    report.param("scenario:" + path, io::file_digest(path));
    scenarios.push_back({path, sc.dist, sim::PoolMode{sc.partitions}});
  }
  for (const std::string& path : box_paths) {
    boxes::BoxScenario sc = io::load_box_scenario(path);
    report.param("boxes:" + path, io::file_digest(path));
    Distribution prior = sc.dist;
    scenarios.push_back({path, prior, sim::SynthesisMode{std::move(sc), o.epsilon, 0}});
  }
  if (scenarios.empty()) throw ValidationError("benchmark needs --scenario or --boxes");
  sim::StopRule rule{stop == "mass" ? sim::StopKind::MassThreshold
                                    : sim::StopKind::SingletonSupport,
                     theta};
  std::vector<sim::RunDetail> details;
  auto rows = sim::benchmark(measures, scenarios, reps, o.seed, rule, eval_opts(o), o.jobs,
                             &details);
  report.columns = {"measure", "scenario", "repetitions", "mean_queries", "median_queries",
                    "max_queries", "identification_rate"};
  for (const auto& row : rows) {
    report.rows.push_back({row.measure, row.scenario, std::to_string(row.repetitions),
                           fmt6(row.mean_queries), fmt6(row.median_queries),
                           std::to_string(row.max_queries), fmt6(row.identification_rate)});
  }
  if (!detail_path.empty()) {
    std::ofstream out(detail_path, std::ios::binary);
    if (!out) throw ValidationError("cannot write to " + detail_path);
    out << "measure,scenario,repetition,target,queries,identified\n";
    for (const auto& d : details) {
      out << measures[d.measure_index].str() << "," << scenarios[d.scenario_index].name << ","
          << d.repetition << "," << d.target << "," << d.queries << ","
          << (d.identified ? 1 : 0) << "\n";
    }
  }
  return report.emit(o);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "query selection measures over version-space partitions: evaluation, "
      "discrimination-preference checking, query synthesis and session benchmarks"};
  app.require_subcommand(1);
  app.footer("Exit codes: 0 ok, 2 usage error, 3 validation error, 4 infeasible request.");

  CommonOpts o;
  int n = 0, dists = 0, budget = 0, reps = 10;
  bool strong_only = false, dedup = false, all_pairs = false, optimize_balance = false;
  bool list_cells = false;
  std::vector<std::string> dpo_names, pool_paths, box_paths;
  std::string plus, minus, target_name, stop = "singleton", detail_path;
  double theta = 0.95;

  auto* eval = app.add_subcommand("eval", "Evaluate measures on a scenario's partitions");
  eval->add_option("--scenario", o.scenario_path)->required();
  eval->add_option("--measure", o.measure_specs, "Measure spec, repeatable")->required();
  add_common(eval, o, false);

  auto* rank = app.add_subcommand("rank", "Rank a scenario's partitions by measure value");
  rank->add_option("--scenario", o.scenario_path)->required();
  rank->add_option("--measure", o.measure_specs)->required();
  add_common(rank, o, false);

  auto* dpo = app.add_subcommand("dpo", "Check discrimination preference between partitions");
  dpo->add_option("--scenario", o.scenario_path)->required();
  dpo->add_option("names", dpo_names, "Two partition names");
  dpo->add_flag("--all", all_pairs, "Check every ordered pair in the scenario");
  add_common(dpo, o, false);

  auto* compliance = app.add_subcommand(
      "compliance", "Check measures against the discrimination preference order");
  compliance->add_option("--scenario", o.scenario_path);
  compliance->add_option("--n", n, "Enumerate all DPs over this many hypotheses");
  compliance->add_option("--dists", dists, "Number of seeded random distributions");
  compliance->add_flag("--strong-only", strong_only);
  compliance->add_option("--measure", o.measure_specs)->required();
  compliance->add_option("--jobs", o.jobs, "Worker threads across distributions");
  add_common(compliance, o);

  auto* equiv = app.add_subcommand("equiv", "Check whether two measures rank queries equally");
  equiv->add_option("--scenario", o.scenario_path);
  equiv->add_option("--n", n);
  equiv->add_option("--dists", dists);
  equiv->add_flag("--strong-only", strong_only);
  equiv->add_option("--measure", o.measure_specs)->required();
  add_common(equiv, o);

  auto* superior = app.add_subcommand("superior",
                                      "Check the superiority relation between two measures");
  superior->add_option("--scenario", o.scenario_path);
  superior->add_option("--n", n);
  superior->add_option("--dists", dists);
  superior->add_flag("--strong-only", strong_only);
  superior->add_option("--measure", o.measure_specs)->required();
  add_common(superior, o);

  auto* enumerate_cmd = app.add_subcommand("enumerate",
                                           "Stream all discriminating partitions");
  enumerate_cmd->add_option("--scenario", o.scenario_path);
  enumerate_cmd->add_option("--n", n);
  enumerate_cmd->add_flag("--strong-only", strong_only);
  enumerate_cmd->add_flag("--dedup", dedup, "Drop one of each mirror pair");
  add_common(enumerate_cmd, o, false);

  auto* synthesize = app.add_subcommand("synthesize",
                                        "Search for a (nearly) optimal partition or query");
  synthesize->add_option("--scenario", o.scenario_path);
  synthesize->add_option("--boxes", o.boxes_path);
  synthesize->add_option("--measure", o.measure_specs)->required();
  synthesize->add_option("--epsilon", o.epsilon)->capture_default_str();
  synthesize->add_option("--budget", budget, "Expansion budget (0 = 10*|V|^2)");
  synthesize->add_flag("--optimize-balance", optimize_balance,
                       "Keep searching for the best-balanced goal");
  add_common(synthesize, o, false);

  auto* realize = app.add_subcommand("realize", "Find a point query for a goal partition");
  realize->add_option("--boxes", o.boxes_path)->required();
  realize->add_option("--plus", plus, "Comma-separated hypothesis names predicting 1");
  realize->add_option("--minus", minus, "Comma-separated hypothesis names predicting 0");
  realize->add_flag("--cells", list_cells, "List all realizable partitions with witness points");
  add_common(realize, o, false);

  auto* simulate = app.add_subcommand("simulate", "Run one active-learning session");
  simulate->add_option("--scenario", o.scenario_path);
  simulate->add_option("--boxes", o.boxes_path);
  simulate->add_option("--measure", o.measure_specs)->required();
  simulate->add_option("--target", target_name, "Target hypothesis (default: sampled by seed)");
  simulate->add_option("--stop", stop)->check(CLI::IsMember({"singleton", "mass"}));
  simulate->add_option("--theta", theta)->capture_default_str();
  simulate->add_option("--epsilon", o.epsilon)->capture_default_str();
  add_common(simulate, o);

  auto* benchmark = app.add_subcommand("benchmark", "Aggregate sessions over measures");
  benchmark->add_option("--scenario", pool_paths, "Pool scenario file, repeatable");
  benchmark->add_option("--boxes", box_paths, "Box scenario file, repeatable");
  benchmark->add_option("--measure", o.measure_specs)->required();
  benchmark->add_option("--reps", reps)->capture_default_str();
  benchmark->add_option("--stop", stop)->check(CLI::IsMember({"singleton", "mass"}));
  benchmark->add_option("--theta", theta)->capture_default_str();
  benchmark->add_option("--jobs", o.jobs);
  benchmark->add_option("--detail", detail_path, "Write per-run details to this CSV file");
  add_common(benchmark, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (eval->parsed()) return cmd_eval(o);
    if (rank->parsed()) return cmd_rank(o);
    if (dpo->parsed()) return cmd_dpo(o, dpo_names, all_pairs);
    if (compliance->parsed()) return cmd_compliance(o, n, dists, strong_only);
    if (equiv->parsed()) return cmd_equiv(o, n, dists, strong_only);
    if (superior->parsed()) return cmd_superior(o, n, dists, strong_only);
    if (enumerate_cmd->parsed()) return cmd_enumerate(o, n, strong_only, dedup);
    if (synthesize->parsed()) return cmd_synthesize(o, budget, optimize_balance);
    if (realize->parsed()) return cmd_realize(o, plus, minus, list_cells);
    if (simulate->parsed()) return cmd_simulate(o, target_name, stop, theta);
    if (benchmark->parsed())
      return cmd_benchmark(o, pool_paths, box_paths, reps, stop, theta, detail_path);
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitUsage;
}
