// Copyright 2026 The comseq Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <chrono>
#include <cmath>
#include <filesystem>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "comseq/communities.hpp"
#include "comseq/coverage.hpp"
#include "comseq/discretize.hpp"
#include "comseq/emergence.hpp"
#include "comseq/measures.hpp"
#include "comseq/miner.hpp"
#include "comseq/network.hpp"
#include "comseq/seqdb.hpp"

namespace comseq {

/// File names inside a run directory.
namespace files {
inline constexpr const char* kNodeMap = "nodes.map.csv";
inline constexpr const char* kCommunities = "communities.csv";
inline constexpr const char* kMeasures = "measures.csv";
inline constexpr const char* kDiscrete = "discrete.csv";
inline constexpr const char* kDescriptors = "descriptors.json";
inline constexpr const char* kClusters = "clusters.json";
inline constexpr const char* kSeqdb = "seqdb.jsonl";
inline constexpr const char* kItems = "items.json";
inline constexpr const char* kPatterns = "patterns.jsonl";
inline constexpr const char* kEmergence = "emergence.jsonl";
inline constexpr const char* kReportJson = "report.jsonl";
inline constexpr const char* kReportText = "report.txt";
inline constexpr const char* kMetrics = "metrics.json";
}  // namespace files

inline TopologyMode parse_topology(const std::string& s) {
  if (s == "clustered") return TopologyMode::Clustered;
  if (s == "degree") return TopologyMode::Degree;
  if (s == "none") return TopologyMode::None;
  throw ValidationError("unknown topology mode '" + s + "'");
}

inline ScoreMode parse_score(const std::string& s) {
  if (s == "growth") return ScoreMode::GrowthRate;
  if (s == "support") return ScoreMode::Support;
  throw ValidationError("unknown score mode '" + s + "'");
}

/// Values below 1 are a fraction of n (rounded up); others an integer count.
inline std::size_t resolve_min_sup(double min_sup, std::size_t n) {
  if (!(min_sup > 0)) throw ValidationError("min_sup must be positive");
  if (min_sup < 1) {
    const double c = std::ceil(min_sup * static_cast<double>(n) - 1e-9);
    return std::max<std::size_t>(1, static_cast<std::size_t>(c));
  }
  if (min_sup != std::floor(min_sup)) throw ValidationError("min_sup >= 1 must be an integer count");
  return static_cast<std::size_t>(min_sup);
}

struct PipelineConfig {
  std::string edges_path;
  std::string attrs_path;
  /// Ground-truth communities; detected with incremental Louvain when empty.
  std::string communities_path;
  std::string bins_path;
  std::string out_dir = "out";
  bool drop_isolates = false;
  TopologyMode topology = TopologyMode::Clustered;
  double min_sup = 0.05;
  double min_gr = 1.0;
  SelectionConfig selection;
  ClusterOptions clustering;
  std::size_t max_itemsets = 0;
  bool write_supporters = true;
};

struct RunMetrics {
  std::vector<std::pair<std::string, double>> stage_seconds;
  std::size_t n = 0;
  std::size_t theta = 0;
  std::size_t min_sup_count = 0;
  std::size_t cfs_count = 0;
  std::size_t community_related = 0;
  double community_related_fraction = 0.0;
  std::size_t community_sequences = 0;
  std::size_t characterized = 0;
  MinerStats miner;

  double seconds(const std::string& stage) const {
    for (const auto& [s, v] : stage_seconds)
      if (s == stage) return v;
    return 0.0;
  }

  nlohmann::json to_json() const {
    nlohmann::json st = nlohmann::json::object();
    for (const auto& [s, v] : stage_seconds) st[s] = v;
    return {{"stage_seconds", st},
            {"n", n},
            {"theta", theta},
            {"min_sup_count", min_sup_count},
            {"cfs_count", cfs_count},
            {"community_related", community_related},
            {"community_related_fraction", community_related_fraction},
            {"community_sequences", community_sequences},
            {"characterized", characterized},
            {"miner", {{"visited", miner.visited}, {"pruned", miner.pruned}, {"candidates", miner.candidates}}}};
  }
};

/// Runs `fn`, timing it and prefixing any failure with the stage name.
/// Validation failures stay ValidationError; anything else is internal.
template <class Fn>
auto run_stage(const std::string& name, RunMetrics* metrics, Fn&& fn) {
  const auto start = std::chrono::steady_clock::now();
  auto finish = [&] {
    if (metrics)
      metrics->stage_seconds.emplace_back(
          name, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  };
  try {
    if constexpr (std::is_void_v<decltype(fn())>) {
      fn();
      finish();
    } else {
      auto r = fn();
      finish();
      return r;
    }
  } catch (const ValidationError& e) {
    throw ValidationError("stage '" + name + "': " + e.what());
  } catch (const std::exception& e) {
    throw std::runtime_error("stage '" + name + "': " + e.what());
  }
}

inline std::string in_dir(const std::string& dir, const char* file) {
  return (std::filesystem::path(dir) / file).string();
}

inline std::vector<std::string> read_node_map(const std::string& path) {
  std::vector<std::string> labels;
  detail::read_csv(path, {"index", "label"}, [&](const std::vector<std::string>& f, std::size_t line) {
    auto i = detail::parse_int(f[0]);
    if (!i || static_cast<std::size_t>(*i) != labels.size())
      throw ValidationError(path + ":" + std::to_string(line) + ": indices must be 0..n-1 in order");
    labels.push_back(f[1]);
  });
  return labels;
}

/// One characterization result per community sequence, largest group first.
inline std::vector<CharacterizationResult> order_for_report(std::vector<CharacterizationResult> rs) {
  std::stable_sort(rs.begin(), rs.end(), [](const auto& a, const auto& b) {
    const auto na = a.community_sequence.supporters.size(), nb = b.community_sequence.supporters.size();
    if (na != nb) return na > nb;
    return canonical_less(a.community_sequence.sequence, b.community_sequence.sequence);
  });
  return rs;
}

inline std::string growth_text(double gr) { return std::isinf(gr) ? "inf" : detail::format_real(gr); }

/// report.jsonl: results with display strings and every printed number.
inline void write_report_json(const std::vector<CharacterizationResult>& results,
                              const SequenceDatabase& db, const std::vector<std::string>& labels,
                              const std::string& path) {
  auto out = detail::open_output(path);
  for (const auto& r : results) {
    nlohmann::json sel = nlohmann::json::array();
    for (const auto& c : r.selected) {
      auto j = candidate_to_json(c, db, labels);
      j["display"] = sequence_display(c.pattern, db.descriptors);
      sel.push_back(std::move(j));
    }
    nlohmann::json anomalies = nlohmann::json::array();
    for (NodeId v : r.anomalies) anomalies.push_back(labels[v]);
    out << nlohmann::json{{"community_sequence",
                           sequence_to_json(r.community_sequence.sequence, db.descriptors)},
                          {"display", sequence_display(r.community_sequence.sequence, db.descriptors)},
                          {"n_supporters", r.community_sequence.supporters.size()},
                          {"selected", std::move(sel)},
                          {"n_covered", r.covered.size()},
                          {"n_anomalies", r.anomalies.size()},
                          {"anomalies", std::move(anomalies)}}
               .dump()
        << '\n';
  }
}

/// Text rendering of report.jsonl lines.
inline std::string render_report(const std::vector<nlohmann::json>& lines) {
  std::ostringstream os;
  if (lines.empty()) {
    os << "no community sequence met thresholds\n";
    return os.str();
  }
  for (const auto& j : lines) {
    const auto n = j.at("n_supporters").get<std::size_t>();
    os << "community sequence " << j.at("display").get<std::string>() << "\n";
    os << "  supporters: " << n << "  anomalies: " << j.at("n_anomalies").get<std::size_t>() << "\n";
    if (j.at("selected").empty()) {
      os << "  no characteristic pattern\n\n";
      continue;
    }
    os << "  pattern | support | growth rate\n";
    for (const auto& c : j.at("selected")) {
      const double gr = growth_from_json(c.at("growth_rate"));
      os << "  " << c.at("display").get<std::string>() << " | "
         << c.at("support_count").get<std::size_t>() << " ("
         << detail::format_real(c.at("support").get<double>()) << ") | " << growth_text(gr) << "\n";
    }
    os << "\n";
  }
  return os.str();
}

inline std::vector<nlohmann::json> read_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  std::vector<nlohmann::json> out;
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    if (detail::trim(line).empty()) continue;
    try {
      out.push_back(nlohmann::json::parse(line));
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

inline void write_report_text(const std::string& report_json, const std::string& report_txt) {
  auto text = render_report(read_jsonl(report_json));
  auto out = detail::open_output(report_txt);
  out << text;
}

/// Stage helpers shared by the pipeline and the stand-alone subcommands.
namespace stages {

inline DynamicAttributedNetwork load(const PipelineConfig& cfg) {
  auto net = load_network(cfg.edges_path, cfg.attrs_path);
  if (cfg.drop_isolates) net = remove_isolates(net);
  std::filesystem::create_directories(cfg.out_dir);
  write_node_map(net, in_dir(cfg.out_dir, files::kNodeMap));
  return net;
}

inline EvolvingCommunityStructure communities(const PipelineConfig& cfg,
                                              const DynamicAttributedNetwork& net) {
  auto comms = cfg.communities_path.empty()
                   ? detect_evolving(net)
                   : use_given_communities(cfg.communities_path, net.labels, net.theta());
  write_communities_csv(comms, net.labels, in_dir(cfg.out_dir, files::kCommunities));
  return comms;
}

/// Writes measures.csv and returns the tables as persisted, so later stages
/// see the same values whether run in one go or resumed from files.
inline std::vector<MeasureTable> measures(const PipelineConfig& cfg,
                                          const DynamicAttributedNetwork& net,
                                          const EvolvingCommunityStructure& comms) {
  if (cfg.topology == TopologyMode::None) return {};
  const auto path = in_dir(cfg.out_dir, files::kMeasures);
  write_measures_csv(compute_all_measures(net, comms), net.labels, path);
  return read_measures_csv(path, net.labels, net.theta());
}

inline DiscreteDescriptorTable discretize(const PipelineConfig& cfg,
                                          const DynamicAttributedNetwork& net,
                                          const std::vector<MeasureTable>& tables) {
  std::vector<BinningRule> rules;
  if (!cfg.bins_path.empty()) rules = read_bins_json(cfg.bins_path);
  auto built = build_descriptor_table(net, tables, cfg.topology, rules, cfg.clustering);
  write_discrete(built.table, net.labels, in_dir(cfg.out_dir, files::kDiscrete),
                 in_dir(cfg.out_dir, files::kDescriptors));
  auto co = detail::open_output(in_dir(cfg.out_dir, files::kClusters));
  co << clusters_to_json(built.clusters).dump(2) << '\n';
  return std::move(built.table);
}

inline SequenceDatabase seqdb(const PipelineConfig& cfg, const DiscreteDescriptorTable& tab,
                              const EvolvingCommunityStructure& comms,
                              const std::vector<std::string>& labels) {
  auto db = build_database(tab, comms);
  write_database(db, labels, in_dir(cfg.out_dir, files::kSeqdb), in_dir(cfg.out_dir, files::kItems));
  return db;
}

inline std::vector<Pattern> mine(const PipelineConfig& cfg, const SequenceDatabase& db,
                                 const std::vector<std::string>& labels, MinerStats* stats) {
  MinerOptions opt;
  opt.min_sup_count = resolve_min_sup(cfg.min_sup, db.size());
  opt.max_itemsets = cfg.max_itemsets;
  auto ps = mine_closed(db, opt, stats);
  write_patterns(ps, db, labels, in_dir(cfg.out_dir, files::kPatterns), cfg.write_supporters);
  return ps;
}

inline Characterization characterize(const PipelineConfig& cfg, const std::vector<Pattern>& ps,
                                     const SequenceDatabase& db,
                                     const std::vector<std::string>& labels) {
  auto ch = comseq::characterize(ps, db, resolve_min_sup(cfg.min_sup, db.size()), cfg.min_gr);
  write_emergence(ch, db, labels, in_dir(cfg.out_dir, files::kEmergence));
  return ch;
}

inline std::vector<CharacterizationResult> select(const PipelineConfig& cfg,
                                                  const Characterization& ch,
                                                  const SequenceDatabase& db,
                                                  const std::vector<std::string>& labels) {
  auto rs = order_for_report(select_all(ch, cfg.selection));
  write_report_json(rs, db, labels, in_dir(cfg.out_dir, files::kReportJson));
  return rs;
}

inline void report(const PipelineConfig& cfg) {
  write_report_text(in_dir(cfg.out_dir, files::kReportJson), in_dir(cfg.out_dir, files::kReportText));
}

}  // namespace stages

struct PipelineResult {
  RunMetrics metrics;
  SequenceDatabase db;
  std::vector<Pattern> patterns;
  Characterization characterization;
  std::vector<CharacterizationResult> results;
  std::vector<std::string> labels;
};

/// load, communities, measures, discretize, seqdb, mine, characterize,
/// select, report; every stage persists its output under cfg.out_dir.
inline PipelineResult run_pipeline(const PipelineConfig& cfg) {
  PipelineResult res;
  auto& m = res.metrics;
  if (cfg.min_gr < 0) throw ValidationError("min_gr must be >= 0");
  auto net = run_stage("load", &m, [&] { return stages::load(cfg); });
  res.labels = net.labels;
  m.n = net.n();
  m.theta = net.theta();
  auto comms = run_stage("communities", &m, [&] { return stages::communities(cfg, net); });
  auto tables = run_stage("measures", &m, [&] { return stages::measures(cfg, net, comms); });
  auto tab = run_stage("discretize", &m, [&] { return stages::discretize(cfg, net, tables); });
  res.db = run_stage("seqdb", &m, [&] { return stages::seqdb(cfg, tab, comms, net.labels); });
  m.min_sup_count = run_stage("mine", nullptr, [&] { return resolve_min_sup(cfg.min_sup, net.n()); });
  res.patterns = run_stage("mine", &m, [&] { return stages::mine(cfg, res.db, net.labels, &m.miner); });
  m.cfs_count = res.patterns.size();
  m.community_related = count_community_related(res.patterns);
  m.community_related_fraction =
      m.cfs_count ? static_cast<double>(m.community_related) / static_cast<double>(m.cfs_count) : 0.0;
  res.characterization = run_stage("characterize", &m, [&] {
    return stages::characterize(cfg, res.patterns, res.db, net.labels);
  });
  m.community_sequences = res.characterization.community_sequences.size();
  for (const auto& cs : res.characterization.candidates)
    if (!cs.empty()) ++m.characterized;
  res.results = run_stage("select", &m, [&] {
    return stages::select(cfg, res.characterization, res.db, net.labels);
  });
  run_stage("report", &m, [&] { stages::report(cfg); });
  auto mo = detail::open_output(in_dir(cfg.out_dir, files::kMetrics));
  mo << m.to_json().dump(2) << '\n';
  return res;
}

}  // namespace comseq
