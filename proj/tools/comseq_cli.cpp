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

// comseq: command-line front end. Each subcommand is one pipeline stage
// reading and writing the files of a run directory (--out).

#if __has_include(<CLI/CLI.hpp>)
#include <CLI/CLI.hpp>
#else
#include <CLI11.hpp>
#endif

#include <filesystem>
#include <iostream>

#include "comseq/comseq.hpp"

namespace {

using namespace comseq;

struct Options {
  PipelineConfig cfg;
  std::string topology = "clustered";
  std::string score = "growth";
  std::string k_range = "2:8";
  std::size_t max_seq = 5;
  std::uint64_t seed = 42;
  bool no_supporters = false;
};

void parse_k_range(const std::string& s, ClusterOptions& opt) {
  auto colon = s.find(':');
  auto lo = detail::parse_int(s.substr(0, colon));
  auto hi = colon == std::string::npos ? lo : detail::parse_int(s.substr(colon + 1));
  if (!lo || !hi || *lo < 1 || *hi < *lo) throw ValidationError("--k-range expects LO:HI");
  opt.k_lo = static_cast<std::size_t>(*lo);
  opt.k_hi = static_cast<std::size_t>(*hi);
}

PipelineConfig finish(Options& o) {
  auto cfg = o.cfg;
  cfg.topology = parse_topology(o.topology);
  cfg.selection.score_mode = parse_score(o.score);
  cfg.selection.max_seq = o.max_seq;
  cfg.clustering.seed = o.seed;
  parse_k_range(o.k_range, cfg.clustering);
  cfg.write_supporters = !o.no_supporters;
  return cfg;
}

void add_network(CLI::App* app, Options& o, bool required) {
  app->add_option("--edges", o.cfg.edges_path, "edges.csv (slice,source,target)")->required(required);
  app->add_option("--attrs", o.cfg.attrs_path, "attrs.csv (slice,node,attribute,value)")->required(required);
  app->add_flag("--remove-isolates", o.cfg.drop_isolates, "drop nodes isolated in every slice");
}

void add_out(CLI::App* app, Options& o) {
  app->add_option("--out", o.cfg.out_dir, "run directory")->required();
}

void add_communities(CLI::App* app, Options& o) {
  app->add_option("--communities", o.cfg.communities_path,
                  "communities.csv to use instead of detection");
}

void add_discretize(CLI::App* app, Options& o) {
  app->add_option("--bins", o.cfg.bins_path, "bins.json with attribute cut points");
  app->add_option("--k-range", o.k_range, "k-means cluster counts tried, LO:HI");
  app->add_option("--seed", o.seed, "k-means seed");
  app->add_option("--topology", o.topology, "clustered | degree | none");
}

void add_thresholds(CLI::App* app, Options& o) {
  app->add_option("--min-sup", o.cfg.min_sup, "count, or fraction of nodes when < 1");
  app->add_option("--min-gr", o.cfg.min_gr, "minimum growth rate");
}

void add_selection(CLI::App* app, Options& o) {
  app->add_option("--max-seq", o.max_seq, "patterns kept per community sequence");
  app->add_option("--score", o.score, "growth | support");
}

// Communities for a stage: --communities, else the run directory's file.
EvolvingCommunityStructure stage_communities(const PipelineConfig& cfg,
                                             const std::vector<std::string>& labels,
                                             std::size_t theta) {
  auto path = cfg.communities_path.empty() ? in_dir(cfg.out_dir, files::kCommunities)
                                           : cfg.communities_path;
  return use_given_communities(path, labels, theta);
}

SequenceDatabase stage_db(const PipelineConfig& cfg, const std::vector<std::string>& labels) {
  return read_database(in_dir(cfg.out_dir, files::kSeqdb), in_dir(cfg.out_dir, files::kItems), labels);
}

int run(int argc, char** argv) {
  CLI::App app{"Community characterization in dynamic attributed networks"};
  app.require_subcommand(1);
  Options o;

  GeneratorConfig gcfg;
  AttributeConfig acfg;
  std::string event = "switch", dist = "degenerate", gen_out;
  auto* gen = app.add_subcommand("generate", "synthesize a dynamic attributed network");
  gen->add_option("--out", gen_out, "output directory")->required();
  gen->add_option("--n", gcfg.n);
  gen->add_option("--theta", gcfg.theta);
  gen->add_option("--avg-degree", gcfg.avg_degree);
  gen->add_option("--max-degree", gcfg.max_degree);
  gen->add_option("--degree-exponent", gcfg.degree_exponent);
  gen->add_option("--community-exponent", gcfg.community_size_exponent);
  gen->add_option("--mixing", gcfg.mixing);
  gen->add_option("--min-community", gcfg.min_community);
  gen->add_option("--max-community", gcfg.max_community);
  gen->add_option("--event", event, "birth-death | merge-split | hide-appear | expansion-contraction | switch");
  gen->add_option("--births", gcfg.events.births);
  gen->add_option("--deaths", gcfg.events.deaths);
  gen->add_option("--merges", gcfg.events.merges);
  gen->add_option("--splits", gcfg.events.splits);
  gen->add_option("--hides", gcfg.events.hides);
  gen->add_option("--expansions", gcfg.events.expansions);
  gen->add_option("--contractions", gcfg.events.contractions);
  gen->add_option("--expansion-pct", gcfg.events.expansion_pct);
  gen->add_option("--switch-pct", gcfg.events.switch_pct);
  gen->add_option("--attributes", acfg.count);
  gen->add_option("--min-a", acfg.min_value);
  gen->add_option("--max-a", acfg.max_value);
  gen->add_option("--evolution-pct", acfg.evolution_pct);
  gen->add_option("--distribution", dist, "degenerate | binomial | power | uniform");
  gen->add_option("--seed", gcfg.seed);

  auto* detect = app.add_subcommand("detect", "incremental Louvain communities");
  add_network(detect, o, true);
  add_out(detect, o);

  auto* meas = app.add_subcommand("measures", "per-node topological measures");
  add_network(meas, o, true);
  add_out(meas, o);
  add_communities(meas, o);

  auto* disc = app.add_subcommand("discretize", "descriptor table from measures and attributes");
  add_network(disc, o, true);
  add_out(disc, o);
  add_discretize(disc, o);

  auto* seq = app.add_subcommand("seqdb", "sequence database from a run directory");
  add_out(seq, o);
  add_communities(seq, o);

  auto* mine = app.add_subcommand("mine", "closed frequent sequential patterns");
  add_out(mine, o);
  mine->add_option("--min-sup", o.cfg.min_sup, "count, or fraction of nodes when < 1");
  mine->add_option("--max-len", o.cfg.max_itemsets, "itemsets per pattern (0: slice count)");
  mine->add_flag("--no-supporters", o.no_supporters, "omit supporter lists");

  auto* chr = app.add_subcommand("characterize", "community sequences and emerging candidates");
  add_out(chr, o);
  add_thresholds(chr, o);

  auto* sel = app.add_subcommand("select", "greedy coverage selection");
  add_out(sel, o);
  add_selection(sel, o);

  auto* rep = app.add_subcommand("report", "text report from report.jsonl");
  add_out(rep, o);

  auto* pipe = app.add_subcommand("pipeline", "all stages end to end");
  add_network(pipe, o, true);
  add_out(pipe, o);
  add_communities(pipe, o);
  add_discretize(pipe, o);
  add_thresholds(pipe, o);
  add_selection(pipe, o);
  pipe->add_option("--max-len", o.cfg.max_itemsets, "itemsets per pattern (0: slice count)");
  pipe->add_flag("--no-supporters", o.no_supporters, "omit supporter lists in patterns.jsonl");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  auto cfg = finish(o);
  if (*gen) {
    gcfg.event_type = parse_event_type(event);
    acfg.distribution = parse_distribution(dist);
    auto g = run_stage("generate", nullptr, [&] { return generate(gcfg, acfg); });
    run_stage("write", nullptr, [&] { write_generated(g, gen_out); });
    std::cout << "wrote " << gen_out << " (n=" << g.network.n() << ", theta=" << g.network.theta()
              << ")\n";
  } else if (*detect) {
    auto net = run_stage("load", nullptr, [&] { return stages::load(cfg); });
    cfg.communities_path.clear();
    run_stage("communities", nullptr, [&] { stages::communities(cfg, net); });
  } else if (*meas) {
    auto net = run_stage("load", nullptr, [&] { return stages::load(cfg); });
    auto comms = run_stage("communities", nullptr, [&] {
      if (cfg.communities_path.empty() &&
          std::filesystem::exists(in_dir(cfg.out_dir, files::kCommunities)))
        return stage_communities(cfg, net.labels, net.theta());
      return stages::communities(cfg, net);
    });
    cfg.topology = TopologyMode::Clustered;
    run_stage("measures", nullptr, [&] { stages::measures(cfg, net, comms); });
  } else if (*disc) {
    auto net = run_stage("load", nullptr, [&] { return stages::load(cfg); });
    auto tables = run_stage("measures", nullptr, [&] {
      std::vector<MeasureTable> t;
      if (cfg.topology != TopologyMode::None)
        t = read_measures_csv(in_dir(cfg.out_dir, files::kMeasures), net.labels, net.theta());
      return t;
    });
    run_stage("discretize", nullptr, [&] { stages::discretize(cfg, net, tables); });
  } else if (*seq) {
    run_stage("seqdb", nullptr, [&] {
      auto labels = read_node_map(in_dir(cfg.out_dir, files::kNodeMap));
      auto tab = read_discrete(in_dir(cfg.out_dir, files::kDiscrete),
                               in_dir(cfg.out_dir, files::kDescriptors), labels);
      auto comms = stage_communities(cfg, labels, tab.theta);
      stages::seqdb(cfg, tab, comms, labels);
    });
  } else if (*mine) {
    run_stage("mine", nullptr, [&] {
      auto labels = read_node_map(in_dir(cfg.out_dir, files::kNodeMap));
      auto db = stage_db(cfg, labels);
      MinerStats stats;
      auto ps = stages::mine(cfg, db, labels, &stats);
      std::cout << ps.size() << " closed frequent patterns, " << count_community_related(ps)
                << " community-related\n";
    });
  } else if (*chr) {
    run_stage("characterize", nullptr, [&] {
      auto labels = read_node_map(in_dir(cfg.out_dir, files::kNodeMap));
      auto db = stage_db(cfg, labels);
      auto ps = read_patterns(in_dir(cfg.out_dir, files::kPatterns), db, labels);
      stages::characterize(cfg, ps, db, labels);
    });
  } else if (*sel) {
    run_stage("select", nullptr, [&] {
      auto labels = read_node_map(in_dir(cfg.out_dir, files::kNodeMap));
      auto db = stage_db(cfg, labels);
      auto ch = read_emergence(in_dir(cfg.out_dir, files::kEmergence), db, labels);
      stages::select(cfg, ch, db, labels);
    });
  } else if (*rep) {
    run_stage("report", nullptr, [&] { stages::report(cfg); });
    std::cout << render_report(read_jsonl(in_dir(cfg.out_dir, files::kReportJson)));
  } else if (*pipe) {
    auto res = run_pipeline(cfg);
    const auto& m = res.metrics;
    std::cout << "n=" << m.n << " theta=" << m.theta << " min_sup=" << m.min_sup_count
              << " cfs=" << m.cfs_count << " community-related=" << m.community_related << " ("
              << detail::format_real(m.community_related_fraction, 4) << ")"
              << " community sequences=" << m.community_sequences << "\n";
    for (const auto& [stage, s] : m.stage_seconds)
      std::cout << "  " << stage << ": " << detail::format_real(s, 4) << " s\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const comseq::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 2;
  }
}
