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

#include <algorithm>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "comseq/network.hpp"
#include "comseq/partition.hpp"

namespace comseq {

/// Newman-Girvan modularity of an unweighted slice.
inline double modularity(const SliceGraph& g, const Partition& part) {
  if (g.edge_count() == 0) throw ValidationError("modularity undefined on a slice without edges");
  const double m = static_cast<double>(g.edge_count());
  const std::size_t lambda = part.community_count();
  std::vector<double> intra(lambda, 0.0), total(lambda, 0.0);
  for (auto [u, v] : g.edges())
    if (part[u] == part[v]) intra[part[u]] += 1.0;
  for (NodeId v = 0; v < g.node_count(); ++v) total[part[v]] += static_cast<double>(g.degree(v));
  double q = 0.0;
  for (std::size_t c = 0; c < lambda; ++c) {
    const double share = total[c] / (2.0 * m);
    q += intra[c] / m - share * share;
  }
  return q;
}

namespace louvain_detail {

// Weighted graph used across aggregation levels. `loop[i]` holds the weight
// of i's self-loop counted twice, so degree[i] = sum of adj weights + loop[i].
struct WeightedGraph {
  std::vector<std::vector<std::pair<std::size_t, double>>> adj;
  std::vector<double> loop;
  std::vector<double> degree;
  double two_m = 0.0;

  std::size_t size() const { return adj.size(); }

  static WeightedGraph from(const SliceGraph& g) {
    WeightedGraph w;
    const std::size_t n = g.node_count();
    w.adj.resize(n);
    w.loop.assign(n, 0.0);
    w.degree.assign(n, 0.0);
    for (NodeId v = 0; v < n; ++v) {
      for (NodeId u : g.neighbors(v)) w.adj[v].emplace_back(u, 1.0);
      w.degree[v] = static_cast<double>(g.degree(v));
      w.two_m += w.degree[v];
    }
    return w;
  }

  WeightedGraph aggregate(const std::vector<std::size_t>& comm, std::size_t count) const {
    WeightedGraph out;
    out.adj.resize(count);
    out.loop.assign(count, 0.0);
    out.degree.assign(count, 0.0);
    out.two_m = two_m;
    std::vector<std::map<std::size_t, double>> acc(count);
    for (std::size_t i = 0; i < size(); ++i) {
      const std::size_t ci = comm[i];
      out.degree[ci] += degree[i];
      out.loop[ci] += loop[i];
      for (auto [j, wt] : adj[i]) {
        if (comm[j] == ci) {
          out.loop[ci] += wt;
        } else {
          acc[ci][comm[j]] += wt;
        }
      }
    }
    for (std::size_t c = 0; c < count; ++c)
      for (auto [d, wt] : acc[c]) out.adj[c].emplace_back(d, wt);
    return out;
  }
};

inline constexpr double kGainEps = 1e-12;

// Sweeps nodes in ascending order, moving each to the neighboring community
// with the best strictly positive modularity gain; among equal gains the
// lowest community id wins. Repeats until a sweep moves nothing.
inline bool local_moves(const WeightedGraph& g, std::vector<std::size_t>& comm) {
  const std::size_t n = g.size();
  std::size_t ncomm = 0;
  for (auto c : comm) ncomm = std::max(ncomm, c + 1);
  std::vector<double> tot(std::max(ncomm, n), 0.0);
  for (std::size_t i = 0; i < n; ++i) tot[comm[i]] += g.degree[i];
  std::vector<double> link(tot.size(), 0.0);
  std::vector<std::size_t> touched;

  bool any = false;
  for (bool moved = true; moved;) {
    moved = false;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t own = comm[i];
      const double ki = g.degree[i];
      touched.clear();
      for (auto [j, wt] : g.adj[i]) {
        if (link[comm[j]] == 0.0) touched.push_back(comm[j]);
        link[comm[j]] += wt;
      }
      tot[own] -= ki;
      auto gain = [&](std::size_t c) { return link[c] - tot[c] * ki / g.two_m; };
      const double own_gain = gain(own);
      std::size_t best = own;
      double best_gain = own_gain;
      std::sort(touched.begin(), touched.end());
      for (std::size_t c : touched) {
        if (c == own) continue;
        const double gc = gain(c);
        // Ascending scan: a later community must be strictly better.
        if (gc > best_gain + kGainEps) {
          best = c;
          best_gain = gc;
        }
      }
      tot[best] += ki;
      if (best != own) {
        comm[i] = best;
        moved = any = true;
      }
      for (std::size_t c : touched) link[c] = 0.0;
    }
  }
  return any;
}

inline std::size_t densify(std::vector<std::size_t>& comm) {
  std::vector<std::size_t> raw(comm.begin(), comm.end());
  auto p = Partition::canonical(raw);
  for (std::size_t i = 0; i < comm.size(); ++i) comm[i] = p.assignment[i];
  return p.community_count();
}

}  // namespace louvain_detail

/// Louvain local-move and aggregation passes. Without a seed the search
/// starts from singletons; with one it starts from the seed. A full round
/// (node-level moves, then moves on successively aggregated graphs) is
/// repeated until nothing changes, so a returned partition is a fixed point
/// when passed back as the seed.
inline Partition louvain_slice(const SliceGraph& g, const std::optional<Partition>& seed = {}) {
  using namespace louvain_detail;
  if (g.edge_count() == 0) throw ValidationError("Louvain needs at least one edge");
  const std::size_t n = g.node_count();
  std::vector<std::size_t> comm(n);
  if (seed) {
    if (seed->node_count() != n) throw ValidationError("seed partition size mismatch");
    for (NodeId v = 0; v < n; ++v) comm[v] = seed->assignment[v];
  } else {
    for (NodeId v = 0; v < n; ++v) comm[v] = v;
  }
  densify(comm);

  const WeightedGraph base = WeightedGraph::from(g);
  for (bool changed = true; changed;) {
    changed = local_moves(base, comm);
    std::size_t count = densify(comm);
    WeightedGraph level = base.aggregate(comm, count);
    for (;;) {
      std::vector<std::size_t> sub(level.size());
      for (std::size_t i = 0; i < sub.size(); ++i) sub[i] = i;
      if (!local_moves(level, sub)) break;
      changed = true;
      std::size_t sub_count = densify(sub);
      for (auto& c : comm) c = sub[c];
      level = level.aggregate(sub, sub_count);
    }
    densify(comm);
  }
  std::vector<std::size_t> raw(comm.begin(), comm.end());
  return Partition::canonical(raw);
}

/// Incremental Louvain: slice 0 from singletons, slice t seeded by t-1.
inline EvolvingCommunityStructure detect_evolving(const DynamicAttributedNetwork& net) {
  EvolvingCommunityStructure out;
  for (std::size_t t = 0; t < net.theta(); ++t) {
    if (net.slices[t].edge_count() == 0)
      throw ValidationError("slice " + std::to_string(t) + " has no edges");
    std::optional<Partition> seed;
    if (t > 0) seed = out.partitions.back();
    out.partitions.push_back(louvain_slice(net.slices[t], seed));
  }
  return out;
}

/// Reads communities.csv (slice,node,community). Nodes are matched by
/// label; ids are canonicalized per slice.
inline EvolvingCommunityStructure use_given_communities(const std::string& path,
                                                        const std::vector<std::string>& labels,
                                                        std::size_t theta) {
  std::unordered_map<std::string, NodeId> ids;
  for (NodeId v = 0; v < labels.size(); ++v) ids.emplace(labels[v], v);
  constexpr std::size_t kUnset = std::numeric_limits<std::size_t>::max();
  std::vector<std::vector<std::size_t>> raw(theta, std::vector<std::size_t>(labels.size(), kUnset));
  detail::read_csv(path, {"slice", "node", "community"},
                   [&](const std::vector<std::string>& f, std::size_t line) {
                     auto where = path + ":" + std::to_string(line) + ": ";
                     auto t = detail::parse_int(f[0]);
                     auto c = detail::parse_int(f[2]);
                     if (!t || *t < 0 || !c || *c < 0)
                       throw ValidationError(where + "malformed row");
                     if (static_cast<std::size_t>(*t) >= theta)
                       throw ValidationError(where + "slice beyond network's last slice");
                     auto it = ids.find(f[1]);
                     if (it == ids.end()) throw ValidationError(where + "unknown node '" + f[1] + "'");
                     auto& cell = raw[*t][it->second];
                     if (cell != kUnset)
                       throw ValidationError(where + "duplicate assignment for '" + f[1] + "'");
                     cell = static_cast<std::size_t>(*c);
                   });
  EvolvingCommunityStructure out;
  for (std::size_t t = 0; t < theta; ++t) {
    for (NodeId v = 0; v < labels.size(); ++v)
      if (raw[t][v] == kUnset)
        throw ValidationError(path + ": missing assignment for node '" + labels[v] +
                              "' at slice " + std::to_string(t));
    out.partitions.push_back(Partition::canonical(raw[t]));
  }
  return out;
}

inline void write_communities_csv(const EvolvingCommunityStructure& comms,
                                  const std::vector<std::string>& labels, const std::string& path) {
  auto out = detail::open_output(path);
  out << "slice,node,community\n";
  for (std::size_t t = 0; t < comms.theta(); ++t)
    for (NodeId v = 0; v < labels.size(); ++v)
      out << t << ',' << detail::csv_field(labels[v]) << ',' << comms.partitions[t][v] << '\n';
}

}  // namespace comseq
