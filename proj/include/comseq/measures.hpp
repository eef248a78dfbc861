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

#include <array>
#include <cmath>
#include <string>
#include <unordered_map>
#include <vector>

#include "comseq/network.hpp"
#include "comseq/partition.hpp"

namespace comseq {

/// Per-node topological measures of one slice.
struct MeasureTable {
  SliceIndex slice = 0;
  std::vector<double> degree;
  std::vector<double> internal_degree;
  std::vector<double> transitivity;
  std::vector<double> eccentricity;
  std::vector<double> betweenness;
  std::vector<double> closeness;
  std::vector<double> eigenvector;
  std::vector<double> within_module_degree;
  std::vector<double> participation;
  std::vector<double> embeddedness;
  /// Set when power iteration hit its iteration cap.
  bool eigenvector_converged = true;

  static constexpr std::array<const char*, 10> kColumns = {
      "degree",      "internal_degree", "transitivity",         "eccentricity",  "betweenness",
      "closeness",   "eigenvector",     "within_module_degree", "participation", "embeddedness"};

  const std::vector<double>& column(std::string_view name) const {
    if (name == "degree") return degree;
    if (name == "internal_degree") return internal_degree;
    if (name == "transitivity") return transitivity;
    if (name == "eccentricity") return eccentricity;
    if (name == "betweenness") return betweenness;
    if (name == "closeness") return closeness;
    if (name == "eigenvector") return eigenvector;
    if (name == "within_module_degree") return within_module_degree;
    if (name == "participation") return participation;
    if (name == "embeddedness") return embeddedness;
    throw std::invalid_argument("unknown measure '" + std::string(name) + "'");
  }
};

struct DegreeVectors {
  std::vector<double> degree;
  std::vector<double> internal;
};

inline DegreeVectors degrees(const SliceGraph& g, const Partition& part) {
  const std::size_t n = g.node_count();
  DegreeVectors out{std::vector<double>(n), std::vector<double>(n)};
  for (NodeId v = 0; v < n; ++v) {
    out.degree[v] = static_cast<double>(g.degree(v));
    std::size_t internal = 0;
    for (NodeId w : g.neighbors(v))
      if (part[w] == part[v]) ++internal;
    out.internal[v] = static_cast<double>(internal);
  }
  return out;
}

/// Fraction of linked neighbor pairs; 0 for degree < 2.
inline std::vector<double> local_transitivity(const SliceGraph& g) {
  const std::size_t n = g.node_count();
  std::vector<double> out(n, 0.0);
  for (NodeId v = 0; v < n; ++v) {
    auto nv = g.neighbors(v);
    const std::size_t d = nv.size();
    if (d < 2) continue;
    // Each neighbor-neighbor link is seen from both of its endpoints.
    std::size_t twice_links = 0;
    for (NodeId w : nv) {
      auto nw = g.neighbors(w);
      std::size_t i = 0, j = 0;
      while (i < nv.size() && j < nw.size()) {
        if (nv[i] < nw[j]) {
          ++i;
        } else if (nw[j] < nv[i]) {
          ++j;
        } else {
          ++twice_links;
          ++i;
          ++j;
        }
      }
    }
    out[v] = static_cast<double>(twice_links / 2) / (static_cast<double>(d * (d - 1)) / 2.0);
  }
  return out;
}

struct PathMetrics {
  std::vector<double> eccentricity;
  std::vector<double> closeness;
  std::vector<double> betweenness;
};

/// Eccentricity, closeness and betweenness from one BFS per source
/// (Brandes dependency accumulation). Unreachable pairs are ignored, so
/// every value is taken within the node's connected component.
inline PathMetrics shortest_path_metrics(const SliceGraph& g) {
  const std::size_t n = g.node_count();
  PathMetrics out{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0),
                  std::vector<double>(n, 0.0)};
  std::vector<long long> dist(n);
  std::vector<double> sigma(n), delta(n);
  std::vector<NodeId> order;
  order.reserve(n);
  std::vector<NodeId> queue(n);

  for (NodeId s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), -1);
    std::fill(sigma.begin(), sigma.end(), 0.0);
    order.clear();
    dist[s] = 0;
    sigma[s] = 1.0;
    std::size_t head = 0, tail = 0;
    queue[tail++] = s;
    long long far = 0, total = 0;
    while (head < tail) {
      NodeId v = queue[head++];
      order.push_back(v);
      far = std::max(far, dist[v]);
      total += dist[v];
      for (NodeId w : g.neighbors(v)) {
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          queue[tail++] = w;
        }
        if (dist[w] == dist[v] + 1) sigma[w] += sigma[v];
      }
    }
    out.eccentricity[s] = static_cast<double>(far);
    out.closeness[s] = total > 0 ? 1.0 / static_cast<double>(total) : 0.0;

    std::fill(delta.begin(), delta.end(), 0.0);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      NodeId w = *it;
      for (NodeId v : g.neighbors(w))
        if (dist[v] == dist[w] - 1) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
      if (w != s) out.betweenness[w] += delta[w];
    }
  }
  // Each unordered pair was accumulated from both endpoints.
  for (auto& b : out.betweenness) b /= 2.0;
  return out;
}

struct EigenvectorResult {
  std::vector<double> values;
  std::size_t iterations = 0;
  bool converged = true;
};

/// Power iteration on A + I from the all-ones vector, normalized to a
/// maximum component of 1. The unit shift has the same dominant
/// eigenvector as A and avoids oscillation on bipartite graphs.
inline EigenvectorResult eigenvector_centrality(const SliceGraph& g, double tol = 1e-9,
                                                std::size_t max_iter = 10000) {
  if (!(tol > 0)) throw std::invalid_argument("eigenvector tolerance must be positive");
  const std::size_t n = g.node_count();
  EigenvectorResult res;
  if (g.edge_count() == 0) {
    res.values.assign(n, 0.0);
    return res;
  }
  std::vector<double> x(n, 1.0), y(n);
  res.converged = false;
  for (res.iterations = 1; res.iterations <= max_iter; ++res.iterations) {
    double peak = 0.0;
    for (NodeId v = 0; v < n; ++v) {
      double acc = x[v];
      for (NodeId w : g.neighbors(v)) acc += x[w];
      y[v] = acc;
      peak = std::max(peak, acc);
    }
    double diff = 0.0;
    for (NodeId v = 0; v < n; ++v) {
      y[v] /= peak;
      diff = std::max(diff, std::abs(y[v] - x[v]));
    }
    x.swap(y);
    if (diff < tol) {
      res.converged = true;
      break;
    }
  }
  // Isolated nodes decay geometrically but never reach 0 exactly.
  for (NodeId v = 0; v < n; ++v)
    if (g.degree(v) == 0) x[v] = 0.0;
  res.values = std::move(x);
  if (!res.converged) res.iterations = max_iter;
  return res;
}

struct CommunityRoles {
  std::vector<double> within_module_degree;
  std::vector<double> participation;
  std::vector<double> embeddedness;
};

/// Within-module degree z-score (population standard deviation, z = 0 when
/// the community's spread is 0), participation coefficient and
/// embeddedness. Degree-0 nodes get participation and embeddedness 0.
inline CommunityRoles community_role_measures(const SliceGraph& g, const Partition& part) {
  const std::size_t n = g.node_count();
  const std::size_t lambda = part.community_count();
  auto deg = degrees(g, part);
  CommunityRoles out{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0),
                     std::vector<double>(n, 0.0)};

  std::vector<double> sum(lambda, 0.0), sum_sq(lambda, 0.0), size(lambda, 0.0);
  for (NodeId v = 0; v < n; ++v) {
    sum[part[v]] += deg.internal[v];
    size[part[v]] += 1.0;
  }
  std::vector<double> mean(lambda, 0.0), sd(lambda, 0.0);
  for (std::size_t c = 0; c < lambda; ++c)
    if (size[c] > 0) mean[c] = sum[c] / size[c];
  for (NodeId v = 0; v < n; ++v) {
    double d = deg.internal[v] - mean[part[v]];
    sum_sq[part[v]] += d * d;
  }
  for (std::size_t c = 0; c < lambda; ++c)
    if (size[c] > 0) sd[c] = std::sqrt(sum_sq[c] / size[c]);

  std::vector<std::size_t> per_comm(lambda, 0);
  std::vector<CommunityId> touched;
  for (NodeId v = 0; v < n; ++v) {
    const CommunityId c = part[v];
    out.within_module_degree[v] = sd[c] > 0 ? (deg.internal[v] - mean[c]) / sd[c] : 0.0;
    const double d = deg.degree[v];
    if (d == 0) continue;
    out.embeddedness[v] = deg.internal[v] / d;
    touched.clear();
    for (NodeId w : g.neighbors(v)) {
      if (per_comm[part[w]]++ == 0) touched.push_back(part[w]);
    }
    std::sort(touched.begin(), touched.end());
    double concentration = 0.0;
    for (CommunityId cc : touched) {
      double f = static_cast<double>(per_comm[cc]) / d;
      concentration += f * f;
      per_comm[cc] = 0;
    }
    out.participation[v] = 1.0 - concentration;
  }
  return out;
}

struct MeasureOptions {
  double eigen_tol = 1e-9;
  std::size_t eigen_max_iter = 10000;
};

inline MeasureTable compute_measures(const SliceGraph& g, const Partition& part,
                                     const MeasureOptions& opt = {}) {
  if (part.node_count() != g.node_count())
    throw ValidationError("partition does not cover every node of slice " +
                          std::to_string(g.slice()));
  MeasureTable t;
  t.slice = g.slice();
  auto deg = degrees(g, part);
  t.degree = std::move(deg.degree);
  t.internal_degree = std::move(deg.internal);
  t.transitivity = local_transitivity(g);
  auto paths = shortest_path_metrics(g);
  t.eccentricity = std::move(paths.eccentricity);
  t.betweenness = std::move(paths.betweenness);
  t.closeness = std::move(paths.closeness);
  auto eig = eigenvector_centrality(g, opt.eigen_tol, opt.eigen_max_iter);
  t.eigenvector = std::move(eig.values);
  t.eigenvector_converged = eig.converged;
  auto roles = community_role_measures(g, part);
  t.within_module_degree = std::move(roles.within_module_degree);
  t.participation = std::move(roles.participation);
  t.embeddedness = std::move(roles.embeddedness);
  return t;
}

inline std::vector<MeasureTable> compute_all_measures(const DynamicAttributedNetwork& net,
                                                      const EvolvingCommunityStructure& comms,
                                                      const MeasureOptions& opt = {}) {
  if (comms.theta() != net.theta())
    throw ValidationError("community structure has " + std::to_string(comms.theta()) +
                          " slices, network has " + std::to_string(net.theta()));
  std::vector<MeasureTable> out;
  out.reserve(net.theta());
  for (std::size_t t = 0; t < net.theta(); ++t)
    out.push_back(compute_measures(net.slices[t], comms.partitions[t], opt));
  return out;
}

inline void write_measures_csv(const std::vector<MeasureTable>& tables,
                               const std::vector<std::string>& labels, const std::string& path) {
  auto out = detail::open_output(path);
  out << "slice,node";
  for (const char* c : MeasureTable::kColumns) out << ',' << c;
  out << '\n';
  for (const auto& t : tables)
    for (NodeId v = 0; v < labels.size(); ++v) {
      out << t.slice << ',' << detail::csv_field(labels[v]);
      for (const char* c : MeasureTable::kColumns) out << ',' << detail::format_real(t.column(c)[v]);
      out << '\n';
    }
}

/// Reads measures.csv back; rows must cover every (slice, node).
inline std::vector<MeasureTable> read_measures_csv(const std::string& path,
                                                   const std::vector<std::string>& labels,
                                                   std::size_t theta) {
  std::unordered_map<std::string, NodeId> ids;
  for (NodeId v = 0; v < labels.size(); ++v) ids.emplace(labels[v], v);
  const std::size_t n = labels.size();
  std::vector<MeasureTable> tables(theta);
  for (std::size_t t = 0; t < theta; ++t) {
    auto& m = tables[t];
    m.slice = static_cast<SliceIndex>(t);
    for (auto* c : {&m.degree, &m.internal_degree, &m.transitivity, &m.eccentricity,
                    &m.betweenness, &m.closeness, &m.eigenvector, &m.within_module_degree,
                    &m.participation, &m.embeddedness})
      c->assign(n, std::numeric_limits<double>::quiet_NaN());
  }
  std::vector<std::string> header{"slice", "node"};
  for (const char* c : MeasureTable::kColumns) header.emplace_back(c);
  detail::read_csv(path, header, [&](const std::vector<std::string>& f, std::size_t line) {
    auto t = detail::parse_int(f[0]);
    auto it = ids.find(f[1]);
    if (!t || *t < 0 || static_cast<std::size_t>(*t) >= theta || it == ids.end())
      throw ValidationError(path + ":" + std::to_string(line) + ": unknown slice or node");
    auto& m = tables[*t];
    std::size_t i = 2;
    for (auto* c : {&m.degree, &m.internal_degree, &m.transitivity, &m.eccentricity,
                    &m.betweenness, &m.closeness, &m.eigenvector, &m.within_module_degree,
                    &m.participation, &m.embeddedness}) {
      auto v = detail::parse_real(f[i++]);
      if (!v) throw ValidationError(path + ":" + std::to_string(line) + ": malformed number");
      (*c)[it->second] = *v;
    }
  });
  for (const auto& m : tables)
    for (double d : m.degree)
      if (std::isnan(d)) throw ValidationError(path + ": missing (slice, node) rows");
  return tables;
}

}  // namespace comseq
