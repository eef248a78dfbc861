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
#include <map>
#include <span>
#include <string>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "comseq/common.hpp"

namespace comseq {

using Edge = std::pair<NodeId, NodeId>;

/// One undirected, unweighted time slice over a fixed node set.
///
/// Edges are normalized to (u, v) with u < v, sorted and deduplicated.
/// Adjacency is kept in CSR form with sorted neighbor lists.
class SliceGraph {
 public:
  SliceGraph() = default;

  SliceGraph(SliceIndex slice, std::size_t n, std::vector<Edge> edges) : slice_(slice), n_(n) {
    for (auto& [u, v] : edges) {
      if (u == v) throw ValidationError("self-loop on node " + std::to_string(u));
      if (u >= n || v >= n) throw ValidationError("edge endpoint out of range");
      if (u > v) std::swap(u, v);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    edges_ = std::move(edges);

    offsets_.assign(n + 1, 0);
    for (auto [u, v] : edges_) {
      ++offsets_[u + 1];
      ++offsets_[v + 1];
    }
    for (std::size_t i = 0; i < n; ++i) offsets_[i + 1] += offsets_[i];
    adj_.resize(offsets_[n]);
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (auto [u, v] : edges_) {
      adj_[fill[u]++] = v;
      adj_[fill[v]++] = u;
    }
    for (std::size_t i = 0; i < n; ++i)
      std::sort(adj_.begin() + offsets_[i], adj_.begin() + offsets_[i + 1]);
  }

  SliceIndex slice() const { return slice_; }
  std::size_t node_count() const { return n_; }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }

  std::span<const NodeId> neighbors(NodeId v) const {
    return {adj_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }
  std::size_t degree(NodeId v) const { return offsets_[v + 1] - offsets_[v]; }

  bool has_edge(NodeId u, NodeId v) const {
    auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
  }

  friend bool operator==(const SliceGraph& a, const SliceGraph& b) {
    return a.slice_ == b.slice_ && a.n_ == b.n_ && a.edges_ == b.edges_;
  }

 private:
  SliceIndex slice_ = 0;
  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_{0};
  std::vector<NodeId> adj_;
};

enum class AttributeKind { Integer, Real, Categorical };

struct AttributeSchema {
  std::vector<std::string> names;
  std::vector<AttributeKind> kinds;
  /// True when at least one cell holds the `NA` sentinel.
  std::vector<bool> sparse;

  std::size_t size() const { return names.size(); }

  std::optional<std::size_t> index_of(std::string_view name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == name) return i;
    return std::nullopt;
  }

  friend bool operator==(const AttributeSchema&, const AttributeSchema&) = default;
};

/// Raw attribute cell. `raw` is the token as read; `number` is set for
/// numeric kinds.
struct AttrValue {
  std::string raw;
  double number = 0.0;
  bool absent = false;

  static AttrValue na() { return {"NA", 0.0, true}; }
  static AttrValue of(long long v) { return {std::to_string(v), static_cast<double>(v), false}; }

  friend bool operator==(const AttrValue& a, const AttrValue& b) {
    return a.raw == b.raw && a.absent == b.absent;
  }
};

/// Fixed node set, θ slices, and a (slice, node, attribute) value table.
/// Immutable once built.
struct DynamicAttributedNetwork {
  std::vector<std::string> labels;
  std::vector<SliceGraph> slices;
  AttributeSchema schema;
  /// Row-major (slice, node, attribute).
  std::vector<AttrValue> values;

  std::size_t n() const { return labels.size(); }
  std::size_t theta() const { return slices.size(); }

  const AttrValue& value(SliceIndex t, NodeId v, std::size_t a) const {
    return values[(static_cast<std::size_t>(t) * n() + v) * schema.size() + a];
  }

  friend bool operator==(const DynamicAttributedNetwork&, const DynamicAttributedNetwork&) = default;
};

namespace detail {

inline void infer_kinds(DynamicAttributedNetwork& net) {
  const std::size_t k = net.schema.size();
  net.schema.kinds.assign(k, AttributeKind::Integer);
  net.schema.sparse.assign(k, false);
  std::vector<bool> all_int(k, true), all_real(k, true);
  for (std::size_t i = 0; i < net.values.size(); ++i) {
    const std::size_t a = i % k;
    auto& cell = net.values[i];
    if (cell.raw == "NA") {
      cell.absent = true;
      net.schema.sparse[a] = true;
      continue;
    }
    if (!parse_int(cell.raw)) all_int[a] = false;
    if (auto r = parse_real(cell.raw)) {
      cell.number = *r;
    } else {
      all_real[a] = false;
    }
  }
  for (std::size_t a = 0; a < k; ++a)
    net.schema.kinds[a] = all_int[a]    ? AttributeKind::Integer
                          : all_real[a] ? AttributeKind::Real
                                        : AttributeKind::Categorical;
}

}  // namespace detail

/// Builds a validated network from in-memory parts. `values` must hold
/// theta * n * |schema| cells in (slice, node, attribute) order; kinds and
/// sparsity are inferred from the raw tokens.
inline DynamicAttributedNetwork make_network(std::vector<std::string> labels,
                                             std::vector<std::vector<Edge>> edges,
                                             std::vector<std::string> attribute_names,
                                             std::vector<AttrValue> values) {
  DynamicAttributedNetwork net;
  net.labels = std::move(labels);
  const std::size_t n = net.labels.size();
  for (std::size_t t = 0; t < edges.size(); ++t)
    net.slices.emplace_back(static_cast<SliceIndex>(t), n, std::move(edges[t]));
  net.schema.names = std::move(attribute_names);
  {
    auto sorted = net.schema.names;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw ValidationError("duplicate attribute name");
  }
  if (values.size() != net.theta() * n * net.schema.size())
    throw ValidationError("attribute table size does not match theta * n * |A|");
  net.values = std::move(values);
  detail::infer_kinds(net);
  return net;
}

/// Loads `edges.csv` (slice,source,target) and `attrs.csv`
/// (slice,node,attribute,value). Node ids follow first appearance in the
/// attribute file, then in the edge file.
inline DynamicAttributedNetwork load_network(const std::string& edges_path,
                                             const std::string& attrs_path) {
  std::vector<std::string> labels;
  std::unordered_map<std::string, NodeId> ids;
  std::vector<std::string> attr_names;
  std::unordered_map<std::string, std::size_t> attr_ids;
  struct Cell {
    SliceIndex t;
    NodeId v;
    std::size_t a;
    std::string raw;
    std::size_t line;
  };
  std::vector<Cell> cells;
  std::size_t theta = 0;

  auto slice_of = [&](const std::string& s, const std::string& path, std::size_t line) {
    auto t = detail::parse_int(s);
    if (!t || *t < 0)
      throw ValidationError(path + ":" + std::to_string(line) + ": malformed slice '" + s + "'");
    theta = std::max<std::size_t>(theta, static_cast<std::size_t>(*t) + 1);
    return static_cast<SliceIndex>(*t);
  };

  detail::read_csv(attrs_path, {"slice", "node", "attribute", "value"},
                   [&](const std::vector<std::string>& f, std::size_t line) {
                     SliceIndex t = slice_of(f[0], attrs_path, line);
                     if (f[1].empty() || f[2].empty() || f[3].empty())
                       throw ValidationError(attrs_path + ":" + std::to_string(line) +
                                             ": empty field");
                     auto [it, fresh] = ids.try_emplace(f[1], static_cast<NodeId>(labels.size()));
                     if (fresh) labels.push_back(f[1]);
                     auto [ait, afresh] = attr_ids.try_emplace(f[2], attr_names.size());
                     if (afresh) attr_names.push_back(f[2]);
                     cells.push_back({t, it->second, ait->second, f[3], line});
                   });
  const bool has_attributes = !attr_names.empty();

  std::vector<std::tuple<SliceIndex, std::string, std::string, std::size_t>> raw_edges;
  detail::read_csv(edges_path, {"slice", "source", "target"},
                   [&](const std::vector<std::string>& f, std::size_t line) {
                     SliceIndex t = slice_of(f[0], edges_path, line);
                     if (f[1].empty() || f[2].empty())
                       throw ValidationError(edges_path + ":" + std::to_string(line) +
                                             ": empty node label");
                     if (f[1] == f[2])
                       throw ValidationError(edges_path + ":" + std::to_string(line) +
                                             ": self-loop on '" + f[1] + "'");
                     for (const auto* lab : {&f[1], &f[2]}) {
                       if (ids.count(*lab)) continue;
                       if (has_attributes)
                         throw ValidationError(edges_path + ":" + std::to_string(line) +
                                               ": node '" + *lab + "' has no attribute rows");
                       ids.emplace(*lab, static_cast<NodeId>(labels.size()));
                       labels.push_back(*lab);
                     }
                     raw_edges.emplace_back(t, f[1], f[2], line);
                   });

  const std::size_t n = labels.size();
  const std::size_t k = attr_names.size();
  std::vector<AttrValue> values(theta * n * k);
  std::vector<bool> filled(values.size(), false);
  for (auto& c : cells) {
    std::size_t idx = (static_cast<std::size_t>(c.t) * n + c.v) * k + c.a;
    if (filled[idx])
      throw ValidationError(attrs_path + ":" + std::to_string(c.line) + ": duplicate cell (" +
                            std::to_string(c.t) + "," + labels[c.v] + "," + attr_names[c.a] +
                            ")");
    filled[idx] = true;
    values[idx].raw = std::move(c.raw);
  }
  for (std::size_t idx = 0; idx < filled.size(); ++idx) {
    if (filled[idx]) continue;
    std::size_t a = idx % k, v = (idx / k) % n, t = idx / k / n;
    throw ValidationError(attrs_path + ": missing cell (" + std::to_string(t) + "," + labels[v] +
                          "," + attr_names[a] + "); use NA for absent values");
  }

  std::vector<std::vector<Edge>> edges(theta);
  for (auto& [t, a, b, line] : raw_edges) edges[t].emplace_back(ids.at(a), ids.at(b));
  return make_network(std::move(labels), std::move(edges), std::move(attr_names),
                      std::move(values));
}

inline void save_network(const DynamicAttributedNetwork& net, const std::string& edges_path,
                         const std::string& attrs_path) {
  auto eo = detail::open_output(edges_path);
  eo << "slice,source,target\n";
  for (const auto& g : net.slices)
    for (auto [u, v] : g.edges())
      eo << g.slice() << ',' << detail::csv_field(net.labels[u]) << ','
         << detail::csv_field(net.labels[v]) << '\n';
  auto ao = detail::open_output(attrs_path);
  ao << "slice,node,attribute,value\n";
  for (std::size_t t = 0; t < net.theta(); ++t)
    for (NodeId v = 0; v < net.n(); ++v)
      for (std::size_t a = 0; a < net.schema.size(); ++a)
        ao << t << ',' << detail::csv_field(net.labels[v]) << ','
           << detail::csv_field(net.schema.names[a]) << ','
           << detail::csv_field(net.value(static_cast<SliceIndex>(t), v, a).raw) << '\n';
}

/// Writes the dense index -> original label table.
inline void write_node_map(const DynamicAttributedNetwork& net, const std::string& path) {
  auto out = detail::open_output(path);
  out << "index,label\n";
  for (NodeId v = 0; v < net.n(); ++v) out << v << ',' << detail::csv_field(net.labels[v]) << '\n';
}

/// Drops nodes that have degree 0 in every slice; surviving nodes keep
/// their relative order.
inline DynamicAttributedNetwork remove_isolates(const DynamicAttributedNetwork& net) {
  const std::size_t n = net.n(), k = net.schema.size();
  std::vector<NodeId> remap(n, std::numeric_limits<NodeId>::max());
  std::vector<NodeId> kept;
  for (NodeId v = 0; v < n; ++v) {
    bool connected = std::any_of(net.slices.begin(), net.slices.end(),
                                 [v](const SliceGraph& g) { return g.degree(v) > 0; });
    if (connected) {
      remap[v] = static_cast<NodeId>(kept.size());
      kept.push_back(v);
    }
  }
  if (kept.size() == n) return net;

  DynamicAttributedNetwork out;
  out.schema = net.schema;
  for (NodeId v : kept) out.labels.push_back(net.labels[v]);
  for (const auto& g : net.slices) {
    std::vector<Edge> edges;
    edges.reserve(g.edge_count());
    for (auto [u, v] : g.edges()) edges.emplace_back(remap[u], remap[v]);
    out.slices.emplace_back(g.slice(), kept.size(), std::move(edges));
  }
  out.values.reserve(net.theta() * kept.size() * k);
  for (std::size_t t = 0; t < net.theta(); ++t)
    for (NodeId v : kept)
      for (std::size_t a = 0; a < k; ++a)
        out.values.push_back(net.value(static_cast<SliceIndex>(t), v, a));
  return out;
}

}  // namespace comseq
