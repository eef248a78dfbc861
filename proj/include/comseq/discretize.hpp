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
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "comseq/measures.hpp"
#include "comseq/network.hpp"

namespace comseq {

/// Row-major set of equal-dimension real points.
struct PointSet {
  std::size_t dim = 0;
  std::vector<double> data;

  std::size_t size() const { return dim == 0 ? 0 : data.size() / dim; }
  std::span<const double> operator[](std::size_t i) const { return {data.data() + i * dim, dim}; }
  void push(std::span<const double> p) { data.insert(data.end(), p.begin(), p.end()); }

  static PointSet from_1d(std::vector<double> xs) { return {1, std::move(xs)}; }
};

inline double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

inline std::size_t count_distinct(const PointSet& pts) {
  std::vector<std::size_t> idx(pts.size());
  std::iota(idx.begin(), idx.end(), 0);
  auto less = [&](std::size_t a, std::size_t b) {
    auto pa = pts[a], pb = pts[b];
    return std::lexicographical_compare(pa.begin(), pa.end(), pb.begin(), pb.end());
  };
  std::sort(idx.begin(), idx.end(), less);
  std::size_t distinct = 0;
  for (std::size_t i = 0; i < idx.size(); ++i)
    if (i == 0 || less(idx[i - 1], idx[i])) ++distinct;
  return distinct;
}

struct KMeansResult {
  std::size_t k = 0;
  PointSet centroids;
  std::vector<std::size_t> labels;
  double sse = 0.0;
  std::vector<std::string> warnings;
};

/// Lloyd's algorithm from a seeded k-means++ start; stops when assignments
/// are stable or after `max_iter` rounds. Clusters are renumbered by
/// lexicographic centroid order so ids are reproducible and ordered.
inline KMeansResult kmeans(const PointSet& pts, std::size_t k, std::uint64_t seed,
                           std::size_t max_iter = 300) {
  if (k < 1) throw std::invalid_argument("kmeans: k must be >= 1");
  if (pts.size() < k) throw std::invalid_argument("kmeans: fewer points than clusters");
  KMeansResult res;
  const std::size_t distinct = count_distinct(pts);
  if (distinct < k) {
    res.warnings.push_back("kmeans: only " + std::to_string(distinct) +
                           " distinct points, k reduced from " + std::to_string(k));
    k = distinct;
  }
  const std::size_t n = pts.size(), dim = pts.dim;
  std::mt19937_64 rng(seed);

  PointSet cent{dim, {}};
  std::vector<double> d2(n, std::numeric_limits<double>::infinity());
  cent.push(pts[std::uniform_int_distribution<std::size_t>(0, n - 1)(rng)]);
  while (cent.size() < k) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], squared_distance(pts[i], cent[cent.size() - 1]));
      total += d2[i];
    }
    double r = std::uniform_real_distribution<double>(0.0, total)(rng);
    std::size_t pick = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (d2[i] <= 0) continue;
      pick = i;
      r -= d2[i];
      if (r <= 0) break;
    }
    cent.push(pts[pick]);
  }

  std::vector<std::size_t> lab(n, k);
  std::vector<double> sum(k * dim);
  std::vector<std::size_t> cnt(k);
  for (std::size_t iter = 0; iter < max_iter; ++iter) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t best = 0;
      double bd = squared_distance(pts[i], cent[0]);
      for (std::size_t c = 1; c < k; ++c) {
        double d = squared_distance(pts[i], cent[c]);
        if (d < bd) {
          bd = d;
          best = c;
        }
      }
      if (lab[i] != best) {
        lab[i] = best;
        changed = true;
      }
    }
    if (!changed) break;
    std::fill(sum.begin(), sum.end(), 0.0);
    std::fill(cnt.begin(), cnt.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      ++cnt[lab[i]];
      for (std::size_t j = 0; j < dim; ++j) sum[lab[i] * dim + j] += pts[i][j];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (cnt[c] == 0) {
        // Re-seed an emptied cluster at the point farthest from its centroid.
        std::size_t far = 0;
        double fd = -1;
        for (std::size_t i = 0; i < n; ++i) {
          double d = squared_distance(pts[i], cent[lab[i]]);
          if (d > fd) {
            fd = d;
            far = i;
          }
        }
        std::copy(pts[far].begin(), pts[far].end(), cent.data.begin() + c * dim);
        continue;
      }
      for (std::size_t j = 0; j < dim; ++j)
        cent.data[c * dim + j] = sum[c * dim + j] / static_cast<double>(cnt[c]);
    }
  }

  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    auto pa = cent[a], pb = cent[b];
    return std::lexicographical_compare(pa.begin(), pa.end(), pb.begin(), pb.end());
  });
  std::vector<std::size_t> rank(k);
  for (std::size_t r = 0; r < k; ++r) rank[order[r]] = r;
  res.k = k;
  res.centroids.dim = dim;
  for (std::size_t r = 0; r < k; ++r) res.centroids.push(cent[order[r]]);
  res.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    res.labels[i] = rank[lab[i]];
    res.sse += squared_distance(pts[i], res.centroids[res.labels[i]]);
  }
  return res;
}

/// Mean silhouette width with Euclidean distance. Points alone in their
/// cluster contribute 0.
inline double silhouette(const PointSet& pts, const std::vector<std::size_t>& labels) {
  const std::size_t n = pts.size();
  if (labels.size() != n) throw std::invalid_argument("silhouette: label count mismatch");
  std::size_t k = 0;
  for (auto l : labels) k = std::max(k, l + 1);
  std::vector<std::size_t> size(k, 0);
  for (auto l : labels) ++size[l];
  std::size_t nonempty = std::count_if(size.begin(), size.end(), [](auto s) { return s > 0; });
  if (nonempty < 2) throw std::invalid_argument("silhouette needs at least two clusters");

  std::vector<double> dsum(k);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (size[labels[i]] == 1) continue;
    std::fill(dsum.begin(), dsum.end(), 0.0);
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) dsum[labels[j]] += std::sqrt(squared_distance(pts[i], pts[j]));
    const double a = dsum[labels[i]] / static_cast<double>(size[labels[i]] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < k; ++c)
      if (c != labels[i] && size[c] > 0) b = std::min(b, dsum[c] / static_cast<double>(size[c]));
    const double m = std::max(a, b);
    total += m > 0 ? (b - a) / m : 0.0;
  }
  return total / static_cast<double>(n);
}

enum class MeasureGroup { Local, Community, Centrality };

inline const char* group_name(MeasureGroup g) {
  switch (g) {
    case MeasureGroup::Local: return "local";
    case MeasureGroup::Community: return "community";
    case MeasureGroup::Centrality: return "centrality";
  }
  return "?";
}

inline std::vector<std::string> group_columns(MeasureGroup g) {
  switch (g) {
    case MeasureGroup::Local: return {"degree", "transitivity"};
    case MeasureGroup::Community: return {"embeddedness", "within_module_degree", "participation"};
    case MeasureGroup::Centrality: return {"eccentricity", "betweenness", "closeness", "eigenvector"};
  }
  return {};
}

inline constexpr MeasureGroup kAllGroups[] = {MeasureGroup::Local, MeasureGroup::Community,
                                              MeasureGroup::Centrality};

inline std::string measure_display_name(std::string_view column) {
  if (column == "within_module_degree") return "within module degree";
  if (column == "participation") return "participation coeff.";
  return std::string(column);
}

struct ClusterLabeling {
  MeasureGroup group = MeasureGroup::Local;
  std::size_t k = 0;
  std::vector<std::string> columns;
  /// Unscaled centroid coordinates, one row per cluster.
  std::vector<std::vector<double>> centroids;
  std::vector<std::string> labels;
  double silhouette = 0.0;
  std::vector<std::string> warnings;
};

struct GroupClustering {
  ClusterLabeling labeling;
  /// (slice, node) row-major cluster ids.
  std::vector<std::size_t> values;
};

struct ClusterOptions {
  std::size_t k_lo = 2;
  std::size_t k_hi = 8;
  std::uint64_t seed = 42;
  /// Silhouette is quadratic; larger pools are scored on a seeded sample.
  std::size_t silhouette_sample = 2000;
};

namespace detail {

// "high <col>" / "low <col>" when a centroid sits in the top / bottom tercile
// of the centroids along that column.
inline std::vector<std::string> tercile_labels(const PointSet& scaled,
                                               const std::vector<std::string>& columns,
                                               MeasureGroup group) {
  const std::size_t k = scaled.size();
  std::vector<std::string> labels(k);
  for (std::size_t c = 0; c < k; ++c) {
    std::string lab;
    for (std::size_t j = 0; j < columns.size(); ++j) {
      double lo = scaled[0][j], hi = scaled[0][j];
      std::size_t below = 0;
      for (std::size_t o = 0; o < k; ++o) {
        lo = std::min(lo, scaled[o][j]);
        hi = std::max(hi, scaled[o][j]);
        if (scaled[o][j] < scaled[c][j]) ++below;
      }
      if (k < 2 || hi - lo < 1e-9) continue;
      const double pos = static_cast<double>(below) / static_cast<double>(k - 1);
      const char* tag = pos >= 2.0 / 3.0 ? "high " : pos <= 1.0 / 3.0 ? "low " : nullptr;
      if (!tag) continue;
      if (!lab.empty()) lab += ", ";
      lab += tag + measure_display_name(columns[j]);
    }
    labels[c] = lab.empty() ? "average " + std::string(group_name(group)) : lab;
  }
  std::map<std::string, std::size_t> uses;
  for (auto& l : labels) ++uses[l];
  for (std::size_t c = 0; c < k; ++c)
    if (uses[labels[c]] > 1) labels[c] += " #" + std::to_string(c);
  return labels;
}

}  // namespace detail

/// Pools every (slice, node) row of the group's columns, min-max scales
/// each column, and keeps the k in range with the best mean silhouette.
inline GroupClustering cluster_measure_group(const std::vector<MeasureTable>& tables,
                                             MeasureGroup group, const ClusterOptions& opt = {}) {
  if (opt.k_lo < 2 || opt.k_hi > 10 || opt.k_lo > opt.k_hi)
    throw ValidationError("k range must lie within [2, 10]");
  const auto columns = group_columns(group);
  const std::size_t dim = columns.size();
  PointSet raw{dim, {}};
  for (const auto& t : tables) {
    const std::size_t n = t.degree.size();
    for (NodeId v = 0; v < n; ++v)
      for (const auto& c : columns) raw.data.push_back(t.column(c)[v]);
  }
  const std::size_t total = raw.size();
  std::vector<double> lo(dim, std::numeric_limits<double>::infinity()),
      hi(dim, -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < total; ++i)
    for (std::size_t j = 0; j < dim; ++j) {
      lo[j] = std::min(lo[j], raw[i][j]);
      hi[j] = std::max(hi[j], raw[i][j]);
    }
  PointSet scaled{dim, std::vector<double>(raw.data.size(), 0.0)};
  for (std::size_t i = 0; i < total; ++i)
    for (std::size_t j = 0; j < dim; ++j)
      if (hi[j] > lo[j]) scaled.data[i * dim + j] = (raw[i][j] - lo[j]) / (hi[j] - lo[j]);

  GroupClustering out;
  auto& lab = out.labeling;
  lab.group = group;
  lab.columns = columns;
  const std::size_t distinct = total == 0 ? 0 : count_distinct(scaled);

  KMeansResult best;
  if (distinct < 2) {
    lab.warnings.push_back(std::string(group_name(group)) +
                           ": fewer than two distinct rows, using a single cluster");
    if (total > 0) best = kmeans(scaled, 1, opt.seed);
    best.k = 1;
  } else {
    std::vector<std::size_t> sample(total);
    std::iota(sample.begin(), sample.end(), 0);
    if (total > opt.silhouette_sample) {
      std::mt19937_64 rng(opt.seed ^ 0x9e3779b97f4a7c15ULL);
      std::shuffle(sample.begin(), sample.end(), rng);
      sample.resize(opt.silhouette_sample);
      std::sort(sample.begin(), sample.end());
    }
    PointSet sub{dim, {}};
    for (auto i : sample) sub.push(scaled[i]);

    const std::size_t k_hi = std::min(opt.k_hi, distinct);
    const std::size_t k_lo = std::min(opt.k_lo, k_hi);
    double best_score = -std::numeric_limits<double>::infinity();
    for (std::size_t k = k_lo; k <= k_hi; ++k) {
      auto km = kmeans(scaled, k, opt.seed);
      std::vector<std::size_t> sub_labels;
      for (auto i : sample) sub_labels.push_back(km.labels[i]);
      std::set<std::size_t> used(sub_labels.begin(), sub_labels.end());
      if (used.size() < 2) continue;
      const double s = silhouette(sub, sub_labels);
      if (s > best_score + 1e-12) {
        best_score = s;
        best = std::move(km);
      }
    }
    lab.silhouette = best_score;
  }

  lab.k = best.k;
  lab.labels = detail::tercile_labels(best.centroids, columns, group);
  for (std::size_t c = 0; c < best.centroids.size(); ++c) {
    std::vector<double> row(dim);
    for (std::size_t j = 0; j < dim; ++j)
      row[j] = lo[j] + best.centroids[c][j] * (hi[j] > lo[j] ? hi[j] - lo[j] : 0.0);
    lab.centroids.push_back(std::move(row));
  }
  for (auto& w : best.warnings) lab.warnings.push_back(w);
  out.values = best.labels;
  if (out.values.empty()) out.values.assign(total, 0);
  return out;
}

/// Cut points of a numeric attribute. Intervals are [b0;b1], ]b1;b2], ...
/// The last bound may be +inf (open interval) and the first -inf.
struct BinningRule {
  std::string attribute;
  std::vector<double> boundaries;

  void validate() const {
    if (boundaries.size() < 2)
      throw ValidationError("binning rule for '" + attribute + "' needs at least two bounds");
    for (std::size_t i = 1; i < boundaries.size(); ++i)
      if (!(boundaries[i] > boundaries[i - 1]))
        throw ValidationError("binning rule for '" + attribute +
                              "' must be strictly increasing");
  }

  std::size_t bin_count() const { return boundaries.size() - 1; }

  std::size_t bin(double x) const {
    if (x < boundaries.front() || x > boundaries.back())
      throw ValidationError("value " + detail::format_real(x) + " of '" + attribute +
                            "' lies outside its binning range");
    for (std::size_t i = 1; i < boundaries.size(); ++i)
      if (x <= boundaries[i]) return i - 1;
    return bin_count() - 1;
  }

  std::string bin_label(std::size_t i) const {
    const double a = boundaries[i], b = boundaries[i + 1];
    std::string open = (i == 0 && std::isfinite(a)) ? "[" : "]";
    std::string close = std::isfinite(b) ? "]" : "[";
    return open + detail::format_real(a) + ";" + detail::format_real(b) + close;
  }
};

/// bins.json: {"attr": [b0, b1, ..., "inf"], ...}
inline std::vector<BinningRule> read_bins_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(path + ": " + e.what());
  }
  if (!j.is_object()) throw ValidationError(path + ": expected an object");
  std::vector<BinningRule> rules;
  for (auto& [name, bounds] : j.items()) {
    BinningRule r{name, {}};
    if (!bounds.is_array()) throw ValidationError(path + ": '" + name + "' must map to a list");
    for (auto& b : bounds) {
      if (b.is_number()) {
        r.boundaries.push_back(b.get<double>());
      } else if (b.is_string() && (b == "inf" || b == "+inf")) {
        r.boundaries.push_back(kInfinity);
      } else if (b.is_string() && b == "-inf") {
        r.boundaries.push_back(-kInfinity);
      } else {
        throw ValidationError(path + ": bad boundary in '" + name + "'");
      }
    }
    r.validate();
    rules.push_back(std::move(r));
  }
  return rules;
}

enum class DescriptorKind { Cluster, Binned, Categorical };

struct DescriptorDomain {
  std::string name;
  DescriptorKind kind = DescriptorKind::Categorical;
  std::vector<std::string> values;

  /// Human-readable form of one item, e.g. "a1=2" or a cluster label.
  std::string render(std::size_t value) const {
    return kind == DescriptorKind::Cluster ? values[value] : name + "=" + values[value];
  }
};

/// One value id per (slice, node, descriptor); kAbsent produces no item.
struct DiscreteDescriptorTable {
  static constexpr std::int32_t kAbsent = -1;

  std::size_t n = 0;
  std::size_t theta = 0;
  std::vector<DescriptorDomain> descriptors;
  std::vector<std::int32_t> cells;

  std::int32_t at(std::size_t t, NodeId v, std::size_t d) const {
    return cells[(t * n + v) * descriptors.size() + d];
  }

  friend bool operator==(const DiscreteDescriptorTable& a, const DiscreteDescriptorTable& b) {
    if (a.n != b.n || a.theta != b.theta || a.cells != b.cells) return false;
    if (a.descriptors.size() != b.descriptors.size()) return false;
    for (std::size_t i = 0; i < a.descriptors.size(); ++i)
      if (a.descriptors[i].name != b.descriptors[i].name ||
          a.descriptors[i].values != b.descriptors[i].values)
        return false;
    return true;
  }
};

struct DiscreteColumn {
  DescriptorDomain domain;
  /// (slice, node) row-major.
  std::vector<std::int32_t> values;
};

/// Maps each attribute to value ids: binned through its rule when one is
/// given, otherwise by distinct value (integer and categorical attributes
/// only). `NA` maps to kAbsent.
inline std::vector<DiscreteColumn> bin_attributes(const DynamicAttributedNetwork& net,
                                                  const std::vector<BinningRule>& rules) {
  std::vector<DiscreteColumn> out;
  for (const auto& r : rules) {
    r.validate();
    if (!net.schema.index_of(r.attribute))
      throw ValidationError("binning rule for unknown attribute '" + r.attribute + "'");
  }
  const std::size_t n = net.n(), theta = net.theta();
  for (std::size_t a = 0; a < net.schema.size(); ++a) {
    DiscreteColumn col;
    col.domain.name = net.schema.names[a];
    col.values.assign(theta * n, DiscreteDescriptorTable::kAbsent);
    auto rule = std::find_if(rules.begin(), rules.end(),
                             [&](const BinningRule& r) { return r.attribute == col.domain.name; });
    const auto kind = net.schema.kinds[a];
    if (rule != rules.end()) {
      if (kind == AttributeKind::Categorical)
        throw ValidationError("attribute '" + col.domain.name + "' is categorical, cannot bin");
      col.domain.kind = DescriptorKind::Binned;
      for (std::size_t i = 0; i < rule->bin_count(); ++i)
        col.domain.values.push_back(rule->bin_label(i));
      for (std::size_t t = 0; t < theta; ++t)
        for (NodeId v = 0; v < n; ++v) {
          const auto& cell = net.value(static_cast<SliceIndex>(t), v, a);
          if (!cell.absent)
            col.values[t * n + v] = static_cast<std::int32_t>(rule->bin(cell.number));
        }
    } else {
      if (kind == AttributeKind::Real)
        throw ValidationError("real-valued attribute '" + col.domain.name +
                              "' needs a binning rule");
      col.domain.kind = DescriptorKind::Categorical;
      std::vector<std::string> tokens;
      for (std::size_t i = a; i < net.values.size(); i += net.schema.size())
        if (!net.values[i].absent) tokens.push_back(net.values[i].raw);
      std::sort(tokens.begin(), tokens.end(), [&](const std::string& x, const std::string& y) {
        if (kind == AttributeKind::Integer) return *detail::parse_int(x) < *detail::parse_int(y);
        return x < y;
      });
      tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
      std::unordered_map<std::string, std::int32_t> ids;
      for (std::size_t i = 0; i < tokens.size(); ++i)
        ids.emplace(tokens[i], static_cast<std::int32_t>(i));
      col.domain.values = std::move(tokens);
      for (std::size_t t = 0; t < theta; ++t)
        for (NodeId v = 0; v < n; ++v) {
          const auto& cell = net.value(static_cast<SliceIndex>(t), v, a);
          if (!cell.absent) col.values[t * n + v] = ids.at(cell.raw);
        }
    }
    out.push_back(std::move(col));
  }
  return out;
}

/// How topological measures enter the descriptor table.
enum class TopologyMode {
  Clustered,  ///< three clustered measure groups
  Degree,     ///< raw degree as a categorical descriptor "deg"
  None        ///< attributes only
};

struct DescriptorBuild {
  DiscreteDescriptorTable table;
  std::vector<ClusterLabeling> clusters;
  std::vector<std::string> warnings;
};

inline DescriptorBuild build_descriptor_table(const DynamicAttributedNetwork& net,
                                              const std::vector<MeasureTable>& measures,
                                              TopologyMode mode,
                                              const std::vector<BinningRule>& rules,
                                              const ClusterOptions& opt = {}) {
  const std::size_t n = net.n(), theta = net.theta();
  std::vector<DiscreteColumn> columns;
  DescriptorBuild out;
  if (mode != TopologyMode::None && measures.size() != theta)
    throw ValidationError("measure tables do not cover every slice");
  if (mode == TopologyMode::Clustered) {
    for (auto g : kAllGroups) {
      auto gc = cluster_measure_group(measures, g, opt);
      DiscreteColumn col;
      col.domain = {group_name(g), DescriptorKind::Cluster, gc.labeling.labels};
      for (auto v : gc.values) col.values.push_back(static_cast<std::int32_t>(v));
      for (auto& w : gc.labeling.warnings) out.warnings.push_back(w);
      out.clusters.push_back(std::move(gc.labeling));
      columns.push_back(std::move(col));
    }
  } else if (mode == TopologyMode::Degree) {
    DiscreteColumn col;
    col.domain = {"deg", DescriptorKind::Categorical, {}};
    std::vector<long long> seen;
    for (const auto& m : measures)
      for (double d : m.degree) seen.push_back(static_cast<long long>(d));
    std::sort(seen.begin(), seen.end());
    seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
    for (auto d : seen) col.domain.values.push_back(std::to_string(d));
    for (const auto& m : measures)
      for (double d : m.degree)
        col.values.push_back(static_cast<std::int32_t>(
            std::lower_bound(seen.begin(), seen.end(), static_cast<long long>(d)) - seen.begin()));
    columns.push_back(std::move(col));
  }
  for (auto& c : bin_attributes(net, rules)) columns.push_back(std::move(c));

  auto& tab = out.table;
  tab.n = n;
  tab.theta = theta;
  const std::size_t k = columns.size();
  tab.cells.assign(theta * n * k, DiscreteDescriptorTable::kAbsent);
  for (std::size_t d = 0; d < k; ++d) {
    for (std::size_t r = 0; r < theta * n; ++r) tab.cells[r * k + d] = columns[d].values[r];
    tab.descriptors.push_back(std::move(columns[d].domain));
  }
  return out;
}

inline const char* kind_name(DescriptorKind k) {
  switch (k) {
    case DescriptorKind::Cluster: return "cluster";
    case DescriptorKind::Binned: return "binned";
    case DescriptorKind::Categorical: return "categorical";
  }
  return "?";
}

inline DescriptorKind parse_kind(const std::string& s) {
  if (s == "cluster") return DescriptorKind::Cluster;
  if (s == "binned") return DescriptorKind::Binned;
  if (s == "categorical") return DescriptorKind::Categorical;
  throw ValidationError("unknown descriptor kind '" + s + "'");
}

inline nlohmann::json descriptors_to_json(const std::vector<DescriptorDomain>& ds) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& d : ds)
    arr.push_back({{"name", d.name}, {"kind", kind_name(d.kind)}, {"values", d.values}});
  return arr;
}

inline std::vector<DescriptorDomain> descriptors_from_json(const nlohmann::json& arr) {
  std::vector<DescriptorDomain> out;
  for (const auto& d : arr)
    out.push_back({d.at("name").get<std::string>(), parse_kind(d.at("kind").get<std::string>()),
                   d.at("values").get<std::vector<std::string>>()});
  return out;
}

inline nlohmann::json clusters_to_json(const std::vector<ClusterLabeling>& cs) {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& c : cs)
    out[group_name(c.group)] = {{"k", c.k},
                                {"columns", c.columns},
                                {"centroids", c.centroids},
                                {"labels", c.labels},
                                {"silhouette", c.silhouette}};
  return out;
}

/// discrete.csv (slice,node,descriptor,value) plus descriptors.json.
inline void write_discrete(const DiscreteDescriptorTable& tab,
                           const std::vector<std::string>& labels, const std::string& csv_path,
                           const std::string& json_path) {
  auto out = detail::open_output(csv_path);
  out << "slice,node,descriptor,value\n";
  const std::size_t k = tab.descriptors.size();
  for (std::size_t t = 0; t < tab.theta; ++t)
    for (NodeId v = 0; v < tab.n; ++v)
      for (std::size_t d = 0; d < k; ++d) {
        auto val = tab.at(t, v, d);
        out << t << ',' << detail::csv_field(labels[v]) << ','
            << detail::csv_field(tab.descriptors[d].name) << ','
            << (val == DiscreteDescriptorTable::kAbsent
                    ? std::string("NA")
                    : detail::csv_field(tab.descriptors[d].values[val]))
            << '\n';
      }
  auto jo = detail::open_output(json_path);
  jo << nlohmann::json{{"n", tab.n}, {"theta", tab.theta},
                       {"descriptors", descriptors_to_json(tab.descriptors)}}
            .dump(2)
     << '\n';
}

inline nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

inline DiscreteDescriptorTable read_discrete(const std::string& csv_path,
                                             const std::string& json_path,
                                             const std::vector<std::string>& labels) {
  auto j = read_json_file(json_path);
  DiscreteDescriptorTable tab;
  try {
    tab.n = j.at("n").get<std::size_t>();
    tab.theta = j.at("theta").get<std::size_t>();
    tab.descriptors = descriptors_from_json(j.at("descriptors"));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(json_path + ": " + e.what());
  }
  if (tab.n != labels.size()) throw ValidationError(json_path + ": node count mismatch");
  std::unordered_map<std::string, NodeId> ids;
  for (NodeId v = 0; v < labels.size(); ++v) ids.emplace(labels[v], v);
  std::unordered_map<std::string, std::size_t> desc_ids;
  std::vector<std::unordered_map<std::string, std::int32_t>> value_ids(tab.descriptors.size());
  for (std::size_t d = 0; d < tab.descriptors.size(); ++d) {
    desc_ids.emplace(tab.descriptors[d].name, d);
    for (std::size_t i = 0; i < tab.descriptors[d].values.size(); ++i)
      value_ids[d].emplace(tab.descriptors[d].values[i], static_cast<std::int32_t>(i));
  }
  const std::size_t k = tab.descriptors.size();
  tab.cells.assign(tab.theta * tab.n * k, DiscreteDescriptorTable::kAbsent);
  std::vector<bool> seen(tab.cells.size(), false);
  detail::read_csv(csv_path, {"slice", "node", "descriptor", "value"},
                   [&](const std::vector<std::string>& f, std::size_t line) {
                     auto where = csv_path + ":" + std::to_string(line) + ": ";
                     auto t = detail::parse_int(f[0]);
                     auto v = ids.find(f[1]);
                     auto d = desc_ids.find(f[2]);
                     if (!t || *t < 0 || static_cast<std::size_t>(*t) >= tab.theta ||
                         v == ids.end() || d == desc_ids.end())
                       throw ValidationError(where + "unknown slice, node or descriptor");
                     std::size_t idx = (*t * tab.n + v->second) * k + d->second;
                     seen[idx] = true;
                     if (f[3] == "NA") return;
                     auto val = value_ids[d->second].find(f[3]);
                     if (val == value_ids[d->second].end())
                       throw ValidationError(where + "unknown value '" + f[3] + "'");
                     tab.cells[idx] = val->second;
                   });
  if (std::find(seen.begin(), seen.end(), false) != seen.end())
    throw ValidationError(csv_path + ": missing (slice, node, descriptor) rows");
  return tab;
}

}  // namespace comseq
