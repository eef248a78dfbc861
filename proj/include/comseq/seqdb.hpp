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
#include <compare>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "comseq/discretize.hpp"
#include "comseq/partition.hpp"

namespace comseq {

/// A descriptor value or a (slice, community) membership. Descriptor items
/// order before community items.
struct Item {
  enum class Kind : std::uint8_t { Descriptor = 0, Community = 1 };

  Kind kind = Kind::Descriptor;
  /// Descriptor id, or slice for community items.
  std::uint32_t first = 0;
  /// Value id, or community id.
  std::uint32_t second = 0;

  static Item descriptor(std::size_t d, std::size_t value) {
    return {Kind::Descriptor, static_cast<std::uint32_t>(d), static_cast<std::uint32_t>(value)};
  }
  static Item community(std::size_t slice, std::size_t c) {
    return {Kind::Community, static_cast<std::uint32_t>(slice), static_cast<std::uint32_t>(c)};
  }

  bool is_community() const { return kind == Kind::Community; }

  friend auto operator<=>(const Item&, const Item&) = default;
  friend bool operator==(const Item&, const Item&) = default;
};

using Itemset = std::vector<Item>;
using Sequence = std::vector<Itemset>;

/// Total order used for every emitted list: fewer itemsets first, then
/// itemset by itemset lexicographically.
inline bool canonical_less(const Sequence& a, const Sequence& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

inline std::size_t item_count(const Sequence& s) {
  std::size_t k = 0;
  for (const auto& is : s) k += is.size();
  return k;
}

/// True iff `a` embeds in `b`: each itemset of `a` is contained in an
/// itemset of `b` at strictly increasing positions. Greedy earliest matching
/// is exact for this relation.
inline bool is_subsequence(const Sequence& a, const Sequence& b) {
  std::size_t j = 0;
  for (const auto& need : a) {
    while (j < b.size() && !std::includes(b[j].begin(), b[j].end(), need.begin(), need.end())) ++j;
    if (j == b.size()) return false;
    ++j;
  }
  return true;
}

inline bool has_community_item(const Sequence& s) {
  for (const auto& is : s)
    for (const auto& it : is)
      if (it.is_community()) return true;
  return false;
}

/// One enlarged node sequence per node; itemset t describes slice t.
struct SequenceDatabase {
  std::size_t theta = 0;
  std::vector<DescriptorDomain> descriptors;
  std::vector<Sequence> rows;

  std::size_t size() const { return rows.size(); }

  friend bool operator==(const SequenceDatabase& a, const SequenceDatabase& b) {
    if (a.theta != b.theta || a.rows != b.rows || a.descriptors.size() != b.descriptors.size())
      return false;
    for (std::size_t i = 0; i < a.descriptors.size(); ++i)
      if (a.descriptors[i].name != b.descriptors[i].name ||
          a.descriptors[i].values != b.descriptors[i].values)
        return false;
    return true;
  }
};

inline SequenceDatabase build_database(const DiscreteDescriptorTable& tab,
                                       const EvolvingCommunityStructure& comms) {
  if (comms.theta() != tab.theta)
    throw ValidationError("descriptor table and communities disagree on slice count");
  for (const auto& p : comms.partitions)
    if (p.node_count() != tab.n)
      throw ValidationError("descriptor table and communities disagree on node count");
  SequenceDatabase db;
  db.theta = tab.theta;
  db.descriptors = tab.descriptors;
  db.rows.resize(tab.n);
  const std::size_t k = tab.descriptors.size();
  for (NodeId v = 0; v < tab.n; ++v) {
    auto& row = db.rows[v];
    row.resize(tab.theta);
    for (std::size_t t = 0; t < tab.theta; ++t) {
      for (std::size_t d = 0; d < k; ++d) {
        auto val = tab.at(t, v, d);
        if (val != DiscreteDescriptorTable::kAbsent) row[t].push_back(Item::descriptor(d, val));
      }
      row[t].push_back(Item::community(t, comms.partitions[t][v]));
    }
  }
  return db;
}

struct SupportResult {
  std::size_t count = 0;
  double fraction = 0.0;
  NodeSet supporters;
};

/// Support of `s` among the nodes of `group` (all nodes when absent).
inline SupportResult support(const Sequence& s, const SequenceDatabase& db,
                             const std::optional<NodeSet>& group = {}) {
  SupportResult r;
  auto visit = [&](NodeId v) {
    if (v >= db.size()) throw ValidationError("group contains an unknown node");
    if (is_subsequence(s, db.rows[v])) r.supporters.push_back(v);
  };
  std::size_t denom = 0;
  if (group) {
    for (NodeId v : *group) visit(v);
    denom = group->size();
  } else {
    for (NodeId v = 0; v < db.size(); ++v) visit(v);
    denom = db.size();
  }
  if (denom == 0) throw ValidationError("undefined support: empty node group");
  r.count = r.supporters.size();
  r.fraction = static_cast<double>(r.count) / static_cast<double>(denom);
  return r;
}

/// "desc:value-label" or "C[t]=c".
inline std::string item_string(const Item& it, const std::vector<DescriptorDomain>& ds) {
  if (it.is_community())
    return "C[" + std::to_string(it.first) + "]=" + std::to_string(it.second);
  return ds[it.first].name + ":" + ds[it.first].values[it.second];
}

/// Report form: cluster labels as-is, attributes as "name=value".
inline std::string item_display(const Item& it, const std::vector<DescriptorDomain>& ds) {
  if (it.is_community())
    return "C[" + std::to_string(it.first) + "]=" + std::to_string(it.second);
  return ds[it.first].render(it.second);
}

inline std::string sequence_display(const Sequence& s, const std::vector<DescriptorDomain>& ds) {
  std::string out = "<";
  for (const auto& is : s) {
    out += "(";
    for (std::size_t i = 0; i < is.size(); ++i) {
      if (i) out += ", ";
      out += item_display(is[i], ds);
    }
    out += ")";
  }
  return out + ">";
}

inline Item parse_item(const std::string& text, const std::vector<DescriptorDomain>& ds) {
  if (text.starts_with("C[")) {
    auto close = text.find("]=");
    if (close != std::string::npos) {
      auto t = detail::parse_int(text.substr(2, close - 2));
      auto c = detail::parse_int(text.substr(close + 2));
      if (t && c && *t >= 0 && *c >= 0) return Item::community(*t, *c);
    }
  }
  for (std::size_t d = 0; d < ds.size(); ++d) {
    const auto& name = ds[d].name;
    if (text.size() > name.size() && text.starts_with(name) && text[name.size()] == ':') {
      auto label = text.substr(name.size() + 1);
      auto it = std::find(ds[d].values.begin(), ds[d].values.end(), label);
      if (it != ds[d].values.end()) return Item::descriptor(d, it - ds[d].values.begin());
    }
  }
  throw ValidationError("unknown item '" + text + "'");
}

inline nlohmann::json sequence_to_json(const Sequence& s, const std::vector<DescriptorDomain>& ds) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& is : s) {
    nlohmann::json set = nlohmann::json::array();
    for (const auto& it : is) set.push_back(item_string(it, ds));
    arr.push_back(std::move(set));
  }
  return arr;
}

inline Sequence sequence_from_json(const nlohmann::json& arr,
                                   const std::vector<DescriptorDomain>& ds) {
  Sequence s;
  for (const auto& set : arr) {
    Itemset is;
    for (const auto& it : set) is.push_back(parse_item(it.get<std::string>(), ds));
    std::sort(is.begin(), is.end());
    s.push_back(std::move(is));
  }
  return s;
}

/// seqdb.jsonl (one row per node) plus items.json (descriptor domains).
inline void write_database(const SequenceDatabase& db, const std::vector<std::string>& labels,
                           const std::string& jsonl_path, const std::string& items_path) {
  auto out = detail::open_output(jsonl_path);
  for (NodeId v = 0; v < db.size(); ++v)
    out << nlohmann::json{{"node", labels[v]}, {"sequence", sequence_to_json(db.rows[v], db.descriptors)}}
               .dump()
        << '\n';
  auto items = detail::open_output(items_path);
  items << nlohmann::json{{"theta", db.theta},
                          {"descriptors", descriptors_to_json(db.descriptors)}}
               .dump(2)
        << '\n';
}

inline std::vector<DescriptorDomain> read_items_json(const std::string& items_path,
                                                     std::size_t* theta = nullptr) {
  auto j = read_json_file(items_path);
  try {
    if (theta) *theta = j.at("theta").get<std::size_t>();
    return descriptors_from_json(j.at("descriptors"));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(items_path + ": " + e.what());
  }
}

/// Reads seqdb.jsonl; rows must list every node of `labels` exactly once.
inline SequenceDatabase read_database(const std::string& jsonl_path, const std::string& items_path,
                                      const std::vector<std::string>& labels) {
  SequenceDatabase db;
  db.descriptors = read_items_json(items_path, &db.theta);
  std::unordered_map<std::string, NodeId> ids;
  for (NodeId v = 0; v < labels.size(); ++v) ids.emplace(labels[v], v);
  db.rows.assign(labels.size(), {});
  std::vector<bool> seen(labels.size(), false);
  std::ifstream in(jsonl_path);
  if (!in) throw ValidationError("cannot open '" + jsonl_path + "'");
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    if (detail::trim(line).empty()) continue;
    auto where = jsonl_path + ":" + std::to_string(lineno) + ": ";
    try {
      auto j = nlohmann::json::parse(line);
      auto it = ids.find(j.at("node").get<std::string>());
      if (it == ids.end() || seen[it->second]) throw ValidationError(where + "unknown or repeated node");
      seen[it->second] = true;
      db.rows[it->second] = sequence_from_json(j.at("sequence"), db.descriptors);
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(where + e.what());
    }
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end())
    throw ValidationError(jsonl_path + ": missing node rows");
  return db;
}

}  // namespace comseq
