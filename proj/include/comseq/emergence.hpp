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
#include <map>
#include <utility>
#include <vector>

#include "comseq/miner.hpp"

namespace comseq {

/// Community items only, one per itemset, slices increasing.
struct CommunitySequence {
  Sequence sequence;
  NodeSet supporters;

  friend bool operator==(const CommunitySequence&, const CommunitySequence&) = default;
};

struct CharacteristicCandidate {
  Sequence pattern;
  double rel_support = 0.0;
  std::size_t rel_support_count = 0;
  /// +inf when the pattern never occurs outside the group.
  double growth_rate = 0.0;
  /// Supporters inside the community sequence's group.
  NodeSet supporters;

  friend bool operator==(const CharacteristicCandidate&, const CharacteristicCandidate&) = default;
};

struct SplitSequence {
  Sequence community_wise;
  Sequence community_less;
};

/// Splits a community-related sequence into its community items and the rest.
inline SplitSequence separate(const Sequence& s) {
  if (!has_community_item(s)) throw ValidationError("sequence has no community item");
  SplitSequence out;
  for (const auto& is : s) {
    Itemset wise, less;
    for (const auto& it : is) (it.is_community() ? wise : less).push_back(it);
    if (!wise.empty()) out.community_wise.push_back(std::move(wise));
    if (!less.empty()) out.community_less.push_back(std::move(less));
  }
  return out;
}

inline double growth_rate_from_counts(std::size_t in, std::size_t group_size, std::size_t out,
                                      std::size_t rest_size) {
  const double sin = static_cast<double>(in) / static_cast<double>(group_size);
  const double sout = static_cast<double>(out) / static_cast<double>(rest_size);
  if (sout == 0.0) return sin > 0.0 ? kInfinity : 0.0;
  return sin / sout;
}

/// Support inside X divided by support in the complement of X.
inline double growth_rate(const Sequence& s, const NodeSet& group, const SequenceDatabase& db) {
  if (group.empty()) throw ValidationError("growth rate undefined for an empty group");
  if (group.size() >= db.size()) throw ValidationError("growth rate undefined when X = V");
  const auto all = support(s, db).supporters;
  const std::size_t in = intersect(all, group).size();
  return growth_rate_from_counts(in, group.size(), all.size() - in, db.size() - group.size());
}

/// Flags that a candidate could not be scored because its group is every node.
struct UniversalGroupRecord {
  Sequence community_sequence;
  Sequence pattern;
};

struct Characterization {
  /// Distinct community sequences, canonical order.
  std::vector<CommunitySequence> community_sequences;
  /// Retained candidates of community_sequences[i], canonical order.
  std::vector<std::vector<CharacteristicCandidate>> candidates;
  std::vector<UniversalGroupRecord> universal;
};

/// Supporter lookup with per-item posting bitsets to narrow the scan.
class SupportIndex {
 public:
  explicit SupportIndex(const SequenceDatabase& db) : db_(db), words_((db.size() + 63) / 64) {
    for (NodeId v = 0; v < db.size(); ++v)
      for (const auto& is : db.rows[v])
        for (const auto& it : is) {
          auto& bits = postings_[it];
          if (bits.empty()) bits.assign(words_, 0);
          bits[v / 64] |= std::uint64_t{1} << (v % 64);
        }
  }

  const NodeSet& supporters(const Sequence& s) {
    auto it = cache_.find(s);
    if (it != cache_.end()) return it->second;
    std::vector<std::uint64_t> cand(words_, ~std::uint64_t{0});
    NodeSet out;
    bool possible = true;
    for (const auto& is : s)
      for (const auto& item : is) {
        auto p = postings_.find(item);
        if (p == postings_.end()) {
          possible = false;
          break;
        }
        for (std::size_t w = 0; w < words_; ++w) cand[w] &= p->second[w];
      }
    if (possible)
      for (std::size_t w = 0; w < words_; ++w)
        for (std::uint64_t bits = cand[w]; bits; bits &= bits - 1) {
          const NodeId v = static_cast<NodeId>(w * 64 + std::countr_zero(bits));
          if (v < db_.size() && is_subsequence(s, db_.rows[v])) out.push_back(v);
        }
    return cache_.emplace(s, std::move(out)).first->second;
  }

 private:
  const SequenceDatabase& db_;
  std::size_t words_;
  std::map<Item, std::vector<std::uint64_t>> postings_;
  std::map<Sequence, NodeSet> cache_;
};

/// Splits each community-related closed pattern, scores its community-less
/// part against the group of its community part, and keeps the candidates
/// meeting both thresholds.
inline Characterization characterize(const std::vector<Pattern>& cfs, const SequenceDatabase& db,
                                     std::size_t min_sup_count, double min_gr) {
  if (min_gr < 0) throw ValidationError("min_gr must be >= 0");
  SupportIndex index(db);
  std::map<Sequence, std::map<Sequence, CharacteristicCandidate>> kept;
  std::map<Sequence, NodeSet> groups;
  std::map<std::pair<Sequence, Sequence>, bool> universal;
  const std::size_t n = db.size();

  for (const auto& p : cfs) {
    if (!has_community_item(p.sequence)) continue;
    auto [m, less] = separate(p.sequence);
    auto g = groups.find(m);
    if (g == groups.end()) {
      g = groups.emplace(m, index.supporters(m)).first;
      kept[m];
    }
    if (less.empty()) continue;
    const NodeSet& group = g->second;
    if (group.size() == n) {
      universal.emplace(std::make_pair(m, less), true);
      continue;
    }
    auto& bucket = kept[m];
    if (bucket.count(less)) continue;
    const NodeSet& all = index.supporters(less);
    NodeSet inside = intersect(all, group);
    CharacteristicCandidate c;
    c.pattern = less;
    c.rel_support_count = inside.size();
    c.rel_support = static_cast<double>(inside.size()) / static_cast<double>(group.size());
    c.growth_rate = growth_rate_from_counts(inside.size(), group.size(), all.size() - inside.size(),
                                            n - group.size());
    c.supporters = std::move(inside);
    if (c.rel_support_count >= min_sup_count && c.growth_rate >= min_gr)
      bucket.emplace(less, std::move(c));
  }

  std::vector<Sequence> order;
  for (const auto& [m, _] : groups) order.push_back(m);
  std::sort(order.begin(), order.end(), canonical_less);
  Characterization out;
  for (const auto& m : order) {
    out.community_sequences.push_back({m, groups[m]});
    std::vector<CharacteristicCandidate> cs;
    for (auto& [_, c] : kept[m]) cs.push_back(std::move(c));
    std::sort(cs.begin(), cs.end(), [](const auto& a, const auto& b) {
      return canonical_less(a.pattern, b.pattern);
    });
    out.candidates.push_back(std::move(cs));
  }
  for (const auto& [key, _] : universal) out.universal.push_back({key.first, key.second});
  return out;
}

inline nlohmann::json growth_to_json(double gr) {
  if (std::isinf(gr)) return "inf";
  return gr;
}

inline double growth_from_json(const nlohmann::json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "inf") return kInfinity;
    throw ValidationError("bad growth rate '" + j.get<std::string>() + "'");
  }
  return j.get<double>();
}

inline nlohmann::json candidate_to_json(const CharacteristicCandidate& c,
                                        const SequenceDatabase& db,
                                        const std::vector<std::string>& labels) {
  nlohmann::json sup = nlohmann::json::array();
  for (NodeId v : c.supporters) sup.push_back(labels[v]);
  return {{"pattern", sequence_to_json(c.pattern, db.descriptors)},
          {"support", c.rel_support},
          {"support_count", c.rel_support_count},
          {"growth_rate", growth_to_json(c.growth_rate)},
          {"supporters", std::move(sup)}};
}

namespace detail {

inline NodeSet nodes_from_json(const nlohmann::json& arr,
                               const std::unordered_map<std::string, NodeId>& ids) {
  NodeSet out;
  for (const auto& l : arr) {
    auto it = ids.find(l.get<std::string>());
    if (it == ids.end()) throw ValidationError("unknown node '" + l.get<std::string>() + "'");
    out.push_back(it->second);
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::unordered_map<std::string, NodeId> label_index(const std::vector<std::string>& labels) {
  std::unordered_map<std::string, NodeId> ids;
  for (NodeId v = 0; v < labels.size(); ++v) ids.emplace(labels[v], v);
  return ids;
}

}  // namespace detail

inline CharacteristicCandidate candidate_from_json(
    const nlohmann::json& j, const SequenceDatabase& db,
    const std::unordered_map<std::string, NodeId>& ids) {
  CharacteristicCandidate c;
  c.pattern = sequence_from_json(j.at("pattern"), db.descriptors);
  c.rel_support = j.at("support").get<double>();
  c.rel_support_count = j.at("support_count").get<std::size_t>();
  c.growth_rate = growth_from_json(j.at("growth_rate"));
  c.supporters = detail::nodes_from_json(j.at("supporters"), ids);
  return c;
}

/// emergence.jsonl: one line per community sequence.
inline void write_emergence(const Characterization& ch, const SequenceDatabase& db,
                            const std::vector<std::string>& labels, const std::string& path) {
  auto out = detail::open_output(path);
  for (std::size_t i = 0; i < ch.community_sequences.size(); ++i) {
    const auto& m = ch.community_sequences[i];
    nlohmann::json sup = nlohmann::json::array();
    for (NodeId v : m.supporters) sup.push_back(labels[v]);
    nlohmann::json cands = nlohmann::json::array();
    for (const auto& c : ch.candidates[i]) cands.push_back(candidate_to_json(c, db, labels));
    out << nlohmann::json{{"community_sequence", sequence_to_json(m.sequence, db.descriptors)},
                          {"n_supporters", m.supporters.size()},
                          {"supporters", std::move(sup)},
                          {"candidates", std::move(cands)}}
               .dump()
        << '\n';
  }
  for (const auto& u : ch.universal)
    out << nlohmann::json{{"community_sequence", sequence_to_json(u.community_sequence, db.descriptors)},
                          {"universal_group", true},
                          {"pattern", sequence_to_json(u.pattern, db.descriptors)}}
               .dump()
        << '\n';
}

inline Characterization read_emergence(const std::string& path, const SequenceDatabase& db,
                                       const std::vector<std::string>& labels) {
  auto ids = detail::label_index(labels);
  Characterization ch;
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    if (detail::trim(line).empty()) continue;
    try {
      auto j = nlohmann::json::parse(line);
      auto m = sequence_from_json(j.at("community_sequence"), db.descriptors);
      if (j.value("universal_group", false)) {
        ch.universal.push_back({m, sequence_from_json(j.at("pattern"), db.descriptors)});
        continue;
      }
      ch.community_sequences.push_back({m, detail::nodes_from_json(j.at("supporters"), ids)});
      std::vector<CharacteristicCandidate> cs;
      for (const auto& c : j.at("candidates")) cs.push_back(candidate_from_json(c, db, ids));
      ch.candidates.push_back(std::move(cs));
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return ch;
}

}  // namespace comseq
