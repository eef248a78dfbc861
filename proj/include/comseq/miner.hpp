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
#include <bit>
#include <cstdint>
#include <map>
#include <unordered_map>
#include <vector>

#include "comseq/seqdb.hpp"

namespace comseq {

struct Pattern {
  Sequence sequence;
  std::size_t support_count = 0;
  NodeSet supporters;

  friend bool operator==(const Pattern&, const Pattern&) = default;
};

struct MinerOptions {
  std::size_t min_sup_count = 1;
  /// Bound on itemsets per pattern; 0 means the database's slice count.
  std::size_t max_itemsets = 0;
  /// Equivalent-projection pruning. Off only for testing.
  bool prune = true;
};

struct MinerStats {
  std::size_t visited = 0;
  std::size_t pruned = 0;
  std::size_t candidates = 0;
};

namespace miner_detail {

using Code = std::uint32_t;
using Mask = std::uint64_t;

// Row of the coded database: each distinct item once, with the bit mask of
// the itemset positions containing it.
struct CodedRow {
  std::vector<Code> codes;
  std::vector<Mask> masks;
};

// Projection entry: row id and the positions where the pattern's last
// itemset can sit in that row.
struct Entry {
  std::uint32_t row;
  Mask ends;
  friend bool operator==(const Entry&, const Entry&) = default;
};

using Coded = std::vector<std::vector<Code>>;

inline Mask above(Mask m) {
  const int low = std::countr_zero(m);
  return low >= 63 ? 0 : ~((Mask{2} << low) - 1);
}

struct Stored {
  Coded pattern;
  std::vector<Entry> projection;
};

struct Found {
  Coded pattern;
  std::vector<std::uint32_t> rows;
};

inline bool coded_subsequence(const Coded& a, const Coded& b) {
  std::size_t j = 0;
  for (const auto& need : a) {
    while (j < b.size() && !std::includes(b[j].begin(), b[j].end(), need.begin(), need.end())) ++j;
    if (j == b.size()) return false;
    ++j;
  }
  return true;
}

class Miner {
 public:
  Miner(const SequenceDatabase& db, const MinerOptions& opt) : opt_(opt) {
    if (db.theta > 64) throw ValidationError("the miner supports at most 64 slices");
    for (const auto& row : db.rows)
      for (const auto& is : row) alphabet_.insert(alphabet_.end(), is.begin(), is.end());
    std::sort(alphabet_.begin(), alphabet_.end());
    alphabet_.erase(std::unique(alphabet_.begin(), alphabet_.end()), alphabet_.end());
    rows_.reserve(db.size());
    for (const auto& row : db.rows) {
      if (row.size() > 64) throw ValidationError("the miner supports at most 64 itemsets per row");
      std::map<Code, Mask> acc;
      for (std::size_t p = 0; p < row.size(); ++p)
        for (const auto& it : row[p]) acc[encode(it)] |= Mask{1} << p;
      CodedRow r;
      for (auto [c, m] : acc) {
        r.codes.push_back(c);
        r.masks.push_back(m);
      }
      rows_.push_back(std::move(r));
    }
    max_itemsets_ = opt.max_itemsets ? opt.max_itemsets : std::max<std::size_t>(db.theta, 1);
    counts_.assign(alphabet_.size(), 0);
    counts_s_.assign(alphabet_.size(), 0);
  }

  std::vector<Pattern> run(MinerStats* stats) {
    if (opt_.min_sup_count < 1) throw ValidationError("min_sup_count must be >= 1");
    std::vector<Entry> all;
    for (std::uint32_t r = 0; r < rows_.size(); ++r) all.push_back({r, ~Mask{0}});
    Coded empty;
    grow(empty, all, /*root=*/true);
    auto out = close();
    if (stats) {
      stats->visited = visited_;
      stats->pruned = pruned_;
      stats->candidates = found_.size();
    }
    return out;
  }

 private:
  Code encode(const Item& it) const {
    return static_cast<Code>(std::lower_bound(alphabet_.begin(), alphabet_.end(), it) -
                             alphabet_.begin());
  }

  static std::uint64_t key_of(const std::vector<Entry>& proj) {
    std::uint64_t rows = 0, masks = 0;
    for (const auto& e : proj) {
      rows += e.row;
      masks += e.ends;
    }
    return rows * 0x9e3779b97f4a7c15ULL ^ masks ^ (proj.size() << 1);
  }

  // A stored pattern with the same projection whose prefix contains ours
  // and whose last itemset contains ours makes this branch redundant: every
  // extension here has an equal-support proper super-sequence there.
  bool subsumed(const Coded& pat, const std::vector<Entry>& proj, std::uint64_t key) const {
    auto it = lattice_.find(key);
    if (it == lattice_.end()) return false;
    Coded prefix(pat.begin(), pat.end() - 1);
    for (std::size_t idx : it->second) {
      const auto& s = stored_[idx];
      if (s.pattern.size() < pat.size() || s.projection != proj) continue;
      const auto& last = s.pattern.back();
      if (!std::includes(last.begin(), last.end(), pat.back().begin(), pat.back().end())) continue;
      Coded other_prefix(s.pattern.begin(), s.pattern.end() - 1);
      if (coded_subsequence(prefix, other_prefix)) return true;
    }
    return false;
  }

  void grow(Coded& pat, const std::vector<Entry>& proj, bool root) {
    if (!root) {
      ++visited_;
      if (opt_.prune) {
        const auto key = key_of(proj);
        if (subsumed(pat, proj, key)) {
          ++pruned_;
          return;
        }
        lattice_[key].push_back(stored_.size());
        stored_.push_back({pat, proj});
      }
      std::vector<std::uint32_t> rows;
      rows.reserve(proj.size());
      for (const auto& e : proj) rows.push_back(e.row);
      found_.push_back({pat, std::move(rows)});
    }

    // Count both extension kinds in one pass over the projection.
    const Code last_max = root ? 0 : pat.back().back();
    const bool can_seq = pat.size() < max_itemsets_;
    std::vector<Code> touched_i, touched_s;
    for (const auto& e : proj) {
      const auto& r = rows_[e.row];
      const Mask after = root ? ~Mask{0} : above(e.ends);
      for (std::size_t i = 0; i < r.codes.size(); ++i) {
        const Code c = r.codes[i];
        if (root) {
          if (counts_[c]++ == 0) touched_s.push_back(c);
          continue;
        }
        if (c > last_max && (r.masks[i] & e.ends)) {
          if (counts_[c]++ == 0) touched_i.push_back(c);
        }
        if (can_seq && (r.masks[i] & after)) {
          if (counts_s_[c]++ == 0) touched_s.push_back(c);
        }
      }
    }
    std::vector<Code> ext_i, ext_s;
    for (Code c : touched_i)
      if (counts_[c] >= opt_.min_sup_count) ext_i.push_back(c);
    if (root) {
      for (Code c : touched_s)
        if (counts_[c] >= opt_.min_sup_count) ext_s.push_back(c);
      for (Code c : touched_s) counts_[c] = 0;
    } else {
      for (Code c : touched_s)
        if (counts_s_[c] >= opt_.min_sup_count) ext_s.push_back(c);
      for (Code c : touched_s) counts_s_[c] = 0;
    }
    for (Code c : touched_i) counts_[c] = 0;
    std::sort(ext_i.begin(), ext_i.end());
    std::sort(ext_s.begin(), ext_s.end());

    // Itemset extensions first, so larger itemsets are stored before the
    // sparser patterns they subsume.
    std::vector<Entry> child;
    for (Code c : ext_i) {
      child.clear();
      for (const auto& e : proj) {
        const auto& r = rows_[e.row];
        auto pos = std::lower_bound(r.codes.begin(), r.codes.end(), c);
        if (pos == r.codes.end() || *pos != c) continue;
        const Mask m = r.masks[pos - r.codes.begin()] & e.ends;
        if (m) child.push_back({e.row, m});
      }
      pat.back().push_back(c);
      grow(pat, child, false);
      pat.back().pop_back();
    }
    for (Code c : ext_s) {
      child.clear();
      for (const auto& e : proj) {
        const auto& r = rows_[e.row];
        auto pos = std::lower_bound(r.codes.begin(), r.codes.end(), c);
        if (pos == r.codes.end() || *pos != c) continue;
        const Mask m = r.masks[pos - r.codes.begin()] & (root ? ~Mask{0} : above(e.ends));
        if (m) child.push_back({e.row, m});
      }
      pat.push_back({c});
      grow(pat, child, false);
      pat.pop_back();
    }
  }

  // Keeps candidates with no proper super-sequence of identical supporters.
  std::vector<Pattern> close() {
    std::map<std::vector<std::uint32_t>, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < found_.size(); ++i) groups[found_[i].rows].push_back(i);
    auto size_of = [&](std::size_t i) {
      std::size_t k = 0;
      for (const auto& is : found_[i].pattern) k += is.size();
      return k;
    };
    std::vector<Pattern> out;
    for (auto& [rows, members] : groups) {
      std::stable_sort(members.begin(), members.end(),
                       [&](std::size_t a, std::size_t b) { return size_of(a) > size_of(b); });
      std::vector<std::size_t> kept;
      for (std::size_t i : members) {
        const std::size_t sz = size_of(i);
        bool closed = true;
        for (std::size_t j : kept)
          if (size_of(j) > sz && coded_subsequence(found_[i].pattern, found_[j].pattern)) {
            closed = false;
            break;
          }
        if (!closed) continue;
        kept.push_back(i);
        Pattern p;
        for (const auto& is : found_[i].pattern) {
          Itemset set;
          for (Code c : is) set.push_back(alphabet_[c]);
          p.sequence.push_back(std::move(set));
        }
        p.support_count = rows.size();
        p.supporters.assign(rows.begin(), rows.end());
        out.push_back(std::move(p));
      }
    }
    std::sort(out.begin(), out.end(), [](const Pattern& a, const Pattern& b) {
      return canonical_less(a.sequence, b.sequence);
    });
    return out;
  }

  MinerOptions opt_;
  std::vector<Item> alphabet_;
  std::vector<CodedRow> rows_;
  std::size_t max_itemsets_ = 0;
  std::vector<std::size_t> counts_, counts_s_;
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> lattice_;
  std::vector<Stored> stored_;
  std::vector<Found> found_;
  std::size_t visited_ = 0, pruned_ = 0;
};

}  // namespace miner_detail

/// Closed frequent sequential patterns of `db`, in canonical order.
inline std::vector<Pattern> mine_closed(const SequenceDatabase& db, const MinerOptions& opt,
                                        MinerStats* stats = nullptr) {
  if (db.size() == 0) return {};
  miner_detail::Miner m(db, opt);
  return m.run(stats);
}

inline std::vector<Pattern> mine_closed(const SequenceDatabase& db, std::size_t min_sup_count) {
  MinerOptions opt;
  opt.min_sup_count = min_sup_count;
  return mine_closed(db, opt);
}

inline std::size_t count_community_related(const std::vector<Pattern>& patterns) {
  return static_cast<std::size_t>(std::count_if(patterns.begin(), patterns.end(), [](const auto& p) {
    return has_community_item(p.sequence);
  }));
}

/// patterns.jsonl: {"sequence": [...], "support": int, "supporters": [labels]}.
inline void write_patterns(const std::vector<Pattern>& ps, const SequenceDatabase& db,
                           const std::vector<std::string>& labels, const std::string& path,
                           bool with_supporters = true) {
  auto out = detail::open_output(path);
  for (const auto& p : ps) {
    nlohmann::json j{{"sequence", sequence_to_json(p.sequence, db.descriptors)},
                     {"support", p.support_count}};
    if (with_supporters) {
      nlohmann::json sup = nlohmann::json::array();
      for (NodeId v : p.supporters) sup.push_back(labels[v]);
      j["supporters"] = std::move(sup);
    }
    out << j.dump() << '\n';
  }
}

/// Reads patterns.jsonl. Supporters are recounted against `db` when the
/// file omits them.
inline std::vector<Pattern> read_patterns(const std::string& path, const SequenceDatabase& db,
                                          const std::vector<std::string>& labels) {
  std::unordered_map<std::string, NodeId> ids;
  for (NodeId v = 0; v < labels.size(); ++v) ids.emplace(labels[v], v);
  std::vector<Pattern> out;
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    if (detail::trim(line).empty()) continue;
    auto where = path + ":" + std::to_string(lineno) + ": ";
    try {
      auto j = nlohmann::json::parse(line);
      Pattern p;
      p.sequence = sequence_from_json(j.at("sequence"), db.descriptors);
      p.support_count = j.at("support").get<std::size_t>();
      if (j.contains("supporters")) {
        for (const auto& l : j["supporters"]) {
          auto it = ids.find(l.get<std::string>());
          if (it == ids.end()) throw ValidationError(where + "unknown supporter");
          p.supporters.push_back(it->second);
        }
        std::sort(p.supporters.begin(), p.supporters.end());
      } else {
        p.supporters = support(p.sequence, db).supporters;
      }
      if (p.supporters.size() != p.support_count)
        throw ValidationError(where + "support does not match supporters");
      out.push_back(std::move(p));
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(where + e.what());
    }
  }
  return out;
}

}  // namespace comseq
