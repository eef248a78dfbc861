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


// Exhaustive reference implementations for sequences and clustering.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <set>
#include <vector>

#include "comseq/seqdb.hpp"

namespace oracle {

using comseq::Itemset;
using comseq::Sequence;

inline bool contains_all(const Itemset& big, const Itemset& small) {
  for (const auto& it : small)
    if (std::find(big.begin(), big.end(), it) == big.end()) return false;
  return true;
}

/// Tries every increasing position assignment, not only the earliest.
inline bool embeds(const Sequence& a, const Sequence& b, std::size_t ai = 0, std::size_t from = 0) {
  if (ai == a.size()) return true;
  for (std::size_t j = from; j < b.size(); ++j)
    if (contains_all(b[j], a[ai]) && embeds(a, b, ai + 1, j + 1)) return true;
  return false;
}

inline std::vector<std::size_t> supporters(const Sequence& s, const std::vector<Sequence>& rows) {
  std::vector<std::size_t> out;
  for (std::size_t v = 0; v < rows.size(); ++v)
    if (embeds(s, rows[v])) out.push_back(v);
  return out;
}

namespace detail {

inline void subsequences_of(const Sequence& row, std::size_t pos, Sequence& cur,
                            std::set<Sequence>& out) {
  if (pos == row.size()) {
    if (!cur.empty()) out.insert(cur);
    return;
  }
  subsequences_of(row, pos + 1, cur, out);
  const auto& is = row[pos];
  const std::size_t k = is.size();
  for (std::size_t mask = 1; mask < (std::size_t{1} << k); ++mask) {
    Itemset part;
    for (std::size_t b = 0; b < k; ++b)
      if (mask >> b & 1) part.push_back(is[b]);
    std::sort(part.begin(), part.end());
    cur.push_back(part);
    subsequences_of(row, pos + 1, cur, out);
    cur.pop_back();
  }
}

}  // namespace detail

/// Every sequence with positive support is a subsequence of some row, so
/// listing all row subsequences enumerates the whole frequent space.
/// Closed = no strict super-sequence with the same supporter count.
inline std::map<Sequence, std::vector<std::size_t>> closed_frequent(
    const std::vector<Sequence>& rows, std::size_t min_sup) {
  std::set<Sequence> all;
  for (const auto& r : rows) {
    Sequence cur;
    detail::subsequences_of(r, 0, cur, all);
  }
  std::map<std::vector<std::size_t>, std::vector<Sequence>> by_group;
  for (const auto& s : all) {
    auto sup = supporters(s, rows);
    if (sup.size() >= min_sup) by_group[sup].push_back(s);
  }
  std::map<Sequence, std::vector<std::size_t>> out;
  for (const auto& [group, seqs] : by_group)
    for (const auto& s : seqs) {
      bool closed = true;
      for (const auto& t : seqs)
        if (t != s && embeds(s, t)) {
          closed = false;
          break;
        }
      if (closed) out.emplace(s, group);
    }
  return out;
}

/// Minimum within-cluster SSE over every split of 1-D points into two
/// nonempty groups.
inline double best_two_split_sse(const std::vector<double>& xs, std::vector<int>* side = nullptr) {
  const std::size_t n = xs.size();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t mask = 1; mask + 1 < (std::size_t{1} << n); mask += 2) {
    double sum[2] = {0, 0}, cnt[2] = {0, 0};
    for (std::size_t i = 0; i < n; ++i) {
      sum[mask >> i & 1] += xs[i];
      cnt[mask >> i & 1] += 1;
    }
    double sse = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const int s = mask >> i & 1;
      sse += (xs[i] - sum[s] / cnt[s]) * (xs[i] - sum[s] / cnt[s]);
    }
    if (sse < best) {
      best = sse;
      if (side) {
        side->assign(n, 0);
        for (std::size_t i = 0; i < n; ++i) (*side)[i] = mask >> i & 1;
      }
    }
  }
  return best;
}

/// Mean silhouette straight from the definition, Euclidean distance.
inline double silhouette(const std::vector<std::vector<double>>& pts,
                         const std::vector<std::size_t>& labels) {
  const std::size_t n = pts.size();
  auto dist = [&](std::size_t i, std::size_t j) {
    double s = 0;
    for (std::size_t d = 0; d < pts[i].size(); ++d) s += (pts[i][d] - pts[j][d]) * (pts[i][d] - pts[j][d]);
    return std::sqrt(s);
  };
  std::size_t k = 0;
  for (auto l : labels) k = std::max(k, l + 1);
  double total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> sum(k, 0), cnt(k, 0);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      sum[labels[j]] += dist(i, j);
      cnt[labels[j]] += 1;
    }
    if (cnt[labels[i]] == 0) continue;
    const double a = sum[labels[i]] / cnt[labels[i]];
    double b = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < k; ++c)
      if (c != labels[i] && cnt[c] > 0) b = std::min(b, sum[c] / cnt[c]);
    if (std::max(a, b) > 0) total += (b - a) / std::max(a, b);
  }
  return total / static_cast<double>(n);
}

}  // namespace oracle
