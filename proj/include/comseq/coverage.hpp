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
#include <vector>

#include "comseq/emergence.hpp"

namespace comseq {

enum class ScoreMode { GrowthRate, Support };

struct SelectionConfig {
  ScoreMode score_mode = ScoreMode::GrowthRate;
  std::size_t max_seq = 5;
};

struct CharacterizationResult {
  CommunitySequence community_sequence;
  std::vector<CharacteristicCandidate> selected;
  NodeSet covered;
  NodeSet anomalies;
};

inline double score_of(const CharacteristicCandidate& c, ScoreMode mode) {
  return mode == ScoreMode::GrowthRate ? c.growth_rate : c.rel_support;
}

/// Greedy cover of the group's supporters: each step takes the candidate
/// adding the most uncovered nodes (then the higher score, then canonical
/// order) and stops once nothing new is covered or `max_seq` is reached.
inline CharacterizationResult select_patterns(const CommunitySequence& m,
                                              std::vector<CharacteristicCandidate> candidates,
                                              const SelectionConfig& cfg) {
  if (cfg.max_seq < 1) throw ValidationError("max_seq must be >= 1");
  CharacterizationResult res;
  res.community_sequence = m;
  NodeSet uncovered = m.supporters;
  while (res.selected.size() < cfg.max_seq && !candidates.empty() && !uncovered.empty()) {
    std::size_t best = 0, best_gain = 0;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      const std::size_t gain = intersect(candidates[i].supporters, uncovered).size();
      if (i == 0 || gain > best_gain) {
        best = i;
        best_gain = gain;
        continue;
      }
      if (gain < best_gain) continue;
      const double a = score_of(candidates[i], cfg.score_mode);
      const double b = score_of(candidates[best], cfg.score_mode);
      if (a > b || (a == b && canonical_less(candidates[i].pattern, candidates[best].pattern)))
        best = i;
    }
    if (best_gain == 0) break;
    NodeSet rest;
    std::set_difference(uncovered.begin(), uncovered.end(), candidates[best].supporters.begin(),
                        candidates[best].supporters.end(), std::back_inserter(rest));
    uncovered = std::move(rest);
    res.selected.push_back(std::move(candidates[best]));
    candidates.erase(candidates.begin() + static_cast<std::ptrdiff_t>(best));
  }
  std::set_difference(m.supporters.begin(), m.supporters.end(), uncovered.begin(), uncovered.end(),
                      std::back_inserter(res.covered));
  res.anomalies = std::move(uncovered);
  return res;
}

inline std::vector<CharacterizationResult> select_all(const Characterization& ch,
                                                      const SelectionConfig& cfg) {
  std::vector<CharacterizationResult> out;
  for (std::size_t i = 0; i < ch.community_sequences.size(); ++i)
    out.push_back(select_patterns(ch.community_sequences[i], ch.candidates[i], cfg));
  return out;
}

}  // namespace comseq
