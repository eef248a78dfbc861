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
#include <vector>

#include "comseq/common.hpp"

namespace comseq {

/// Node -> community assignment for one slice. Ids are dense, numbered by
/// first appearance when scanning nodes in ascending order.
struct Partition {
  std::vector<CommunityId> assignment;

  std::size_t node_count() const { return assignment.size(); }
  CommunityId operator[](NodeId v) const { return assignment[v]; }

  std::size_t community_count() const {
    return assignment.empty()
               ? 0
               : static_cast<std::size_t>(
                     *std::max_element(assignment.begin(), assignment.end())) + 1;
  }

  /// Member lists, each sorted ascending.
  std::vector<NodeSet> members() const {
    std::vector<NodeSet> out(community_count());
    for (NodeId v = 0; v < assignment.size(); ++v) out[assignment[v]].push_back(v);
    return out;
  }

  /// Relabels arbitrary ids to the canonical dense numbering.
  static Partition canonical(const std::vector<std::size_t>& raw) {
    Partition p;
    p.assignment.resize(raw.size());
    std::map<std::size_t, CommunityId> seen;
    for (NodeId v = 0; v < raw.size(); ++v) {
      auto [it, fresh] = seen.try_emplace(raw[v], static_cast<CommunityId>(seen.size()));
      p.assignment[v] = it->second;
    }
    return p;
  }

  friend bool operator==(const Partition&, const Partition&) = default;
};

/// One partition per slice. Equal ids at different slices carry no
/// matching guarantee.
struct EvolvingCommunityStructure {
  std::vector<Partition> partitions;

  std::size_t theta() const { return partitions.size(); }

  friend bool operator==(const EvolvingCommunityStructure&,
                         const EvolvingCommunityStructure&) = default;
};

}  // namespace comseq
