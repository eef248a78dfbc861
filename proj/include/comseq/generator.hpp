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
#include <filesystem>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "comseq/network.hpp"
#include "comseq/partition.hpp"

namespace comseq {

enum class EventType { BirthDeath, MergeSplit, HideAppear, ExpansionContraction, Switch };

inline const char* event_type_name(EventType e) {
  switch (e) {
    case EventType::BirthDeath: return "birth-death";
    case EventType::MergeSplit: return "merge-split";
    case EventType::HideAppear: return "hide-appear";
    case EventType::ExpansionContraction: return "expansion-contraction";
    case EventType::Switch: return "switch";
  }
  return "?";
}

inline EventType parse_event_type(const std::string& s) {
  for (auto e : {EventType::BirthDeath, EventType::MergeSplit, EventType::HideAppear,
                 EventType::ExpansionContraction, EventType::Switch})
    if (s == event_type_name(e)) return e;
  throw ValidationError("unknown event type '" + s + "'");
}

inline bool is_large_scale(EventType e) {
  return e == EventType::BirthDeath || e == EventType::MergeSplit || e == EventType::HideAppear;
}

struct EventParams {
  std::size_t births = 1, deaths = 1;
  std::size_t merges = 1, splits = 1;
  std::size_t hides = 1;
  std::size_t expansions = 1, contractions = 1;
  /// Share of a community's size moved per expansion or contraction.
  double expansion_pct = 10.0;
  /// Share of all nodes moved per slice.
  double switch_pct = 10.0;
};

struct GeneratorConfig {
  std::size_t n = 1000;
  std::size_t theta = 10;
  double avg_degree = 10.0;
  std::size_t max_degree = 50;
  double degree_exponent = 2.0;
  double community_size_exponent = 1.0;
  double mixing = 0.2;
  std::size_t min_community = 20;
  std::size_t max_community = 100;
  EventType event_type = EventType::Switch;
  EventParams events;
  std::uint64_t seed = 42;

  void validate() const {
    if (n < 2 || theta < 1) throw ValidationError("generator needs n >= 2 and theta >= 1");
    if (!(mixing >= 0.0 && mixing < 1.0)) throw ValidationError("mixing must lie in [0, 1)");
    if (avg_degree < 1.0 || avg_degree >= static_cast<double>(max_degree))
      throw ValidationError("need 1 <= avg_degree < max_degree");
    if (max_degree >= n) throw ValidationError("max_degree must be below n");
    if (min_community < 2 || min_community > max_community)
      throw ValidationError("need 2 <= min_community <= max_community");
    if (static_cast<double>(min_community) < avg_degree)
      throw ValidationError("min_community must be at least avg_degree");
    if (min_community > n) throw ValidationError("min_community exceeds n");
    if (degree_exponent <= 0 || community_size_exponent <= 0)
      throw ValidationError("exponents must be positive");
  }
};

enum class AttributeDistribution { Degenerate, Binomial, Power, Uniform };

inline const char* distribution_name(AttributeDistribution h) {
  switch (h) {
    case AttributeDistribution::Degenerate: return "degenerate";
    case AttributeDistribution::Binomial: return "binomial";
    case AttributeDistribution::Power: return "power";
    case AttributeDistribution::Uniform: return "uniform";
  }
  return "?";
}

inline AttributeDistribution parse_distribution(const std::string& s) {
  for (auto h : {AttributeDistribution::Degenerate, AttributeDistribution::Binomial,
                 AttributeDistribution::Power, AttributeDistribution::Uniform})
    if (s == distribution_name(h)) return h;
  throw ValidationError("unknown distribution '" + s + "'");
}

struct AttributeConfig {
  std::size_t count = 3;
  long long min_value = 0;
  long long max_value = 9;
  /// Percentage of each community's nodes resampled per slice.
  double evolution_pct = 5.0;
  AttributeDistribution distribution = AttributeDistribution::Degenerate;

  void validate() const {
    if (min_value > max_value) throw ValidationError("attribute domain is empty");
    if (!(evolution_pct >= 0.0 && evolution_pct <= 100.0))
      throw ValidationError("evolution percentage must lie in [0, 100]");
  }
};

struct EventRecord {
  std::size_t slice = 0;
  std::string type;
  std::string params;
};

struct GroundTruth {
  EvolvingCommunityStructure communities;
  /// Community ids that persist across slices, as used in the event log.
  std::vector<std::vector<std::uint32_t>> persistent;
  std::vector<EventRecord> events;
  /// Nodes whose attributes were redrawn at each slice (empty at slice 0).
  std::vector<NodeSet> resampled;
};

namespace gen_detail {

using Rng = std::mt19937_64;

inline double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

inline std::size_t uniform_index(Rng& rng, std::size_t size) {
  return std::uniform_int_distribution<std::size_t>(0, size - 1)(rng);
}

/// floor(x) plus one with probability frac(x); unbiased.
inline std::size_t round_stochastic(double x, Rng& rng) {
  const double f = std::floor(x);
  return static_cast<std::size_t>(f) + (uniform01(rng) < x - f ? 1 : 0);
}

inline double power_sample(double lo, double hi, double exponent, Rng& rng) {
  const double u = uniform01(rng);
  if (std::abs(exponent - 1.0) < 1e-12) return lo * std::pow(hi / lo, u);
  const double e = 1.0 - exponent;
  return std::pow(std::pow(lo, e) + u * (std::pow(hi, e) - std::pow(lo, e)), 1.0 / e);
}

inline double power_mean(double lo, double hi, double exponent) {
  if (std::abs(exponent - 1.0) < 1e-12) return (hi - lo) / std::log(hi / lo);
  if (std::abs(exponent - 2.0) < 1e-12) return std::log(hi / lo) / (1.0 / lo - 1.0 / hi);
  const double a = 1.0 - exponent, b = 2.0 - exponent;
  return (a / b) * (std::pow(hi, b) - std::pow(lo, b)) / (std::pow(hi, a) - std::pow(lo, a));
}

// Lower cut-off giving the requested mean on [lo, hi].
inline double solve_lower_bound(double mean, double hi, double exponent) {
  double a = 1.0, b = mean;
  if (power_mean(a, hi, exponent) >= mean) return a;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (a + b);
    (power_mean(mid, hi, exponent) < mean ? a : b) = mid;
  }
  return 0.5 * (a + b);
}

inline std::uint64_t edge_key(NodeId u, NodeId v) {
  if (u > v) std::swap(u, v);
  return (static_cast<std::uint64_t>(u) << 32) | v;
}

struct EdgeStore {
  std::unordered_set<std::uint64_t> keys;

  bool contains(NodeId u, NodeId v) const { return keys.count(edge_key(u, v)) > 0; }
  void add(NodeId u, NodeId v) { keys.insert(edge_key(u, v)); }
  void remove(NodeId u, NodeId v) { keys.erase(edge_key(u, v)); }
};

// Pairs up stubs so that `ok(u, v)` holds and no edge repeats. Unpaired
// stubs are retried after reshuffling, then repaired by swapping with an
// existing pool edge; anything left is dropped.
template <class Ok>
void match_stubs(std::vector<NodeId> stubs, const Ok& ok, EdgeStore& store, std::vector<Edge>& pool,
                 Rng& rng) {
  if (stubs.size() % 2) stubs.erase(stubs.begin() + static_cast<std::ptrdiff_t>(uniform_index(rng, stubs.size())));
  auto fits = [&](NodeId u, NodeId v) { return u != v && ok(u, v) && !store.contains(u, v); };
  for (int round = 0; round < 8 && !stubs.empty(); ++round) {
    std::shuffle(stubs.begin(), stubs.end(), rng);
    std::vector<NodeId> rest;
    for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
      const NodeId u = stubs[i], v = stubs[i + 1];
      if (fits(u, v)) {
        store.add(u, v);
        pool.emplace_back(u, v);
      } else {
        rest.push_back(u);
        rest.push_back(v);
      }
    }
    stubs = std::move(rest);
  }
  for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
    const NodeId a = stubs[i], b = stubs[i + 1];
    for (int attempt = 0; attempt < 50 && !pool.empty(); ++attempt) {
      const std::size_t k = uniform_index(rng, pool.size());
      auto [c, d] = pool[k];
      if (uniform01(rng) < 0.5) std::swap(c, d);
      if (a == c || b == d || a == d || b == c) continue;
      if (!fits(a, c) || !fits(b, d)) continue;
      store.remove(c, d);
      pool[k] = pool.back();
      pool.pop_back();
      store.add(a, c);
      store.add(b, d);
      pool.emplace_back(a, c);
      pool.emplace_back(b, d);
      break;
    }
  }
}

// Keeps previous edges consistent with the per-node internal / external
// targets under `comm`, then fills the deficits.
inline std::vector<Edge> rewire(std::size_t n, const std::vector<std::uint32_t>& comm,
                                const std::vector<std::size_t>& k_int,
                                const std::vector<std::size_t>& k_ext, std::vector<Edge> prev,
                                Rng& rng) {
  std::shuffle(prev.begin(), prev.end(), rng);
  std::vector<std::size_t> int_cnt(n, 0), ext_cnt(n, 0);
  EdgeStore store;
  std::map<std::uint32_t, std::vector<Edge>> internal;
  std::vector<Edge> external;
  for (auto [u, v] : prev) {
    if (comm[u] == comm[v]) {
      if (int_cnt[u] >= k_int[u] || int_cnt[v] >= k_int[v]) continue;
      ++int_cnt[u];
      ++int_cnt[v];
      internal[comm[u]].emplace_back(u, v);
    } else {
      if (ext_cnt[u] >= k_ext[u] || ext_cnt[v] >= k_ext[v]) continue;
      ++ext_cnt[u];
      ++ext_cnt[v];
      external.emplace_back(u, v);
    }
    store.add(u, v);
  }
  std::map<std::uint32_t, std::vector<NodeId>> int_stubs;
  std::vector<NodeId> ext_stubs;
  for (NodeId v = 0; v < n; ++v) {
    for (std::size_t i = int_cnt[v]; i < k_int[v]; ++i) int_stubs[comm[v]].push_back(v);
    for (std::size_t i = ext_cnt[v]; i < k_ext[v]; ++i) ext_stubs.push_back(v);
  }
  for (auto& [c, stubs] : int_stubs)
    match_stubs(std::move(stubs), [](NodeId, NodeId) { return true; }, store, internal[c], rng);
  match_stubs(std::move(ext_stubs), [&](NodeId u, NodeId v) { return comm[u] != comm[v]; }, store,
              external, rng);
  std::vector<Edge> out = std::move(external);
  for (auto& [c, es] : internal) out.insert(out.end(), es.begin(), es.end());
  for (auto& [u, v] : out)
    if (u > v) std::swap(u, v);
  std::sort(out.begin(), out.end());
  return out;
}

inline Partition canonical_of(const std::vector<std::uint32_t>& comm) {
  return Partition::canonical(std::vector<std::size_t>(comm.begin(), comm.end()));
}

// Evolving planted structure with persistent community ids.
class Evolver {
 public:
  Evolver(const GeneratorConfig& cfg, Rng& rng) : cfg_(cfg), rng_(rng) {}

  std::vector<std::uint32_t> comm;
  std::vector<std::size_t> degree, ext_target;
  std::vector<Edge> edges;
  std::vector<EventRecord> events;

  void init() {
    const std::size_t n = cfg_.n;
    const double lo = solve_lower_bound(cfg_.avg_degree, static_cast<double>(cfg_.max_degree),
                                        cfg_.degree_exponent);
    degree.resize(n);
    ext_target.resize(n);
    for (NodeId v = 0; v < n; ++v) {
      const double x = power_sample(lo, static_cast<double>(cfg_.max_degree), cfg_.degree_exponent, rng_);
      degree[v] = std::clamp<std::size_t>(round_stochastic(x, rng_), 1, cfg_.max_degree);
      ext_target[v] = std::min(degree[v], round_stochastic(cfg_.mixing * static_cast<double>(degree[v]), rng_));
    }

    std::vector<std::size_t> sizes;
    std::size_t total = 0;
    while (total < n) {
      auto s = std::clamp<std::size_t>(
          static_cast<std::size_t>(std::lround(power_sample(
              static_cast<double>(cfg_.min_community), static_cast<double>(cfg_.max_community),
              cfg_.community_size_exponent, rng_))),
          cfg_.min_community, cfg_.max_community);
      if (total + s > n) {
        const std::size_t rem = n - total;
        if (rem >= cfg_.min_community) {
          sizes.push_back(rem);
          total = n;
          break;
        }
        for (std::size_t left = rem, i = uniform_index(rng_, std::max<std::size_t>(sizes.size(), 1)),
                         guard = 0;
             left > 0; i = (i + 1) % std::max<std::size_t>(sizes.size(), 1)) {
          if (sizes.empty()) throw ValidationError("community sizes cannot sum to n");
          if (sizes[i] < cfg_.max_community) {
            ++sizes[i];
            --left;
            guard = 0;
          } else if (++guard > sizes.size()) {
            throw ValidationError("community sizes cannot sum to n within max_community");
          }
        }
        total = n;
        break;
      }
      sizes.push_back(s);
      total += s;
    }

    // Highest internal degree first, into communities that can hold it.
    std::vector<NodeId> order(n);
    for (NodeId v = 0; v < n; ++v) order[v] = v;
    std::shuffle(order.begin(), order.end(), rng_);
    std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
      return degree[a] - ext_target[a] > degree[b] - ext_target[b];
    });
    std::vector<std::size_t> free = sizes;
    comm.assign(n, 0);
    std::vector<std::size_t> fit;
    for (NodeId v : order) {
      const std::size_t kin = degree[v] - ext_target[v];
      fit.clear();
      for (std::size_t c = 0; c < sizes.size(); ++c)
        if (free[c] > 0 && sizes[c] > kin) fit.push_back(c);
      std::size_t c;
      if (!fit.empty()) {
        c = fit[uniform_index(rng_, fit.size())];
      } else {
        c = 0;
        for (std::size_t d = 0; d < sizes.size(); ++d)
          if (free[d] > 0 && (free[c] == 0 || sizes[d] > sizes[c])) c = d;
      }
      --free[c];
      comm[v] = static_cast<std::uint32_t>(c);
    }
    next_id_ = static_cast<std::uint32_t>(sizes.size());
    rewire_edges();
  }

  void step(std::size_t t) {
    switch (cfg_.event_type) {
      case EventType::BirthDeath: birth_death(t); break;
      case EventType::MergeSplit: merge_split(t); break;
      case EventType::HideAppear: hide_appear(t); break;
      case EventType::ExpansionContraction: expansion_contraction(t); break;
      case EventType::Switch: switch_nodes(t); break;
    }
    rewire_edges();
  }

 private:
  void rewire_edges() {
    const std::size_t n = cfg_.n;
    std::unordered_map<std::uint32_t, std::size_t> size;
    for (auto c : comm) ++size[c];
    std::vector<std::size_t> k_int(n), k_ext(n);
    for (NodeId v = 0; v < n; ++v) {
      k_int[v] = std::min(degree[v] - ext_target[v], size[comm[v]] - 1);
      k_ext[v] = degree[v] - k_int[v];
    }
    edges = rewire(n, comm, k_int, k_ext, std::move(edges), rng_);
  }

  std::map<std::uint32_t, NodeSet> groups() const {
    std::map<std::uint32_t, NodeSet> g;
    for (NodeId v = 0; v < comm.size(); ++v) g[comm[v]].push_back(v);
    return g;
  }

  std::vector<std::uint32_t> ids_of(const std::map<std::uint32_t, NodeSet>& g) const {
    std::vector<std::uint32_t> ids;
    for (const auto& [id, _] : g) ids.push_back(id);
    return ids;
  }

  void log(std::size_t t, std::string type, std::string params) {
    events.push_back({t, std::move(type), std::move(params)});
  }

  std::uint32_t pick_other(std::uint32_t own, const std::vector<std::uint32_t>& ids) {
    for (int guard = 0; guard < 1000; ++guard) {
      auto c = ids[uniform_index(rng_, ids.size())];
      if (c != own) return c;
    }
    return own;
  }

  void birth_death(std::size_t t) {
    for (std::size_t b = 0; b < cfg_.events.births; ++b) {
      auto g = groups();
      std::unordered_map<std::uint32_t, std::size_t> size;
      for (const auto& [id, m] : g) size[id] = m.size();
      const std::size_t want = std::clamp<std::size_t>(
          static_cast<std::size_t>(std::lround(power_sample(
              static_cast<double>(cfg_.min_community), static_cast<double>(cfg_.max_community),
              cfg_.community_size_exponent, rng_))),
          cfg_.min_community, cfg_.max_community);
      std::vector<NodeId> pool(comm.size());
      for (NodeId v = 0; v < comm.size(); ++v) pool[v] = v;
      std::shuffle(pool.begin(), pool.end(), rng_);
      NodeSet members;
      for (NodeId v : pool) {
        if (members.size() == want) break;
        if (size.count(comm[v]) && size[comm[v]] > cfg_.min_community) {
          --size[comm[v]];
          members.push_back(v);
        }
      }
      if (members.size() < 2) {
        log(t, "warning", "birth skipped: no community can donate members");
        continue;
      }
      const auto id = next_id_++;
      for (NodeId v : members) comm[v] = id;
      log(t, "birth", "community=" + std::to_string(id) + ";size=" + std::to_string(members.size()));
    }
    for (std::size_t d = 0; d < cfg_.events.deaths; ++d) {
      auto g = groups();
      if (g.size() < 2) {
        log(t, "warning", "death skipped: fewer than two communities");
        continue;
      }
      auto ids = ids_of(g);
      const auto dead = ids[uniform_index(rng_, ids.size())];
      for (NodeId v : g[dead]) comm[v] = pick_other(dead, ids);
      log(t, "death", "community=" + std::to_string(dead) + ";size=" + std::to_string(g[dead].size()));
    }
  }

  void merge_split(std::size_t t) {
    for (std::size_t k = 0; k < cfg_.events.merges; ++k) {
      auto g = groups();
      if (g.size() < 2) {
        log(t, "warning", "merge skipped: fewer than two communities");
        continue;
      }
      auto ids = ids_of(g);
      std::shuffle(ids.begin(), ids.end(), rng_);
      const auto id = next_id_++;
      for (NodeId v : g[ids[0]]) comm[v] = id;
      for (NodeId v : g[ids[1]]) comm[v] = id;
      log(t, "merge", "from=" + std::to_string(ids[0]) + "+" + std::to_string(ids[1]) +
                          ";into=" + std::to_string(id));
    }
    for (std::size_t k = 0; k < cfg_.events.splits; ++k) {
      auto g = groups();
      std::vector<std::uint32_t> ids;
      for (const auto& [id, m] : g)
        if (m.size() >= 4) ids.push_back(id);
      if (ids.empty()) {
        log(t, "warning", "split skipped: no community of size >= 4");
        continue;
      }
      const auto src = ids[uniform_index(rng_, ids.size())];
      NodeSet m = g[src];
      std::shuffle(m.begin(), m.end(), rng_);
      const auto a = next_id_++, b = next_id_++;
      for (std::size_t i = 0; i < m.size(); ++i) comm[m[i]] = i < m.size() / 2 ? a : b;
      log(t, "split", "from=" + std::to_string(src) + ";into=" + std::to_string(a) + "+" +
                          std::to_string(b));
    }
  }

  void hide_appear(std::size_t t) {
    if (!hide_at_) {
      if (cfg_.theta < 3) {
        hide_at_ = appear_at_ = 0;
        log(t, "warning", "hide-appear needs at least three slices");
        return;
      }
      hide_at_ = 1 + uniform_index(rng_, cfg_.theta - 2);
      appear_at_ = *hide_at_ + 1 + uniform_index(rng_, cfg_.theta - 1 - *hide_at_);
    }
    if (t == *hide_at_) {
      auto g = groups();
      if (g.size() <= cfg_.events.hides) {
        log(t, "warning", "hide skipped: not enough communities");
        return;
      }
      auto ids = ids_of(g);
      std::shuffle(ids.begin(), ids.end(), rng_);
      // Members of hidden communities scatter over the remaining ones.
      const std::vector<std::uint32_t> hosts(ids.begin() + static_cast<std::ptrdiff_t>(cfg_.events.hides), ids.end());
      for (std::size_t k = 0; k < cfg_.events.hides; ++k) {
        hidden_[ids[k]] = g[ids[k]];
        for (NodeId v : g[ids[k]]) comm[v] = hosts[uniform_index(rng_, hosts.size())];
        log(t, "hide", "community=" + std::to_string(ids[k]) + ";size=" + std::to_string(g[ids[k]].size()));
      }
    } else if (t == *appear_at_ && !hidden_.empty()) {
      for (const auto& [id, members] : hidden_) {
        for (NodeId v : members) comm[v] = id;
        log(t, "appear", "community=" + std::to_string(id) + ";size=" + std::to_string(members.size()));
      }
      hidden_.clear();
    }
  }

  void expansion_contraction(std::size_t t) {
    const double share = cfg_.events.expansion_pct / 100.0;
    for (std::size_t k = 0; k < cfg_.events.expansions; ++k) {
      auto g = groups();
      if (g.size() < 2) {
        log(t, "warning", "expansion skipped: fewer than two communities");
        continue;
      }
      auto ids = ids_of(g);
      const auto target = ids[uniform_index(rng_, ids.size())];
      const std::size_t want = round_stochastic(share * static_cast<double>(g[target].size()), rng_);
      std::unordered_map<std::uint32_t, std::size_t> size;
      for (const auto& [id, m] : g) size[id] = m.size();
      std::vector<NodeId> pool;
      for (NodeId v = 0; v < comm.size(); ++v)
        if (comm[v] != target && size.count(comm[v])) pool.push_back(v);
      std::shuffle(pool.begin(), pool.end(), rng_);
      std::size_t moved = 0;
      for (NodeId v : pool) {
        if (moved == want) break;
        if (size[comm[v]] <= 2) continue;
        --size[comm[v]];
        comm[v] = target;
        ++moved;
      }
      log(t, "expansion", "community=" + std::to_string(target) + ";moved=" + std::to_string(moved));
    }
    for (std::size_t k = 0; k < cfg_.events.contractions; ++k) {
      auto g = groups();
      if (g.size() < 2) {
        log(t, "warning", "contraction skipped: fewer than two communities");
        continue;
      }
      auto ids = ids_of(g);
      const auto target = ids[uniform_index(rng_, ids.size())];
      NodeSet m = g[target];
      std::shuffle(m.begin(), m.end(), rng_);
      const std::size_t want =
          std::min(round_stochastic(share * static_cast<double>(m.size()), rng_),
                   m.size() >= 2 ? m.size() - 2 : 0);
      for (std::size_t i = 0; i < want; ++i) comm[m[i]] = pick_other(target, ids);
      log(t, "contraction", "community=" + std::to_string(target) + ";moved=" + std::to_string(want));
    }
  }

  void switch_nodes(std::size_t t) {
    auto g = groups();
    if (g.size() < 2) {
      log(t, "warning", "switch skipped: fewer than two communities");
      return;
    }
    auto ids = ids_of(g);
    std::unordered_map<std::uint32_t, std::size_t> size;
    for (const auto& [id, m] : g) size[id] = m.size();
    const std::size_t want =
        round_stochastic(cfg_.events.switch_pct / 100.0 * static_cast<double>(comm.size()), rng_);
    std::vector<NodeId> pool(comm.size());
    for (NodeId v = 0; v < comm.size(); ++v) pool[v] = v;
    std::shuffle(pool.begin(), pool.end(), rng_);
    std::size_t moved = 0;
    for (NodeId v : pool) {
      if (moved == want) break;
      if (size[comm[v]] <= 2) continue;
      const auto to = pick_other(comm[v], ids);
      --size[comm[v]];
      ++size[to];
      comm[v] = to;
      ++moved;
    }
    log(t, "switch", "moved=" + std::to_string(moved));
  }

  const GeneratorConfig& cfg_;
  Rng& rng_;
  std::uint32_t next_id_ = 0;
  std::optional<std::size_t> hide_at_, appear_at_;
  std::map<std::uint32_t, NodeSet> hidden_;
};

// Draws values for `members` from one fresh instance of the distribution.
inline void draw_values(AttributeDistribution h, const AttributeConfig& acfg, const NodeSet& members,
                        std::vector<long long>& out, Rng& rng) {
  const long long lo = acfg.min_value, hi = acfg.max_value;
  auto uniform = [&] { return std::uniform_int_distribution<long long>(lo, hi)(rng); };
  switch (h) {
    case AttributeDistribution::Degenerate: {
      const long long v = uniform();
      for (NodeId m : members) out[m] = v;
      break;
    }
    case AttributeDistribution::Binomial: {
      const long long mode = uniform();
      NodeSet order = members;
      std::shuffle(order.begin(), order.end(), rng);
      const std::size_t main = static_cast<std::size_t>(std::lround(0.7 * static_cast<double>(order.size())));
      const std::size_t below = (order.size() - main) / 2;
      for (std::size_t i = 0; i < order.size(); ++i) {
        long long v = mode;
        if (i >= main) v = (i < main + below) ? mode - 1 : mode + 1;
        out[order[i]] = std::clamp(v, lo, hi);
      }
      break;
    }
    case AttributeDistribution::Power: {
      std::vector<double> w;
      for (long long i = 0; i <= hi - lo; ++i) w.push_back(1.0 / static_cast<double>((i + 1) * (i + 1)));
      std::discrete_distribution<long long> pick(w.begin(), w.end());
      for (NodeId m : members) out[m] = lo + pick(rng);
      break;
    }
    case AttributeDistribution::Uniform:
      for (NodeId m : members) out[m] = uniform();
      break;
  }
}

}  // namespace gen_detail

struct AttributeTable {
  /// values[t][a][v]
  std::vector<std::vector<std::vector<long long>>> values;
  std::vector<NodeSet> resampled;
};

/// Slice 0: one draw per community and attribute. Later slices: each
/// community redraws all attributes of a q% random subset of its members.
inline AttributeTable generate_attributes(const EvolvingCommunityStructure& comms,
                                          const AttributeConfig& acfg, std::uint64_t seed) {
  acfg.validate();
  gen_detail::Rng rng(seed);
  AttributeTable out;
  if (comms.theta() == 0) return out;
  const std::size_t n = comms.partitions[0].node_count();
  std::vector<std::vector<long long>> current(acfg.count, std::vector<long long>(n, acfg.min_value));
  for (std::size_t t = 0; t < comms.theta(); ++t) {
    const auto members = comms.partitions[t].members();
    NodeSet changed;
    for (const auto& group : members) {
      NodeSet chosen = group;
      if (t > 0) {
        std::shuffle(chosen.begin(), chosen.end(), rng);
        const std::size_t k = std::min(
            chosen.size(),
            gen_detail::round_stochastic(acfg.evolution_pct / 100.0 * static_cast<double>(chosen.size()), rng));
        chosen.resize(k);
        std::sort(chosen.begin(), chosen.end());
        changed.insert(changed.end(), chosen.begin(), chosen.end());
      }
      if (chosen.empty()) continue;
      for (std::size_t a = 0; a < acfg.count; ++a)
        gen_detail::draw_values(acfg.distribution, acfg, chosen, current[a], rng);
    }
    std::sort(changed.begin(), changed.end());
    out.resampled.push_back(std::move(changed));
    out.values.push_back(current);
  }
  return out;
}

struct GeneratedNetwork {
  DynamicAttributedNetwork network;
  GroundTruth truth;
};

/// Slice 0 by planted-partition stub matching, then one event step per
/// slice, then attributes over the resulting communities.
inline GeneratedNetwork generate(const GeneratorConfig& cfg, const AttributeConfig& acfg) {
  cfg.validate();
  acfg.validate();
  gen_detail::Rng rng(cfg.seed);
  gen_detail::Evolver ev(cfg, rng);
  ev.init();
  GroundTruth truth;
  std::vector<std::vector<Edge>> slice_edges;
  for (std::size_t t = 0; t < cfg.theta; ++t) {
    if (t > 0) ev.step(t);
    truth.persistent.push_back(ev.comm);
    truth.communities.partitions.push_back(gen_detail::canonical_of(ev.comm));
    slice_edges.push_back(ev.edges);
  }
  truth.events = ev.events;

  auto attrs = generate_attributes(truth.communities, acfg, rng());
  truth.resampled = attrs.resampled;

  std::vector<std::string> labels(cfg.n), names;
  for (NodeId v = 0; v < cfg.n; ++v) labels[v] = std::to_string(v);
  for (std::size_t a = 0; a < acfg.count; ++a) names.push_back("a" + std::to_string(a + 1));
  std::vector<AttrValue> raw;
  raw.reserve(cfg.theta * cfg.n * acfg.count);
  for (std::size_t t = 0; t < cfg.theta; ++t)
    for (NodeId v = 0; v < cfg.n; ++v)
      for (std::size_t a = 0; a < acfg.count; ++a) raw.push_back(AttrValue::of(attrs.values[t][a][v]));
  return {make_network(std::move(labels), std::move(slice_edges), std::move(names), std::move(raw)),
          std::move(truth)};
}

/// The static special case: one slice and its planted partition.
inline std::pair<SliceGraph, Partition> generate_static(GeneratorConfig cfg) {
  cfg.theta = 1;
  AttributeConfig none;
  none.count = 0;
  auto g = generate(cfg, none);
  return {g.network.slices[0], g.truth.communities.partitions[0]};
}

/// edges.csv, attrs.csv, communities.csv and events.log under `dir`.
inline void write_generated(const GeneratedNetwork& g, const std::string& dir) {
  std::filesystem::create_directories(dir);
  save_network(g.network, dir + "/edges.csv", dir + "/attrs.csv");
  auto comm = detail::open_output(dir + "/communities.csv");
  comm << "slice,node,community\n";
  for (std::size_t t = 0; t < g.truth.communities.theta(); ++t)
    for (NodeId v = 0; v < g.network.n(); ++v)
      comm << t << ',' << detail::csv_field(g.network.labels[v]) << ','
           << g.truth.communities.partitions[t][v] << '\n';
  auto log = detail::open_output(dir + "/events.log");
  log << "slice,type,params\n";
  for (const auto& e : g.truth.events) log << e.slice << ',' << e.type << ',' << e.params << '\n';
}

}  // namespace comseq
