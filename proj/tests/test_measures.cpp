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


#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numeric>

#include "oracles/graph_oracle.hpp"
#include "test_util.hpp"

using namespace comseq;
using namespace testutil;

namespace {

bool connected(const SliceGraph& g) {
  std::vector<bool> seen(g.node_count(), false);
  std::vector<NodeId> stack{0};
  seen[0] = true;
  std::size_t reach = 0;
  while (!stack.empty()) {
    auto u = stack.back();
    stack.pop_back();
    ++reach;
    for (auto w : g.neighbors(u))
      if (!seen[w]) {
        seen[w] = true;
        stack.push_back(w);
      }
  }
  return reach == g.node_count();
}

Partition one_community(std::size_t n) { return partition_of(std::vector<std::size_t>(n, 0)); }

void expect_near_all(const std::vector<double>& got, const std::vector<double>& want, double tol) {
  ASSERT_EQ(got.size(), want.size());
  for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], want[i], tol) << "index " << i;
}

}  // namespace

TEST(Degrees, CliqueInOneCommunity) {
  auto d = degrees(clique(3), one_community(3));
  EXPECT_EQ(d.degree, (std::vector<double>{2, 2, 2}));
  EXPECT_EQ(d.internal, (std::vector<double>{2, 2, 2}));
}

TEST(Degrees, CrossEdgeAddsNoInternalDegree) {
  auto d = degrees(graph(2, {{0, 1}}), partition_of({0, 1}));
  EXPECT_EQ(d.degree, (std::vector<double>{1, 1}));
  EXPECT_EQ(d.internal, (std::vector<double>{0, 0}));
}

TEST(Degrees, ToyDegreesMatchFixture) {
  auto toy_net = load_toy();
  // deg per node and slice, as listed in the example's node sequences.
  const int want[7][3] = {{1, 1, 2}, {2, 1, 2}, {2, 3, 3}, {4, 2, 4}, {2, 1, 3}, {2, 2, 3}, {3, 2, 3}};
  for (SliceIndex t = 0; t < 3; ++t) {
    auto d = degrees(toy_net.net.slices[t], toy_net.comms.partitions[t]);
    for (NodeId v = 0; v < 7; ++v) EXPECT_EQ(d.degree[v], want[v][t]) << "node " << v << " slice " << t;
  }
  EXPECT_EQ(degrees(toy_net.net.slices[0], toy_net.comms.partitions[0]).degree[node(toy_net.net, "n4")], 4);
}

TEST(Transitivity, CanonicalGraphs) {
  expect_near_all(local_transitivity(clique(3)), {1, 1, 1}, 0);
  expect_near_all(local_transitivity(path_graph(3)), {0, 0, 0}, 0);
  // K4 minus edge 0-1: nodes 2 and 3 see both endpoints of the missing edge.
  auto g = graph(4, {{0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
  auto t = local_transitivity(g);
  auto o = oracle::transitivity(g);
  EXPECT_NEAR(t[2], 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(o[2], 2.0 / 3.0, 1e-12);
  expect_near_all(t, o, 1e-12);
}

TEST(PathMetrics, PathOfThree) {
  auto p = shortest_path_metrics(path_graph(3));
  expect_near_all(p.betweenness, {0, 1, 0}, 1e-12);
  expect_near_all(p.eccentricity, {2, 1, 2}, 1e-12);
  expect_near_all(p.closeness, {1.0 / 3, 1.0 / 2, 1.0 / 3}, 1e-12);
  auto o = oracle::paths(path_graph(3));
  expect_near_all(o.betweenness, {0, 1, 0}, 1e-12);
  expect_near_all(o.closeness, {1.0 / 3, 1.0 / 2, 1.0 / 3}, 1e-12);
}

TEST(PathMetrics, CliqueAndStar) {
  expect_near_all(shortest_path_metrics(clique(3)).betweenness, {0, 0, 0}, 1e-12);
  auto star = shortest_path_metrics(star_graph(3));
  EXPECT_NEAR(star.betweenness[0], 3.0, 1e-12);
  EXPECT_NEAR(oracle::paths(star_graph(3)).betweenness[0], 3.0, 1e-12);
}

TEST(PathMetrics, DisconnectedGraphUsesComponents) {
  // Path 0-1-2 plus isolated 3 and edge 4-5.
  auto g = graph(6, {{0, 1}, {1, 2}, {4, 5}});
  auto p = shortest_path_metrics(g);
  EXPECT_EQ(p.eccentricity[0], 2);
  EXPECT_EQ(p.eccentricity[3], 0);
  EXPECT_EQ(p.closeness[3], 0);
  EXPECT_NEAR(p.closeness[4], 1.0, 1e-12);
  EXPECT_NEAR(p.betweenness[1], 1.0, 1e-12);
}

TEST(PathMetrics, MatchNaiveEnumerationOnRandomGraphs) {
  std::mt19937_64 rng(7);
  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(2, 30)(rng);
    const double p = std::uniform_real_distribution<double>(0.05, 0.5)(rng);
    auto g = random_graph(n, p, rng);
    auto got = shortest_path_metrics(g);
    auto want = oracle::paths(g);
    expect_near_all(got.betweenness, want.betweenness, 1e-9);
    expect_near_all(got.closeness, want.closeness, 1e-9);
    expect_near_all(got.eccentricity, want.eccentricity, 1e-9);
    expect_near_all(local_transitivity(g), oracle::transitivity(g), 1e-12);
  }
}

TEST(Eigenvector, CanonicalGraphs) {
  expect_near_all(eigenvector_centrality(clique(3)).values, {1, 1, 1}, 1e-9);
  auto star = eigenvector_centrality(star_graph(3));
  EXPECT_TRUE(star.converged);
  const double leaf = 1.0 / std::sqrt(3.0);
  expect_near_all(star.values, {1, leaf, leaf, leaf}, 1e-7);
  expect_near_all(oracle::dominant_eigenvector(star_graph(3)), {1, leaf, leaf, leaf}, 1e-9);
  expect_near_all(eigenvector_centrality(graph(4, {})).values, {0, 0, 0, 0}, 0);
}

TEST(Eigenvector, FlagsNonConvergence) {
  auto r = eigenvector_centrality(path_graph(20), 1e-15, 3);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.values.size(), 20u);
  EXPECT_THROW(eigenvector_centrality(path_graph(3), 0.0), std::invalid_argument);
}

TEST(Eigenvector, MatchesDenseSolverOnConnectedGraphs) {
  std::mt19937_64 rng(11);
  int checked = 0;
  while (checked < 20) {
    auto g = random_graph(std::uniform_int_distribution<std::size_t>(3, 25)(rng), 0.3, rng);
    if (!connected(g)) continue;
    expect_near_all(eigenvector_centrality(g, 1e-12, 100000).values, oracle::dominant_eigenvector(g), 1e-6);
    ++checked;
  }
}

TEST(Eigenvector, PermutationEquivariant) {
  std::mt19937_64 rng(3);
  auto g = random_graph(15, 0.3, rng);
  std::vector<NodeId> perm(15);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<Edge> moved;
  for (auto [u, v] : g.edges()) moved.emplace_back(perm[u], perm[v]);
  auto a = eigenvector_centrality(g).values;
  auto b = eigenvector_centrality(graph(15, moved)).values;
  for (NodeId v = 0; v < 15; ++v) EXPECT_NEAR(a[v], b[perm[v]], 1e-8);
}

TEST(CommunityRoles, ParticipationCases) {
  // Node 0 with neighbors 1,2 in its community and 3,4 elsewhere.
  auto g = graph(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}});
  auto r = community_role_measures(g, partition_of({0, 0, 0, 1, 1}));
  EXPECT_NEAR(r.participation[0], 0.5, 1e-12);
  EXPECT_NEAR(r.embeddedness[0], 0.5, 1e-12);
  auto all_in = community_role_measures(clique(4), one_community(4));
  expect_near_all(all_in.participation, {0, 0, 0, 0}, 0);
}

TEST(CommunityRoles, WithinModuleDegreeUsesPopulationStd) {
  // Path 0-1-2 inside one community: internal degrees (1,2,1).
  auto r = community_role_measures(path_graph(3), one_community(3));
  const double s = std::sqrt(2.0);
  expect_near_all(r.within_module_degree, {-1 / s, s, -1 / s}, 1e-12);
  // Equal internal degrees give z = 0.
  expect_near_all(community_role_measures(clique(3), one_community(3)).within_module_degree, {0, 0, 0}, 0);
}

TEST(CommunityRoles, IsolatedNodeConventions) {
  auto r = community_role_measures(graph(3, {{0, 1}}), partition_of({0, 0, 1}));
  EXPECT_EQ(r.participation[2], 0);
  EXPECT_EQ(r.embeddedness[2], 0);
  EXPECT_EQ(shortest_path_metrics(graph(3, {{0, 1}})).closeness[2], 0);
}

TEST(CommunityRoles, InvariantsOnRandomGraphs) {
  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 30; ++rep) {
    const std::size_t n = 25;
    auto g = random_graph(n, 0.2, rng);
    std::vector<std::size_t> raw(n);
    for (auto& c : raw) c = std::uniform_int_distribution<std::size_t>(0, 3)(rng);
    auto part = partition_of(raw);
    auto d = degrees(g, part);
    auto r = community_role_measures(g, part);
    for (NodeId v = 0; v < n; ++v) {
      // Community degrees partition the neighborhood.
      std::map<CommunityId, double> per;
      for (auto w : g.neighbors(v)) per[part[w]] += 1;
      double sum = 0, sq = 0;
      for (auto& [c, k] : per) sum += k, sq += (k / d.degree[v]) * (k / d.degree[v]);
      EXPECT_EQ(sum, d.degree[v]);
      EXPECT_GE(d.degree[v], d.internal[v]);
      EXPECT_NEAR(r.embeddedness[v], d.degree[v] > 0 ? d.internal[v] / d.degree[v] : 0.0, 1e-12);
      EXPECT_NEAR(r.participation[v], d.degree[v] > 0 ? 1 - sq : 0.0, 1e-12);
      EXPECT_GE(r.participation[v], 0);
      EXPECT_LT(r.participation[v], 1);
    }
    for (const auto& members : part.members()) {
      double mean = 0, var = 0, raw_mean = 0, raw_var = 0;
      for (auto v : members) mean += r.within_module_degree[v], raw_mean += d.internal[v];
      mean /= members.size();
      raw_mean /= members.size();
      for (auto v : members) {
        var += (r.within_module_degree[v] - mean) * (r.within_module_degree[v] - mean);
        raw_var += (d.internal[v] - raw_mean) * (d.internal[v] - raw_mean);
      }
      var /= members.size();
      EXPECT_NEAR(mean, 0, 1e-9);
      if (raw_var > 1e-12) {
        EXPECT_NEAR(var, 1, 1e-9);
      }
    }
  }
}

TEST(MeasureTable, InvariantsAndCsvRoundTrip) {
  auto t = load_toy();
  auto tables = compute_all_measures(t.net, t.comms);
  ASSERT_EQ(tables.size(), 3u);
  for (const auto& m : tables)
    for (NodeId v = 0; v < 7; ++v) {
      EXPECT_GE(m.degree[v], m.internal_degree[v]);
      EXPECT_GE(m.transitivity[v], 0);
      EXPECT_LE(m.transitivity[v], 1);
      EXPECT_GE(m.eigenvector[v], 0);
      EXPECT_LE(m.eigenvector[v], 1);
    }
  auto d = scratch("measures_csv");
  write_measures_csv(tables, t.net.labels, d + "/measures.csv");
  auto back = read_measures_csv(d + "/measures.csv", t.net.labels, 3);
  for (std::size_t s = 0; s < 3; ++s)
    for (const char* col : {"degree", "betweenness", "closeness", "eigenvector", "participation"})
      expect_near_all(back[s].column(col), tables[s].column(col), 1e-8);
  std::ifstream in(d + "/measures.csv");
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header,
            "slice,node,degree,internal_degree,transitivity,eccentricity,betweenness,closeness,"
            "eigenvector,within_module_degree,participation,embeddedness");
}
