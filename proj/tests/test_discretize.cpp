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

#include <fstream>
#include <set>

#include "oracles/sequence_oracle.hpp"
#include "test_util.hpp"

using namespace comseq;
using namespace testutil;

namespace {

std::vector<std::vector<double>> rows_of(const PointSet& p) {
  std::vector<std::vector<double>> out;
  for (std::size_t i = 0; i < p.size(); ++i) out.emplace_back(p[i].begin(), p[i].end());
  return out;
}

/// Tables with `n` nodes in one slice; only the community columns vary.
std::vector<MeasureTable> community_tables(const std::vector<double>& embeddedness) {
  MeasureTable t;
  const std::size_t n = embeddedness.size();
  for (auto* col : {&t.degree, &t.internal_degree, &t.transitivity, &t.eccentricity, &t.betweenness,
                    &t.closeness, &t.eigenvector, &t.within_module_degree, &t.participation})
    col->assign(n, 0.0);
  t.embeddedness = embeddedness;
  return {t};
}

DynamicAttributedNetwork attr_net(std::vector<std::string> raw) {
  std::vector<AttrValue> vals;
  for (auto& r : raw) vals.push_back({r, std::atof(r.c_str()), false});
  std::vector<std::string> labels;
  for (std::size_t v = 0; v < raw.size(); ++v) labels.push_back("v" + std::to_string(v));
  return make_network(labels, {{}}, {"x"}, vals);
}

}  // namespace

TEST(KMeans, TwoObviousGroupsMatchExhaustiveSplit) {
  std::vector<double> xs{0, 0.1, 0.2, 10, 10.1, 10.2};
  auto r = kmeans(PointSet::from_1d(xs), 2, 42);
  std::vector<int> side;
  const double best = oracle::best_two_split_sse(xs, &side);
  EXPECT_NEAR(r.sse, best, 1e-12);
  for (std::size_t i = 0; i < xs.size(); ++i)
    EXPECT_EQ(r.labels[i] == r.labels[0], side[i] == side[0]) << "point " << i;
  EXPECT_EQ(r.labels[0], r.labels[2]);
  EXPECT_NE(r.labels[2], r.labels[3]);
}

TEST(KMeans, RandomOneDimensionalSplitsAreOptimal) {
  std::mt19937_64 rng(2);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<double> xs;
    const double gap = 5 + rep;
    for (int i = 0; i < 5; ++i) xs.push_back(std::uniform_real_distribution<double>(0, 1)(rng));
    for (int i = 0; i < 5; ++i) xs.push_back(gap + std::uniform_real_distribution<double>(0, 1)(rng));
    EXPECT_NEAR(kmeans(PointSet::from_1d(xs), 2, rep).sse, oracle::best_two_split_sse(xs), 1e-9);
  }
}

TEST(KMeans, OneClusterPerPoint) {
  auto r = kmeans(PointSet::from_1d({3, 1, 4, 1.5, 9}), 5, 1);
  EXPECT_EQ(r.k, 5u);
  EXPECT_NEAR(r.sse, 0, 1e-15);
  EXPECT_EQ(std::set<std::size_t>(r.labels.begin(), r.labels.end()).size(), 5u);
}

TEST(KMeans, IdenticalPointsReduceK) {
  auto r = kmeans(PointSet::from_1d({2, 2, 2, 2}), 2, 1);
  EXPECT_EQ(r.k, 1u);
  EXPECT_FALSE(r.warnings.empty());
  EXPECT_THROW(kmeans(PointSet::from_1d({1}), 2, 1), std::invalid_argument);
}

TEST(KMeans, DeterministicForSeed) {
  std::mt19937_64 rng(4);
  PointSet p{2, {}};
  for (int i = 0; i < 200; ++i) p.data.push_back(std::uniform_real_distribution<double>(0, 1)(rng));
  auto a = kmeans(p, 4, 9), b = kmeans(p, 4, 9);
  EXPECT_EQ(a.labels, b.labels);
  EXPECT_EQ(a.centroids.data, b.centroids.data);
}

TEST(Silhouette, SeparatedBlobsScoreHigh) {
  auto p = PointSet::from_1d({0, 0.1, 0.2, 10, 10.1, 10.2});
  std::vector<std::size_t> labels{0, 0, 0, 1, 1, 1};
  const double s = silhouette(p, labels);
  EXPECT_GT(s, 0.9);
  EXPECT_NEAR(s, oracle::silhouette(rows_of(p), labels), 1e-12);
}

TEST(Silhouette, InterleavedBlobsScoreNearZero) {
  std::vector<double> xs;
  std::vector<std::size_t> labels;
  for (int i = 0; i < 40; ++i) {
    xs.push_back(i * 0.25);
    labels.push_back(i % 2);
  }
  auto p = PointSet::from_1d(xs);
  const double s = silhouette(p, labels);
  EXPECT_LT(std::abs(s), 0.1);
  EXPECT_NEAR(s, oracle::silhouette(rows_of(p), labels), 1e-12);
}

TEST(Silhouette, SingletonsScoreZero) {
  EXPECT_EQ(silhouette(PointSet::from_1d({1, 2, 3}), {0, 1, 2}), 0.0);
  EXPECT_THROW(silhouette(PointSet::from_1d({1, 2}), {0, 0}), std::invalid_argument);
}

TEST(Silhouette, MatchesFormulaOnRandomLabelings) {
  std::mt19937_64 rng(6);
  for (int rep = 0; rep < 10; ++rep) {
    PointSet p{3, {}};
    std::vector<std::size_t> labels;
    for (int i = 0; i < 30; ++i) {
      for (int d = 0; d < 3; ++d) p.data.push_back(std::uniform_real_distribution<double>(0, 1)(rng));
      labels.push_back(i % 3 == 0 && i < 3 ? 2 : std::uniform_int_distribution<std::size_t>(0, 2)(rng));
    }
    EXPECT_NEAR(silhouette(p, labels), oracle::silhouette(rows_of(p), labels), 1e-12);
  }
}

TEST(MeasureGroups, PartitionTheNineMeasures) {
  std::multiset<std::string> all;
  for (auto g : kAllGroups)
    for (auto& c : group_columns(g)) all.insert(c);
  std::multiset<std::string> want{"degree",      "transitivity", "embeddedness", "within_module_degree",
                                  "participation", "eccentricity", "betweenness", "closeness",
                                  "eigenvector"};
  EXPECT_EQ(all, want);
}

TEST(ClusterGroup, EmbeddedPopulationsGetHighAndLowLabels) {
  std::vector<double> e;
  for (int i = 0; i < 20; ++i) e.push_back(1.0 - 0.002 * i);
  for (int i = 0; i < 20; ++i) e.push_back(0.002 * i);
  auto gc = cluster_measure_group(community_tables(e), MeasureGroup::Community);
  EXPECT_EQ(gc.labeling.k, 2u);
  std::set<std::string> labels(gc.labeling.labels.begin(), gc.labeling.labels.end());
  EXPECT_TRUE(labels.count("high embeddedness"));
  EXPECT_TRUE(labels.count("low embeddedness"));
  EXPECT_EQ(gc.labeling.labels[gc.values[0]], "high embeddedness");
  EXPECT_EQ(gc.labeling.labels[gc.values[39]], "low embeddedness");
}

TEST(ClusterGroup, ConstantColumnsCollapseToOneCluster) {
  auto gc = cluster_measure_group(community_tables(std::vector<double>(10, 0.5)), MeasureGroup::Community);
  EXPECT_EQ(gc.labeling.k, 1u);
  EXPECT_FALSE(gc.labeling.warnings.empty());
  EXPECT_EQ(gc.values, std::vector<std::size_t>(10, 0));
}

TEST(ClusterGroup, RejectsKRangeOutsideTwoToTen) {
  ClusterOptions o;
  o.k_lo = 1;
  EXPECT_THROW(cluster_measure_group(community_tables({0, 1}), MeasureGroup::Community, o), ValidationError);
  o.k_lo = 2;
  o.k_hi = 11;
  EXPECT_THROW(cluster_measure_group(community_tables({0, 1}), MeasureGroup::Community, o), ValidationError);
}

TEST(ClusterGroup, CombinedLabelsOnGeneratedNetwork) {
  GeneratorConfig cfg;
  cfg.n = 300;
  cfg.theta = 2;
  auto g = generate(cfg, {});
  auto tables = compute_all_measures(g.network, g.truth.communities);
  auto a = cluster_measure_group(tables, MeasureGroup::Centrality);
  auto b = cluster_measure_group(tables, MeasureGroup::Centrality);
  EXPECT_EQ(a.values, b.values);
  EXPECT_EQ(a.labeling.labels, b.labeling.labels);
  EXPECT_GE(a.labeling.k, 2u);
  EXPECT_LE(a.labeling.k, 8u);
  std::set<std::string> unique(a.labeling.labels.begin(), a.labeling.labels.end());
  EXPECT_EQ(unique.size(), a.labeling.labels.size());
  // Labels name centroid extremes, several columns joined by commas.
  bool multi = false;
  for (auto& l : a.labeling.labels) multi |= l.find(", ") != std::string::npos;
  EXPECT_TRUE(multi);
}

TEST(Binning, IntervalConventions) {
  BinningRule r{"papers", {1, 5, 10, 20, 50, kInfinity}};
  EXPECT_EQ(r.bin(7), 1u);
  EXPECT_EQ(r.bin(5), 0u);
  EXPECT_EQ(r.bin(1), 0u);
  EXPECT_EQ(r.bin(1000), 4u);
  EXPECT_THROW(r.bin(0.5), ValidationError);
  EXPECT_EQ(r.bin_label(0), "[1;5]");
  EXPECT_EQ(r.bin_label(1), "]5;10]");
  EXPECT_EQ(r.bin_label(4), "]50;inf[");
  EXPECT_THROW((BinningRule{"x", {3, 3}}).validate(), ValidationError);
}

TEST(Binning, Monotone) {
  BinningRule r{"x", {-kInfinity, -2, 0, 3.5, 10}};
  double prev = -100;
  for (double x = -100; x <= 10; x += 0.37) {
    EXPECT_LE(r.bin(prev), r.bin(x));
    prev = x;
  }
}

TEST(Binning, NaProducesNoItem) {
  auto net = attr_net({"3", "NA", "12"});
  auto cols = bin_attributes(net, {{"x", {0, 5, 20}}});
  ASSERT_EQ(cols.size(), 1u);
  EXPECT_EQ(cols[0].values, (std::vector<std::int32_t>{0, DiscreteDescriptorTable::kAbsent, 1}));
  std::vector<std::string> labels{"a", "b", "c"};
  auto net2 = make_network(labels, {{{0, 1}}}, {"x"}, {AttrValue::of(3), AttrValue::na(), AttrValue::of(12)});
  auto tab = build_descriptor_table(net2, {}, TopologyMode::None, {{"x", {0, 5, 20}}}).table;
  Partition p = partition_of({0, 0, 1});
  auto db = build_database(tab, {{p}});
  ASSERT_EQ(db.rows[1][0].size(), 1u);
  EXPECT_TRUE(db.rows[1][0][0].is_community());
}

TEST(Binning, OutOfRangeAndRealWithoutRule) {
  EXPECT_THROW(bin_attributes(attr_net({"3", "30"}), {{"x", {0, 5, 20}}}), ValidationError);
  EXPECT_THROW(bin_attributes(attr_net({"0.5", "1.25"}), {}), ValidationError);
  auto cat = bin_attributes(attr_net({"10", "9", "10"}), {});
  EXPECT_EQ(cat[0].domain.values, (std::vector<std::string>{"9", "10"}));
  EXPECT_EQ(cat[0].values, (std::vector<std::int32_t>{1, 0, 1}));
}

TEST(Binning, ReadsBinsJson) {
  auto d = scratch("bins_json");
  std::ofstream(d + "/bins.json") << R"({"papers": [1, 5, 10, 20, 50, "inf"], "age": ["-inf", 0, 99]})";
  auto rules = read_bins_json(d + "/bins.json");
  ASSERT_EQ(rules.size(), 2u);
  for (auto& r : rules)
    if (r.attribute == "papers") {
      EXPECT_TRUE(std::isinf(r.boundaries.back()));
    }
  std::ofstream(d + "/bad.json") << R"({"papers": [5, 1]})";
  EXPECT_THROW(read_bins_json(d + "/bad.json"), ValidationError);
}

TEST(DescriptorTable, ValueIdsDenseAndRoundTrip) {
  auto t = load_toy();
  auto tables = compute_all_measures(t.net, t.comms);
  for (auto mode : {TopologyMode::Clustered, TopologyMode::Degree, TopologyMode::None}) {
    auto built = build_descriptor_table(t.net, tables, mode, {});
    const auto& tab = built.table;
    for (std::size_t d = 0; d < tab.descriptors.size(); ++d) {
      std::set<std::int32_t> used;
      for (std::size_t s = 0; s < tab.theta; ++s)
        for (NodeId v = 0; v < tab.n; ++v) used.insert(tab.at(s, v, d));
      EXPECT_EQ(used.size(), tab.descriptors[d].values.size()) << tab.descriptors[d].name;
      EXPECT_EQ(*used.rbegin() + 1, static_cast<std::int32_t>(used.size()));
    }
    auto dir = scratch("discrete_rt");
    write_discrete(tab, t.net.labels, dir + "/d.csv", dir + "/d.json");
    EXPECT_EQ(read_discrete(dir + "/d.csv", dir + "/d.json", t.net.labels), tab);
  }
}
