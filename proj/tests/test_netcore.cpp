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

#include "test_util.hpp"

using namespace comseq;
using namespace testutil;

namespace {

void write_file(const std::string& path, const std::string& body) {
  std::ofstream(path) << body;
}

struct Files {
  std::string edges, attrs;
};

Files pair_of(const std::string& dir, const std::string& edges, const std::string& attrs) {
  Files f{dir + "/edges.csv", dir + "/attrs.csv"};
  write_file(f.edges, edges);
  write_file(f.attrs, attrs);
  return f;
}

}  // namespace

TEST(Load, MinimalTwoSliceNetwork) {
  auto d = scratch("netcore_min");
  auto f = pair_of(d, "slice,source,target\n0,a,b\n1,a,b\n",
                   "slice,node,attribute,value\n0,a,x,1\n0,b,x,2\n1,a,x,1\n1,b,x,2\n");
  auto net = load_network(f.edges, f.attrs);
  EXPECT_EQ(net.n(), 2u);
  EXPECT_EQ(net.theta(), 2u);
  EXPECT_EQ(net.slices[1].edge_count(), 1u);
}

TEST(Load, ToyMatchesTableValues) {
  auto net = load_network(toy("edges.csv"), toy("attrs.csv"));
  ASSERT_EQ(net.n(), 7u);
  ASSERT_EQ(net.theta(), 3u);
  // a1 and a2 per node across the three slices.
  const int a1[7][3] = {{1, 1, 2}, {1, 1, 2}, {1, 1, 2}, {1, 1, 1}, {2, 2, 2}, {3, 3, 3}, {2, 2, 2}};
  const int a2[7][3] = {{1, 2, 2}, {2, 3, 1}, {3, 3, 3}, {5, 1, 1}, {2, 1, 1}, {2, 1, 2}, {2, 1, 1}};
  const auto i1 = *net.schema.index_of("a1"), i2 = *net.schema.index_of("a2");
  for (int v = 0; v < 7; ++v) {
    auto id = node(net, "n" + std::to_string(v + 1));
    for (SliceIndex t = 0; t < 3; ++t) {
      EXPECT_EQ(net.value(t, id, i1).number, a1[v][t]) << "n" << v + 1 << " slice " << t;
      EXPECT_EQ(net.value(t, id, i2).number, a2[v][t]) << "n" << v + 1 << " slice " << t;
    }
  }
}

TEST(Load, RejectsSelfLoop) {
  auto d = scratch("netcore_loop");
  auto f = pair_of(d, "slice,source,target\n0,a,a\n", "slice,node,attribute,value\n0,a,x,1\n");
  EXPECT_THROW(load_network(f.edges, f.attrs), ValidationError);
}

TEST(Load, ReportsLineOfMalformedRow) {
  auto d = scratch("netcore_bad");
  auto f = pair_of(d, "slice,source,target\n0,a,b\nzero,a,b\n",
                   "slice,node,attribute,value\n0,a,x,1\n0,b,x,1\n");
  try {
    load_network(f.edges, f.attrs);
    FAIL() << "expected a validation error";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find(":3:"), std::string::npos) << e.what();
  }
}

TEST(Load, RejectsDuplicateCell) {
  auto d = scratch("netcore_dup");
  auto f = pair_of(d, "slice,source,target\n0,a,b\n",
                   "slice,node,attribute,value\n0,a,x,1\n0,a,x,2\n0,b,x,1\n");
  EXPECT_THROW(load_network(f.edges, f.attrs), ValidationError);
}

TEST(Load, RejectsEndpointWithoutAttributes) {
  auto d = scratch("netcore_noattr");
  auto f = pair_of(d, "slice,source,target\n0,a,c\n", "slice,node,attribute,value\n0,a,x,1\n");
  EXPECT_THROW(load_network(f.edges, f.attrs), ValidationError);
}

TEST(Load, RejectsMissingCellButAcceptsNA) {
  auto d = scratch("netcore_missing");
  auto f = pair_of(d, "slice,source,target\n0,a,b\n1,a,b\n",
                   "slice,node,attribute,value\n0,a,x,1\n0,b,x,1\n1,a,x,1\n");
  EXPECT_THROW(load_network(f.edges, f.attrs), ValidationError);
  auto g = pair_of(d, "slice,source,target\n0,a,b\n1,a,b\n",
                   "slice,node,attribute,value\n0,a,x,1\n0,b,x,1\n1,a,x,1\n1,b,x,NA\n");
  auto net = load_network(g.edges, g.attrs);
  EXPECT_TRUE(net.value(1, node(net, "b"), 0).absent);
  EXPECT_TRUE(net.schema.sparse[0]);
}

TEST(Load, ThetaIsOnePlusMaxSlice) {
  auto d = scratch("netcore_theta");
  auto f = pair_of(d, "slice,source,target\n0,a,b\n",
                   "slice,node,attribute,value\n0,a,x,1\n0,b,x,1\n1,a,x,1\n1,b,x,1\n2,a,x,1\n2,b,x,1\n");
  auto net = load_network(f.edges, f.attrs);
  EXPECT_EQ(net.theta(), 3u);
  EXPECT_EQ(net.slices.size(), net.theta());
  EXPECT_EQ(net.slices[2].edge_count(), 0u);
}

TEST(Load, QuotedLabelsSurviveRoundTrip) {
  auto d = scratch("netcore_quote");
  auto f = pair_of(d, "slice,source,target\n0,\"x, y\",b\n",
                   "slice,node,attribute,value\n0,\"x, y\",k,red\n0,b,k,blue\n");
  auto net = load_network(f.edges, f.attrs);
  EXPECT_EQ(net.labels[0], "x, y");
  EXPECT_EQ(net.schema.kinds[0], AttributeKind::Categorical);
  save_network(net, d + "/e2.csv", d + "/a2.csv");
  EXPECT_EQ(load_network(d + "/e2.csv", d + "/a2.csv"), net);
}

TEST(RemoveIsolates, DropsOnlyAlwaysIsolatedNodes) {
  std::vector<std::string> labels{"a", "b", "c", "d"};
  std::vector<AttrValue> vals;
  for (int i = 0; i < 3 * 4; ++i) vals.push_back(AttrValue::of(i));
  // d is isolated everywhere; c only at slice 0.
  auto net = make_network(labels, {{{0, 1}}, {{0, 2}}, {{1, 2}}}, {"x"}, vals);
  auto out = remove_isolates(net);
  EXPECT_EQ(out.n(), 3u);
  EXPECT_EQ(out.labels, (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_EQ(out.value(2, 2, 0), net.value(2, 2, 0));
  EXPECT_TRUE(out.slices[1].has_edge(0, 2));
}

TEST(RemoveIsolates, IdentityWithoutIsolates) {
  auto net = load_network(toy("edges.csv"), toy("attrs.csv"));
  EXPECT_EQ(remove_isolates(net), net);
}

TEST(RoundTrip, SaveThenLoadIsIdentical) {
  auto net = load_network(toy("edges.csv"), toy("attrs.csv"));
  auto d = scratch("netcore_rt");
  save_network(net, d + "/e.csv", d + "/a.csv");
  auto back = load_network(d + "/e.csv", d + "/a.csv");
  EXPECT_EQ(back, net);
  for (NodeId v = 0; v < back.n(); ++v) EXPECT_LT(v, back.n());
}

TEST(RoundTrip, GeneratedNetworkRoundTrips) {
  GeneratorConfig cfg;
  cfg.n = 200;
  cfg.theta = 3;
  auto g = generate(cfg, {});
  auto d = scratch("netcore_gen");
  save_network(g.network, d + "/e.csv", d + "/a.csv");
  EXPECT_EQ(load_network(d + "/e.csv", d + "/a.csv"), g.network);
}

TEST(SliceGraph, StoresEdgesOnceWithSmallerEndpointFirst) {
  auto g = graph(3, {{2, 0}, {0, 2}, {1, 2}});
  ASSERT_EQ(g.edge_count(), 2u);
  for (auto [u, v] : g.edges()) EXPECT_LT(u, v);
  EXPECT_THROW(graph(3, {{1, 1}}), ValidationError);
  EXPECT_THROW(graph(3, {{1, 5}}), ValidationError);
}

TEST(NodeMap, WritesIndexAndLabel) {
  auto net = load_network(toy("edges.csv"), toy("attrs.csv"));
  auto d = scratch("netcore_map");
  write_node_map(net, d + "/nodes.map.csv");
  std::ifstream in(d + "/nodes.map.csv");
  std::string header, first;
  std::getline(in, header);
  std::getline(in, first);
  EXPECT_EQ(header, "index,label");
  EXPECT_EQ(first, "0,n1");
}
