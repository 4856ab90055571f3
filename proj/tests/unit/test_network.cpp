#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "json.hpp"
#include "madd/network.hpp"
#include "madd/rng.hpp"
#include "test_support.hpp"

using namespace madd;
using madd::testing::make_profile;

namespace {

// `n` regular agents in one community with heavy-tailed follower counts and
// SI proportional to followers.
std::vector<AgentProfile> community_of(std::size_t n, std::uint64_t seed) {
  std::vector<AgentProfile> out;
  Substream rng(seed);
  double total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    auto p = make_profile("a" + std::to_string(i), AgentKind::regular, 1);
    p.follower_count = static_cast<std::int64_t>(30.0 * std::pow(1.0 - rng.uniform(), -1.0 / 1.6));
    total += static_cast<double>(p.follower_count);
    out.push_back(p);
  }
  for (auto& p : out) p.influence[0] = static_cast<double>(p.follower_count) / total;
  return out;
}

CommunityIndex everyone(std::size_t n) {
  CommunityIndex idx;
  idx.members.assign(1, {});
  for (std::size_t i = 0; i < n; ++i) idx.members[0].push_back(i);
  return idx;
}

PropagationNetwork graph_from(std::size_t n, const std::vector<Edge>& edges) {
  std::vector<AgentProfile> profiles;
  for (std::size_t i = 0; i < n; ++i)
    profiles.push_back(make_profile("n" + std::to_string(i), AgentKind::regular, 1));
  return madd::testing::make_world(profiles, edges).network;
}

}  // namespace

TEST(AssignCommunities, ThresholdRuleAndFallback) {
  auto a = make_profile("a", AgentKind::regular, 6);
  a.interest = {9, 3, 8, 2, 1, 1};
  auto b = make_profile("b", AgentKind::regular, 6);
  b.interest = {5, 5, 5, 5, 5, 5};
  auto bot = make_profile("m", AgentKind::malicious_bot, 6, 4);
  const std::vector<AgentProfile> profiles{a, b, bot};
  const auto idx = assign_communities(profiles, 8.0);
  EXPECT_TRUE(idx.contains(0, 0));
  EXPECT_TRUE(idx.contains(2, 0));
  EXPECT_FALSE(idx.contains(1, 0));
  EXPECT_TRUE(idx.contains(0, 1));
  for (std::size_t j = 1; j < 6; ++j) EXPECT_FALSE(idx.contains(j, 1));
  EXPECT_TRUE(idx.contains(4, 2));
  EXPECT_EQ(idx.members[4].size(), 1u);

  const auto all = assign_communities(std::vector<AgentProfile>{a, b}, 1.0);
  for (std::size_t j = 0; j < 6; ++j) EXPECT_EQ(all.members[j].size(), 2u);
}

TEST(BuildNetwork, EdgeCountByConstruction) {
  const auto profiles = community_of(10, 1);
  SimulationParams params;
  params.m0 = 5;
  params.m = 2;
  const auto net = build_network(profiles, everyone(10), params, 3);
  EXPECT_EQ(net.edges.size(), 10u + 5u * 2u);

  const auto pair = community_of(2, 1);
  params.m0 = 2;
  params.m = 1;
  const auto two = build_network(pair, everyone(2), params, 3);
  ASSERT_EQ(two.edges.size(), 1u);
  EXPECT_EQ(two.edges[0], (Edge{0, 1}));
}

TEST(BuildNetwork, SimpleGraphAndDeterminism) {
  const auto profiles = community_of(300, 5);
  SimulationParams params;
  const auto a = build_network(profiles, everyone(300), params, 11);
  const auto b = build_network(profiles, everyone(300), params, 11);
  EXPECT_EQ(a, b);
  std::set<Edge> seen;
  for (const auto& [u, v] : a.edges) {
    EXPECT_LT(u, v);
    EXPECT_TRUE(seen.insert({u, v}).second);
    EXPECT_TRUE(a.has_edge(u, v));
    EXPECT_TRUE(a.has_edge(v, u));
  }
  const auto c = build_network(profiles, everyone(300), params, 12);
  EXPECT_NE(a.edges, c.edges);
}

TEST(BuildNetwork, TooSmallCommunityIsReported) {
  const auto profiles = community_of(3, 1);
  SimulationParams params;
  params.m0 = 5;
  try {
    build_network(profiles, everyone(3), params, 1);
    FAIL();
  } catch (const NetworkError& e) {
    EXPECT_EQ(e.kind(), NetworkError::Kind::community_too_small);
    EXPECT_EQ(e.community(), 0u);
  }
}

// Attachment is weighted by SI, so the best-connected node should usually be
// among the most influential.
TEST(BuildNetwork, HubsAreInfluential) {
  int top_decile = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto profiles = community_of(500, seed);
    const auto net = build_network(profiles, everyone(500), SimulationParams{}, seed);
    NodeId hub = 0;
    for (NodeId i = 0; i < net.node_count(); ++i)
      if (net.degree(i) > net.degree(hub)) hub = i;
    std::size_t above = 0;
    for (const auto& p : profiles) above += p.influence[0] > profiles[hub].influence[0];
    top_decile += above < 50;
  }
  EXPECT_GE(top_decile, 18);
}

TEST(DegreeDistribution, StarAndComplete) {
  std::vector<Edge> star;
  for (NodeId i = 1; i <= 6; ++i) star.push_back({0, i});
  const auto s = degree_distribution(graph_from(7, star), 1, false);
  EXPECT_EQ(s.histogram, (std::map<std::size_t, std::size_t>{{1, 6}, {6, 1}}));
  EXPECT_FALSE(s.tail_fit.has_value());

  std::vector<Edge> k5;
  for (NodeId i = 0; i < 5; ++i)
    for (NodeId j = i + 1; j < 5; ++j) k5.push_back({i, j});
  EXPECT_EQ(degree_distribution(graph_from(5, k5), 1, false).histogram,
            (std::map<std::size_t, std::size_t>{{4, 5}}));
}

TEST(DegreeDistribution, GrownCommunityHasHeavyTail) {
  const auto profiles = community_of(1000, 42);
  SimulationParams params;
  params.m = 2;
  const auto net = build_network(profiles, everyone(1000), params, 42);
  const auto dd = degree_distribution(net);
  ASSERT_TRUE(dd.tail_fit.has_value());
  EXPECT_GE(dd.tail_fit->alpha, 2.2);
  EXPECT_LE(dd.tail_fit->alpha, 3.5);
  EXPECT_EQ(dd.tail_fit->lambda, 0.0);
}

TEST(CommunityOverlap, CountsSharedMembers) {
  CommunityIndex disjoint;
  disjoint.members = {{0, 1}, {2}, {3, 4, 5}};
  const auto m = community_overlap_matrix(disjoint);
  EXPECT_EQ(m[0][0], 2u);
  EXPECT_EQ(m[2][2], 3u);
  EXPECT_EQ(m[0][1] + m[0][2] + m[1][2], 0u);

  CommunityIndex shared;
  shared.members = {{0, 1}, {1}, {2}};
  const auto o = community_overlap_matrix(shared);
  EXPECT_EQ(o[0][1], 1u);
  EXPECT_EQ(o[1][0], 1u);
  EXPECT_EQ(o[0][2], 0u);
}

TEST(EdgeDensities, SplitsByLabel) {
  // Two triangles joined by one bridge.
  const auto net = graph_from(6, {{0, 1}, {0, 2}, {1, 2}, {3, 4}, {3, 5}, {4, 5}, {2, 3}});
  const std::vector<std::size_t> labels{0, 0, 0, 1, 1, 1};
  const auto d = edge_densities(net, labels);
  EXPECT_DOUBLE_EQ(d.intra, 1.0);
  EXPECT_DOUBLE_EQ(d.inter, 1.0 / 9.0);
}

TEST(NetworkExport, EdgeListUsesIds) {
  const auto net = graph_from(3, {{0, 2}});
  EXPECT_EQ(edge_list(net), "n0 n2\n");
  const std::vector<std::string> names{"Sports"};
  const auto j = nlohmann::json::parse(network_to_json(net, names));
  EXPECT_EQ(j["nodes"].size(), 3u);
  EXPECT_EQ(j["edges"][0][1], "n2");
}
