#include "madd/network.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "json.hpp"
#include "madd/rng.hpp"

namespace madd {

bool PropagationNetwork::has_edge(NodeId a, NodeId b) const {
  const auto& adj = adjacency.at(a);
  return std::binary_search(adj.begin(), adj.end(), b);
}

CommunityIndex assign_communities(std::span<const AgentProfile> profiles, double tau) {
  CommunityIndex index;
  std::size_t J = 0;
  for (const auto& p : profiles) J = std::max(J, p.interest.size());
  index.members.resize(J);
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    const auto& p = profiles[i];
    if (p.is_bot()) {
      index.members.at(p.home_community).push_back(i);
      continue;
    }
    for (auto j : qualifying_communities(p.interest, tau)) index.members[j].push_back(i);
  }
  return index;
}

namespace {

Edge make_edge(std::size_t a, std::size_t b) {
  const auto x = static_cast<NodeId>(a);
  const auto y = static_cast<NodeId>(b);
  return x < y ? Edge{x, y} : Edge{y, x};
}

// Draws `count` distinct positions from `weights` one at a time, each with
// probability proportional to its weight among those not yet drawn. All-zero
// remaining weight falls back to a uniform choice.
std::vector<std::size_t> weighted_sample(std::span<const double> weights, std::size_t count,
                                         Substream& rng) {
  std::vector<char> taken(weights.size(), 0);
  double remaining = 0.0;
  for (double w : weights) remaining += w;
  std::vector<std::size_t> out;
  out.reserve(count);
  for (std::size_t draw = 0; draw < count; ++draw) {
    std::size_t pick = weights.size();
    if (remaining > 0.0) {
      const double target = rng.uniform() * remaining;
      double acc = 0.0;
      for (std::size_t i = 0; i < weights.size(); ++i) {
        if (taken[i] || weights[i] <= 0.0) continue;
        acc += weights[i];
        pick = i;
        if (target < acc) break;
      }
    }
    if (pick == weights.size()) {
      const std::size_t free = weights.size() - out.size();
      std::size_t k = static_cast<std::size_t>(rng() % free);
      for (std::size_t i = 0; i < weights.size(); ++i) {
        if (taken[i]) continue;
        if (k-- == 0) {
          pick = i;
          break;
        }
      }
    }
    taken[pick] = 1;
    remaining = std::max(0.0, remaining - weights[pick]);
    out.push_back(pick);
  }
  return out;
}

}  // namespace

PropagationNetwork build_network(std::span<const AgentProfile> profiles,
                                 const CommunityIndex& communities, const SimulationParams& params,
                                 std::uint64_t seed) {
  if (params.m < 1 || params.m > params.m0)
    throw NetworkError(NetworkError::Kind::invalid_parameters, 0, "need 1 <= m <= m0");

  PropagationNetwork net;
  net.communities = communities;
  net.ids.reserve(profiles.size());
  for (const auto& p : profiles) {
    net.ids.push_back(p.agent_id);
    net.kinds.push_back(p.kind);
  }
  const std::size_t J = communities.community_count();
  net.community_edges.resize(J);
  net.arrival_order.resize(J);
  std::set<Edge> all;

  for (std::size_t j = 0; j < J; ++j) {
    const auto& members = communities.members[j];
    if (members.size() < static_cast<std::size_t>(params.m0))
      throw NetworkError(NetworkError::Kind::community_too_small, j,
                         "community " + std::to_string(j) + " has " +
                             std::to_string(members.size()) + " members, fewer than m0 = " +
                             std::to_string(params.m0));
    std::vector<std::size_t> order(members.begin(), members.end());
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      const double sa = profiles[a].influence.at(j);
      const double sb = profiles[b].influence.at(j);
      if (sa != sb) return sa > sb;
      return profiles[a].agent_id < profiles[b].agent_id;
    });
    auto& arrival = net.arrival_order[j];
    for (auto i : order) arrival.push_back(static_cast<NodeId>(i));

    auto& local = net.community_edges[j];
    const auto m0 = static_cast<std::size_t>(params.m0);
    for (std::size_t a = 0; a < m0; ++a)
      for (std::size_t b = a + 1; b < m0; ++b) local.push_back(make_edge(order[a], order[b]));

    Substream rng({seed, fnv1a64("network"), j});
    std::vector<double> weights;
    weights.reserve(order.size());
    for (std::size_t a = 0; a < m0; ++a) weights.push_back(profiles[order[a]].influence[j]);
    for (std::size_t pos = m0; pos < order.size(); ++pos) {
      const std::size_t want = std::min<std::size_t>(static_cast<std::size_t>(params.m), pos);
      for (auto target : weighted_sample(weights, want, rng))
        local.push_back(make_edge(order[target], order[pos]));
      weights.push_back(profiles[order[pos]].influence[j]);
    }
    all.insert(local.begin(), local.end());
  }

  net.edges.assign(all.begin(), all.end());
  net.adjacency.assign(profiles.size(), {});
  for (const auto& [a, b] : net.edges) {
    net.adjacency[a].push_back(b);
    net.adjacency[b].push_back(a);
  }
  for (auto& adj : net.adjacency) std::sort(adj.begin(), adj.end());
  return net;
}

DegreeDistribution degree_distribution(const PropagationNetwork& network, int min_degree,
                                       bool fit_tail) {
  DegreeDistribution out;
  std::vector<std::int64_t> tail;
  for (std::size_t n = 0; n < network.node_count(); ++n) {
    const auto d = network.adjacency[n].size();
    ++out.histogram[d];
    if (static_cast<int>(d) >= std::max(min_degree, 1)) tail.push_back(static_cast<std::int64_t>(d));
  }
  if (fit_tail) {
    FitOptions options;
    options.lambda_max = 0.0;
    try {
      out.tail_fit = fit_truncated_power_law(tail, options);
    } catch (const FitError&) {
      out.tail_fit.reset();
    }
  }
  return out;
}

std::vector<std::vector<std::size_t>> community_overlap_matrix(const CommunityIndex& communities) {
  const std::size_t J = communities.community_count();
  std::vector<std::vector<std::size_t>> m(J, std::vector<std::size_t>(J, 0));
  for (std::size_t a = 0; a < J; ++a) {
    m[a][a] = communities.members[a].size();
    for (std::size_t b = a + 1; b < J; ++b) {
      const auto& x = communities.members[a];
      const auto& y = communities.members[b];
      std::vector<std::size_t> common;
      std::set_intersection(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(common));
      m[a][b] = m[b][a] = common.size();
    }
  }
  return m;
}

std::vector<std::size_t> primary_labels(std::span<const AgentProfile> profiles,
                                        const CommunityIndex& communities) {
  std::vector<std::size_t> labels(profiles.size(), 0);
  std::vector<std::vector<std::size_t>> member_of(profiles.size());
  for (std::size_t j = 0; j < communities.community_count(); ++j)
    for (auto i : communities.members[j]) member_of[i].push_back(j);
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    const auto& p = profiles[i];
    if (p.is_bot() || member_of[i].empty()) {
      labels[i] = p.home_community;
      continue;
    }
    std::size_t best = member_of[i].front();
    for (auto j : member_of[i])
      if (p.interest[j] > p.interest[best]) best = j;
    labels[i] = best;
  }
  return labels;
}

EdgeDensities edge_densities(const PropagationNetwork& network, std::span<const std::size_t> labels) {
  std::map<std::size_t, std::size_t> sizes;
  for (auto l : labels) ++sizes[l];
  const double n = static_cast<double>(labels.size());
  double same_pairs = 0.0;
  for (const auto& [label, count] : sizes) {
    const double c = static_cast<double>(count);
    same_pairs += c * (c - 1.0) / 2.0;
  }
  const double diff_pairs = n * (n - 1.0) / 2.0 - same_pairs;
  double same_edges = 0.0;
  double diff_edges = 0.0;
  for (const auto& [a, b] : network.edges) (labels[a] == labels[b] ? same_edges : diff_edges) += 1.0;
  EdgeDensities d;
  d.intra = same_pairs > 0 ? same_edges / same_pairs : 0.0;
  d.inter = diff_pairs > 0 ? diff_edges / diff_pairs : 0.0;
  return d;
}

std::string edge_list(const PropagationNetwork& network) {
  std::ostringstream os;
  for (const auto& [a, b] : network.edges) os << network.ids[a] << ' ' << network.ids[b] << '\n';
  return os.str();
}

std::string network_to_json(const PropagationNetwork& network,
                            std::span<const std::string> community_names) {
  using nlohmann::json;
  std::vector<json> member_of(network.node_count(), json::array());
  for (std::size_t j = 0; j < network.communities.community_count(); ++j)
    for (auto i : network.communities.members[j])
      member_of[i].push_back(j < community_names.size() ? community_names[j] : std::to_string(j));
  json nodes = json::array();
  for (std::size_t i = 0; i < network.node_count(); ++i)
    nodes.push_back({{"id", network.ids[i]},
                     {"kind", std::string(to_string(network.kinds[i]))},
                     {"communities", member_of[i]}});
  json edges = json::array();
  for (const auto& [a, b] : network.edges) edges.push_back({network.ids[a], network.ids[b]});
  return json{{"nodes", nodes}, {"edges", edges}}.dump(2) + "\n";
}

}  // namespace madd
