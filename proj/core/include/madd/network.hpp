#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "madd/attributes.hpp"
#include "madd/power_law.hpp"

namespace madd {

using NodeId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;  // first < second

class NetworkError : public std::runtime_error {
 public:
  enum class Kind { community_too_small, invalid_parameters };
  NetworkError(Kind kind, std::size_t community, const std::string& what)
      : std::runtime_error(what), kind_(kind), community_(community) {}
  Kind kind() const noexcept { return kind_; }
  std::size_t community() const noexcept { return community_; }

 private:
  Kind kind_;
  std::size_t community_;
};

/// Community-labelled undirected graph. Node i is agent i of the profile list.
struct PropagationNetwork {
  std::vector<std::string> ids;
  std::vector<AgentKind> kinds;
  CommunityIndex communities;
  std::vector<std::vector<NodeId>> adjacency;  // sorted neighbour lists
  std::vector<Edge> edges;                     // sorted, unique
  /// Edges added while growing each community (before global de-duplication).
  std::vector<std::vector<Edge>> community_edges;
  /// Arrival order used for each community.
  std::vector<std::vector<NodeId>> arrival_order;

  std::size_t node_count() const noexcept { return ids.size(); }
  std::size_t degree(NodeId n) const { return adjacency[n].size(); }
  bool has_edge(NodeId a, NodeId b) const;
  bool operator==(const PropagationNetwork&) const = default;
};

/// Membership per community: regular agents by interest threshold (argmax
/// fallback), bots by their home community.
CommunityIndex assign_communities(std::span<const AgentProfile> profiles, double tau);

/// Grows every community by influence-weighted preferential attachment.
///
/// Members arrive in descending SI order (ties by agent id). The first m0
/// form a complete graph; each later member links to min(m, current size)
/// distinct earlier members drawn one at a time with probability
/// proportional to SI, renormalized over those not yet drawn. Communities
/// use independent random streams keyed by (seed, community).
PropagationNetwork build_network(std::span<const AgentProfile> profiles,
                                 const CommunityIndex& communities, const SimulationParams& params,
                                 std::uint64_t seed);

struct DegreeDistribution {
  std::map<std::size_t, std::size_t> histogram;  // degree -> node count
  /// Pure power-law fit to degrees >= min_degree; absent when too few
  /// samples or distinct values for a fit.
  std::optional<PowerLawFit> tail_fit;
};

DegreeDistribution degree_distribution(const PropagationNetwork& network, int min_degree = 1,
                                       bool fit_tail = true);

/// J x J matrix with |C_i ∩ C_j|.
std::vector<std::vector<std::size_t>> community_overlap_matrix(const CommunityIndex& communities);

/// Each node's primary community: for regular agents the highest-interest
/// member community, for bots their home.
std::vector<std::size_t> primary_labels(std::span<const AgentProfile> profiles,
                                        const CommunityIndex& communities);

struct EdgeDensities {
  double intra = 0.0;  // edges with equal labels / pairs with equal labels
  double inter = 0.0;  // edges with different labels / pairs with different labels
};

EdgeDensities edge_densities(const PropagationNetwork& network, std::span<const std::size_t> labels);

/// "a b" per line using agent ids.
std::string edge_list(const PropagationNetwork& network);
/// {"nodes": [{id, kind, communities}], "edges": [[a, b], ...]} using agent ids.
std::string network_to_json(const PropagationNetwork& network,
                            std::span<const std::string> community_names);

}  // namespace madd
