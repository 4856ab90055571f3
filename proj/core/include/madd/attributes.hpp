#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "madd/power_law.hpp"
#include "madd/scenario.hpp"

namespace madd {

class Evaluator;

enum class AgentKind { regular, malicious_bot, legitimate_bot };
std::string_view to_string(AgentKind kind);

using ActivityProfile = std::array<double, kHoursPerDay>;

/// Static per-agent attributes. Vectors are indexed by community position in
/// the scenario's community list.
struct AgentProfile {
  std::string agent_id;
  AgentKind kind = AgentKind::regular;
  std::vector<double> interest;   // IC in [1, 10]
  std::vector<double> trust;      // initial TT in [0, 1]
  std::vector<double> influence;  // SI in [0, 1]; 0 outside member communities
  ActivityProfile activation{};   // AT per hour of day
  std::int64_t share_total = 0;   // x_u
  std::int64_t follower_count = 0;
  /// Community a bot was injected into; for regular users, the
  /// highest-interest community (lowest index on ties).
  std::size_t home_community = 0;
  /// Short excerpt of the user's own texts, handed to the evaluator as
  /// receiver context.
  std::string history_summary;

  bool is_bot() const noexcept { return kind != AgentKind::regular; }
  bool operator==(const AgentProfile&) const = default;
};

/// Which agents belong to which community. Member lists hold agent indices
/// in ascending order.
struct CommunityIndex {
  std::vector<std::vector<std::size_t>> members;

  std::size_t community_count() const noexcept { return members.size(); }
  bool contains(std::size_t community, std::size_t agent) const;
  bool operator==(const CommunityIndex&) const = default;
};

struct Population {
  std::vector<AgentProfile> profiles;  // regular users first, then bots
  CommunityIndex communities;
  /// Non-fatal notes (uniform SI fallback, users assigned by argmax, ...).
  std::vector<std::string> warnings;
};

/// DT from its ingredients: [theta * cdf + (1 - theta) * ic_ratio] * e^{-xi n},
/// clamped to [0, 1].
double dissemination_tendency(double cdf, double ic_ratio, double theta, double xi,
                              std::int64_t exposure_n);

/// DT of `profile` for community `community`. Bots return 1.
double dissemination_tendency(const AgentProfile& profile, std::size_t community,
                              const TruncatedPowerLaw& law, const SimulationParams& params,
                              std::int64_t exposure_n);

struct InfluenceShares {
  std::map<std::string, double> shares;
  bool uniform_fallback = false;  // every follower count was zero
};

/// SI = f_u / sum f over the given members.
InfluenceShares social_influence(std::span<const std::pair<std::string, std::int64_t>> followers);

/// Per-hour activation probabilities from raw counts. An empty or all-zero
/// histogram yields the uniform profile.
ActivityProfile normalize_activity(std::span<const std::int64_t> histogram);

/// AT at step t (1-based) for a regular agent: bucket (t - 1) mod 24. Bots
/// return 1 when t is in `bot_schedule` and 0 otherwise.
double activation_probability(const AgentProfile& profile, int t,
                              std::span<const int> bot_schedule = {});

/// The share-count law used by DT: the scenario's fixed law when present,
/// otherwise a fit to the users' share totals.
PowerLawFit share_count_law(const Scenario& scenario);

/// Communities user joins: every j with interest[j] >= tau, or the argmax
/// (lowest index on ties) when none qualifies.
std::vector<std::size_t> qualifying_communities(std::span<const double> interest, double tau);

/// Scores every regular user through the evaluator, assigns communities,
/// injects bots per community and computes SI. Deterministic for fixed
/// (scenario, evaluator responses).
Population derive_profiles(const Scenario& scenario, Evaluator& evaluator);

/// JSON array of profiles, for inspection.
std::string profiles_to_json(const Scenario& scenario, const Population& population);

}  // namespace madd
