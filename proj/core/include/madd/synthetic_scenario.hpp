#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "madd/power_law.hpp"
#include "madd/scenario.hpp"

namespace madd {

/// Share-activity statistics for one community of the generated population.
struct CommunityStats {
  std::string name;
  int users = 0;  // relative weight when scaling to total_users
  double post_mean = 0, post_sd = 0;
  double retweet_mean = 0, retweet_sd = 0;
  double quote_mean = 0, quote_sd = 0;
};

/// The six reference communities with their observed per-user activity.
std::vector<CommunityStats> reference_communities();

/// Truncated power law reported for real share counts (retweets plus quotes):
/// alpha 1.146, lambda 0.006, x_min 16.
PowerLawFit reference_share_law();

struct SyntheticScenarioOptions {
  std::uint64_t seed = 0;
  /// Regular users, split across communities in proportion to their weight.
  int total_users = 689;
  /// Defaults to reference_communities().
  std::vector<CommunityStats> communities;
  /// Tail exponent of the follower-count law, P(f) ~ f^-a for f >= follower_min.
  double follower_exponent = 2.6;
  std::int64_t follower_min = 30;
  int texts_per_user = 3;
  /// Share-count law stored in the scenario; nullopt leaves it to be fitted
  /// from the generated users.
  std::optional<PowerLawFit> share_law = reference_share_law();
};

/// A complete, valid scenario with made-up users and a content catalog of one
/// disinformation item plus one fact-based and one narrative-based correction
/// per community. Deterministic in `options`.
Scenario make_synthetic_scenario(const SyntheticScenarioOptions& options = {});

}  // namespace madd
