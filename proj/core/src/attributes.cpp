#include "madd/attributes.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "json.hpp"
#include "madd/evaluator.hpp"
#include "madd/network.hpp"
#include "madd/rng.hpp"

namespace madd {

std::string_view to_string(AgentKind kind) {
  switch (kind) {
    case AgentKind::regular: return "regular";
    case AgentKind::malicious_bot: return "malicious_bot";
    case AgentKind::legitimate_bot: return "legitimate_bot";
  }
  return "regular";
}

bool CommunityIndex::contains(std::size_t community, std::size_t agent) const {
  const auto& m = members.at(community);
  return std::binary_search(m.begin(), m.end(), agent);
}

double dissemination_tendency(double cdf, double ic_ratio, double theta, double xi,
                              std::int64_t exposure_n) {
  const double base = theta * cdf + (1.0 - theta) * ic_ratio;
  return std::clamp(base * std::exp(-xi * static_cast<double>(exposure_n)), 0.0, 1.0);
}

double dissemination_tendency(const AgentProfile& profile, std::size_t community,
                              const TruncatedPowerLaw& law, const SimulationParams& params,
                              std::int64_t exposure_n) {
  if (profile.is_bot()) return 1.0;
  const double max_ic = *std::max_element(profile.interest.begin(), profile.interest.end());
  const double ratio = max_ic > 0.0 ? profile.interest.at(community) / max_ic : 0.0;
  return dissemination_tendency(law.cdf(static_cast<double>(profile.share_total)), ratio,
                                params.theta, params.xi, exposure_n);
}

InfluenceShares social_influence(std::span<const std::pair<std::string, std::int64_t>> followers) {
  InfluenceShares out;
  if (followers.empty()) return out;
  long double total = 0;
  for (const auto& [id, f] : followers) total += static_cast<long double>(std::max<std::int64_t>(f, 0));
  if (total <= 0) {
    out.uniform_fallback = true;
    for (const auto& [id, f] : followers) out.shares[id] = 1.0 / static_cast<double>(followers.size());
    return out;
  }
  for (const auto& [id, f] : followers)
    out.shares[id] = static_cast<double>(static_cast<long double>(std::max<std::int64_t>(f, 0)) / total);
  return out;
}

ActivityProfile normalize_activity(std::span<const std::int64_t> histogram) {
  ActivityProfile at;
  std::int64_t total = 0;
  if (histogram.size() == at.size())
    for (auto v : histogram) total += std::max<std::int64_t>(v, 0);
  if (total == 0) {
    at.fill(1.0 / static_cast<double>(at.size()));
    return at;
  }
  for (std::size_t h = 0; h < at.size(); ++h)
    at[h] = static_cast<double>(std::max<std::int64_t>(histogram[h], 0)) / static_cast<double>(total);
  return at;
}

double activation_probability(const AgentProfile& profile, int t, std::span<const int> bot_schedule) {
  if (profile.is_bot())
    return std::find(bot_schedule.begin(), bot_schedule.end(), t) != bot_schedule.end() ? 1.0 : 0.0;
  const int bucket = ((t - 1) % kHoursPerDay + kHoursPerDay) % kHoursPerDay;
  return profile.activation[static_cast<std::size_t>(bucket)];
}

PowerLawFit share_count_law(const Scenario& scenario) {
  if (scenario.power_law) return *scenario.power_law;
  std::vector<std::int64_t> samples;
  samples.reserve(scenario.users.size());
  // Users who never shared carry no information about the tail and the law
  // is only defined on positive integers.
  for (const auto& u : scenario.users)
    if (u.share_total() > 0) samples.push_back(u.share_total());
  return fit_truncated_power_law(samples);
}

std::vector<std::size_t> qualifying_communities(std::span<const double> interest, double tau) {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < interest.size(); ++j)
    if (interest[j] >= tau) out.push_back(j);
  if (out.empty() && !interest.empty())
    out.push_back(static_cast<std::size_t>(std::max_element(interest.begin(), interest.end()) -
                                           interest.begin()));
  return out;
}

namespace {

std::string summarize_history(const UserRecord& user) {
  constexpr std::size_t kLimit = 480;
  std::string out;
  for (auto it = user.historical_texts.rbegin(); it != user.historical_texts.rend(); ++it) {
    if (out.size() + it->text.size() + 1 > kLimit) break;
    if (!out.empty()) out += '\n';
    out += it->text;
  }
  if (out.empty()) out = user.description.substr(0, kLimit);
  return out;
}

std::vector<double> scores_for(const EvaluationResponse& r, const std::vector<std::string>& names) {
  std::vector<double> out;
  out.reserve(names.size());
  for (const auto& n : names) out.push_back(r.scores.at(n));
  return out;
}

}  // namespace

Population derive_profiles(const Scenario& scenario, Evaluator& evaluator) {
  const auto& names = scenario.communities;
  const std::size_t J = names.size();
  const auto& params = scenario.params;
  Population pop;
  pop.profiles.reserve(scenario.users.size());

  for (const auto& user : scenario.users) {
    AgentProfile p;
    p.agent_id = user.user_id;
    p.share_total = user.share_total();
    p.follower_count = user.follower_count;
    p.activation = normalize_activity(user.activity_histogram);
    p.history_summary = summarize_history(user);

    EvaluationRequest request;
    request.communities = names;
    for (const auto& h : user.historical_texts) request.subject_texts.push_back(h.text);
    request.context[ctx::subject_id] = user.user_id;
    request.context[ctx::description] = user.description;
    if (user.source_community) {
      request.context[ctx::source_community] = *user.source_community;
      request.context[ctx::community] = *user.source_community;
    }
    try {
      request.kind = EvalKind::interest_community;
      p.interest = scores_for(evaluator.evaluate(request), names);
      request.kind = EvalKind::trust_threshold;
      p.trust = scores_for(evaluator.evaluate(request), names);
    } catch (const EvaluatorError& e) {
      throw EvaluatorError(e.kind(), "user '" + user.user_id + "': " + e.what());
    }
    p.home_community = static_cast<std::size_t>(
        std::max_element(p.interest.begin(), p.interest.end()) - p.interest.begin());
    pop.profiles.push_back(std::move(p));
  }

  // Regular membership first; bot counts are proportional to it.
  std::vector<std::vector<std::size_t>> regular_members(J);
  std::size_t fallback_users = 0;
  for (std::size_t i = 0; i < pop.profiles.size(); ++i) {
    const auto& ic = pop.profiles[i].interest;
    const auto joined = qualifying_communities(ic, params.tau);
    if (joined.size() == 1 && ic[joined[0]] < params.tau) ++fallback_users;
    for (auto j : joined) regular_members[j].push_back(i);
  }
  if (fallback_users > 0)
    pop.warnings.push_back(std::to_string(fallback_users) +
                           " users cleared tau nowhere and joined their top-interest community");

  auto bot_count = [](double ratio, std::size_t size) -> std::size_t {
    if (ratio <= 0.0 || size == 0) return 0;
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(ratio * static_cast<double>(size))));
  };
  for (std::size_t j = 0; j < J; ++j) {
    const auto& regular = regular_members[j];
    auto add_bots = [&](AgentKind kind, std::size_t count, const char* prefix) {
      for (std::size_t k = 1; k <= count; ++k) {
        AgentProfile b;
        b.kind = kind;
        b.agent_id = std::string(prefix) + ":" + names[j] + ":" + std::to_string(k);
        b.interest.assign(J, 1.0);
        b.interest[j] = 10.0;
        b.trust.assign(J, 1.0);
        b.activation.fill(0.0);
        b.home_community = j;
        // Bots borrow the follower count of a random regular member so their
        // SI matches the community's empirical influence levels.
        if (!regular.empty()) {
          Substream rng({params.rng_seed, static_cast<std::uint64_t>(DrawPurpose::bot_influence),
                         fnv1a64(b.agent_id)});
          b.follower_count = pop.profiles[regular[rng() % regular.size()]].follower_count;
        }
        pop.profiles.push_back(std::move(b));
      }
    };
    add_bots(AgentKind::malicious_bot, bot_count(params.malicious_ratio, regular.size()), "mbot");
    add_bots(AgentKind::legitimate_bot, bot_count(params.legitimate_ratio, regular.size()), "lbot");
  }

  pop.communities = assign_communities(pop.profiles, params.tau);
  for (auto& p : pop.profiles) p.influence.assign(J, 0.0);
  for (std::size_t j = 0; j < J; ++j) {
    std::vector<std::pair<std::string, std::int64_t>> followers;
    for (auto i : pop.communities.members[j])
      followers.emplace_back(pop.profiles[i].agent_id, pop.profiles[i].follower_count);
    const auto si = social_influence(followers);
    if (si.uniform_fallback)
      pop.warnings.push_back("community '" + names[j] + "' has no followers; SI is uniform");
    for (auto i : pop.communities.members[j])
      pop.profiles[i].influence[j] = si.shares.at(pop.profiles[i].agent_id);
  }
  return pop;
}

std::string profiles_to_json(const Scenario& scenario, const Population& population) {
  using nlohmann::json;
  json arr = json::array();
  for (std::size_t i = 0; i < population.profiles.size(); ++i) {
    const auto& p = population.profiles[i];
    json member = json::array();
    for (std::size_t j = 0; j < population.communities.community_count(); ++j)
      if (population.communities.contains(j, i)) member.push_back(scenario.communities[j]);
    json ic = json::object(), tt = json::object(), si = json::object();
    for (std::size_t j = 0; j < scenario.communities.size(); ++j) {
      ic[scenario.communities[j]] = p.interest[j];
      tt[scenario.communities[j]] = p.trust[j];
      si[scenario.communities[j]] = p.influence[j];
    }
    arr.push_back({{"agent_id", p.agent_id},
                   {"kind", std::string(to_string(p.kind))},
                   {"communities", member},
                   {"home_community", scenario.communities[p.home_community]},
                   {"interest", ic},
                   {"trust", tt},
                   {"influence", si},
                   {"activation", p.activation},
                   {"share_total", p.share_total},
                   {"follower_count", p.follower_count}});
  }
  return arr.dump(2) + "\n";
}

}  // namespace madd
