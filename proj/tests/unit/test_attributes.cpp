#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "madd/attributes.hpp"
#include "madd/synthetic_evaluator.hpp"
#include "madd/synthetic_scenario.hpp"
#include "test_support.hpp"

using namespace madd;
using madd::testing::make_profile;

namespace {

// Scores every user as fully interested in the first community only.
class FirstCommunityEvaluator final : public Evaluator {
 public:
  std::string backend_name() const override { return "first-community"; }

 protected:
  EvaluationResponse do_evaluate(const EvaluationRequest& request) override {
    EvaluationResponse r;
    for (std::size_t j = 0; j < request.communities.size(); ++j) {
      const auto& name = request.communities[j];
      r.scores[name] = request.kind == EvalKind::interest_community ? (j == 0 ? 10.0 : 1.0) : 0.4;
    }
    return r;
  }
};

Scenario users_only(std::size_t n, double malicious, double legitimate) {
  Scenario s;
  s.communities = {"Sports", "Politics"};
  s.params.malicious_ratio = malicious;
  s.params.legitimate_ratio = legitimate;
  for (std::size_t i = 0; i < n; ++i) {
    UserRecord u;
    u.user_id = "u" + std::to_string(i);
    u.follower_count = static_cast<std::int64_t>(i + 1);
    u.retweet_count = static_cast<std::int64_t>(i % 7);
    s.users.push_back(u);
  }
  return s;
}

}  // namespace

TEST(DisseminationTendency, ArithmeticFromIngredients) {
  EXPECT_NEAR(dissemination_tendency(0.8, 1.0, 0.5, 0.1, 0), 0.9, 1e-12);
  EXPECT_NEAR(dissemination_tendency(0.8, 1.0, 0.5, 0.1, 3), 0.9 * std::exp(-0.3), 1e-12);
  EXPECT_LT(dissemination_tendency(1.0, 1.0, 0.5, 0.1, 200), 1e-8);
}

TEST(DisseminationTendency, ThetaZeroLeavesInterestRatio) {
  auto p = make_profile("u", AgentKind::regular, 3);
  p.interest = {4.0, 8.0, 2.0};
  p.share_total = 5000;
  const TruncatedPowerLaw law(1.146, 0.006, 16);
  SimulationParams params;
  params.theta = 0.0;
  params.xi = 0.1;
  EXPECT_DOUBLE_EQ(dissemination_tendency(p, 0, law, params, 2), 0.5 * std::exp(-0.2));
  EXPECT_DOUBLE_EQ(dissemination_tendency(p, 1, law, params, 0), 1.0);
}

TEST(DisseminationTendency, UsesShareCountCdf) {
  auto p = make_profile("u", AgentKind::regular, 2);
  const TruncatedPowerLaw law(2.0, 0.0, 10);
  SimulationParams params;
  p.share_total = 3;  // below x_min: the CDF term vanishes
  EXPECT_NEAR(dissemination_tendency(p, 0, law, params, 0), 0.5, 1e-12);
  p.share_total = 10;
  EXPECT_NEAR(dissemination_tendency(p, 0, law, params, 0), 0.5 * law.pmf(10) + 0.5, 1e-12);
}

TEST(DisseminationTendency, NonIncreasingInExposure) {
  auto p = make_profile("u", AgentKind::regular, 2);
  const TruncatedPowerLaw law(1.146, 0.006, 16);
  double prev = 2.0;
  for (int n = 0; n < 50; ++n) {
    const double dt = dissemination_tendency(p, 1, law, SimulationParams{}, n);
    EXPECT_LE(dt, prev);
    EXPECT_GE(dt, 0.0);
    prev = dt;
  }
}

TEST(DisseminationTendency, BotsAlwaysShare) {
  const auto bot = make_profile("b", AgentKind::malicious_bot, 2);
  EXPECT_EQ(dissemination_tendency(bot, 0, TruncatedPowerLaw(2.0, 0.0, 1), SimulationParams{}, 99),
            1.0);
}

TEST(SocialInfluence, FollowerShares) {
  const std::vector<std::pair<std::string, std::int64_t>> f{{"a", 100}, {"b", 300}, {"c", 600}};
  const auto si = social_influence(f);
  EXPECT_FALSE(si.uniform_fallback);
  EXPECT_NEAR(si.shares.at("a"), 0.1, 1e-12);
  EXPECT_NEAR(si.shares.at("b"), 0.3, 1e-12);
  EXPECT_NEAR(si.shares.at("c"), 0.6, 1e-12);

  const std::vector<std::pair<std::string, std::int64_t>> single{{"x", 42}};
  EXPECT_DOUBLE_EQ(social_influence(single).shares.at("x"), 1.0);
}

TEST(SocialInfluence, AllZeroFallsBackToUniform) {
  const std::vector<std::pair<std::string, std::int64_t>> f{{"a", 0}, {"b", 0}};
  const auto si = social_influence(f);
  EXPECT_TRUE(si.uniform_fallback);
  EXPECT_DOUBLE_EQ(si.shares.at("a"), 0.5);
  EXPECT_DOUBLE_EQ(si.shares.at("b"), 0.5);
}

TEST(Activation, NormalizesHistogram) {
  std::vector<std::int64_t> h(24, 0);
  h[0] = 2;
  h[1] = 1;
  h[2] = 1;
  const auto at = normalize_activity(h);
  EXPECT_DOUBLE_EQ(at[0], 0.5);
  EXPECT_DOUBLE_EQ(at[1], 0.25);
  EXPECT_DOUBLE_EQ(at[2], 0.25);
  EXPECT_DOUBLE_EQ(at[3], 0.0);

  const auto uniform = normalize_activity(std::vector<std::int64_t>(24, 3));
  for (double v : uniform) EXPECT_DOUBLE_EQ(v, 1.0 / 24);
  for (double v : normalize_activity({})) EXPECT_DOUBLE_EQ(v, 1.0 / 24);
}

TEST(Activation, StepMapsToHourBucket) {
  auto p = make_profile("u", AgentKind::regular, 1);
  std::vector<std::int64_t> h(24, 0);
  h[9] = 7;
  p.activation = normalize_activity(h);
  for (int t = 1; t <= 72; ++t)
    EXPECT_DOUBLE_EQ(activation_probability(p, t), (t - 1) % 24 == 9 ? 1.0 : 0.0) << t;
}

TEST(Activation, BotsFollowTheirSchedule) {
  const auto bot = make_profile("b", AgentKind::legitimate_bot, 1);
  const std::vector<int> schedule{4, 17};
  EXPECT_EQ(activation_probability(bot, 4, schedule), 1.0);
  EXPECT_EQ(activation_probability(bot, 5, schedule), 0.0);
  EXPECT_EQ(activation_probability(bot, 4), 0.0);
}

TEST(QualifyingCommunities, ThresholdAndFallback) {
  EXPECT_EQ(qualifying_communities(std::vector<double>{9, 3, 8, 2, 1, 1}, 8),
            (std::vector<std::size_t>{0, 2}));
  EXPECT_EQ(qualifying_communities(std::vector<double>{5, 5, 5, 5, 5, 5}, 8),
            (std::vector<std::size_t>{0}));
  EXPECT_EQ(qualifying_communities(std::vector<double>{2, 4, 1}, 1).size(), 3u);
}

TEST(DeriveProfiles, NoBotsWhenRatiosAreZero) {
  const Scenario s = users_only(30, 0.0, 0.0);
  FirstCommunityEvaluator eval;
  const Population pop = derive_profiles(s, eval);
  ASSERT_EQ(pop.profiles.size(), 30u);
  for (const auto& p : pop.profiles) EXPECT_EQ(p.kind, AgentKind::regular);
}

TEST(DeriveProfiles, BotsProportionalToMembership) {
  const Scenario s = users_only(100, 0.15, 0.05);
  FirstCommunityEvaluator eval;
  const Population pop = derive_profiles(s, eval);
  std::size_t malicious = 0, legitimate = 0;
  for (auto i : pop.communities.members[0]) {
    const auto& p = pop.profiles[i];
    malicious += p.kind == AgentKind::malicious_bot;
    legitimate += p.kind == AgentKind::legitimate_bot;
    if (p.is_bot()) {
      for (double tt : p.trust) EXPECT_EQ(tt, 1.0);
    }
  }
  EXPECT_EQ(malicious, 15u);
  EXPECT_EQ(legitimate, 5u);
  EXPECT_TRUE(pop.communities.members[1].empty());
  for (const auto& p : pop.profiles) EXPECT_EQ(p.influence[1], 0.0);
}

TEST(DeriveProfiles, InfluenceSumsToOnePerCommunity) {
  const Scenario s = make_synthetic_scenario({});
  SyntheticEvaluator eval(s.params.rng_seed);
  const Population pop = derive_profiles(s, eval);
  for (std::size_t j = 0; j < s.communities.size(); ++j) {
    double total = 0;
    for (auto i : pop.communities.members[j]) total += pop.profiles[i].influence[j];
    EXPECT_NEAR(total, 1.0, 1e-9) << s.communities[j];
  }
  for (const auto& p : pop.profiles) {
    for (double ic : p.interest) {
      EXPECT_GE(ic, 1.0);
      EXPECT_LE(ic, 10.0);
    }
    for (double tt : p.trust) {
      EXPECT_GE(tt, 0.0);
      EXPECT_LE(tt, 1.0);
    }
    EXPECT_NEAR(std::accumulate(p.activation.begin(), p.activation.end(), 0.0),
                p.is_bot() ? 0.0 : 1.0, 1e-9);
  }
}

TEST(DeriveProfiles, Deterministic) {
  const Scenario s = make_synthetic_scenario({});
  SyntheticEvaluator a(7), b(7);
  const Population pa = derive_profiles(s, a);
  const Population pb = derive_profiles(s, b);
  EXPECT_EQ(pa.profiles, pb.profiles);
  EXPECT_EQ(pa.communities, pb.communities);
}

TEST(ShareCountLaw, PrefersFixedLaw) {
  Scenario s = users_only(10, 0, 0);
  s.power_law = reference_share_law();
  EXPECT_EQ(share_count_law(s), reference_share_law());
}
