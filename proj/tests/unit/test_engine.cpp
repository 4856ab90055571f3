#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>

#include "madd/engine.hpp"
#include "madd/synthetic_evaluator.hpp"
#include "madd/synthetic_scenario.hpp"
#include "test_support.hpp"

using namespace madd;
using namespace madd::testing;

namespace {

bool has(const std::vector<std::string>& v, const std::string& id) {
  return std::find(v.begin(), v.end(), id) != v.end();
}

// Malicious bot - A - B on a path; regular agents are always active.
World path_world() {
  return make_world({make_profile("bot", AgentKind::malicious_bot, 1),
                     make_profile("A", AgentKind::regular, 1),
                     make_profile("B", AgentKind::regular, 1)},
                    {{0, 1}, {1, 2}});
}

World star_world(std::size_t leaves, bool with_legit_bot) {
  std::vector<AgentProfile> profiles{make_profile("mbot", AgentKind::malicious_bot, 1)};
  if (with_legit_bot) profiles.push_back(make_profile("lbot", AgentKind::legitimate_bot, 1));
  std::vector<Edge> edges;
  const auto bots = static_cast<NodeId>(profiles.size());
  for (std::size_t i = 0; i < leaves; ++i) {
    profiles.push_back(make_profile("u" + std::to_string(i), AgentKind::regular, 1));
    const auto node = static_cast<NodeId>(profiles.size() - 1);
    for (NodeId b = 0; b < bots; ++b) edges.push_back({b, node});
    if (i > 0) edges.push_back({node - 1, node});
  }
  return make_world(profiles, edges);
}

}  // namespace

TEST(Engine, HandTraceOnPath) {
  Scenario s = make_shell_scenario(0.5);
  s.params.total_steps = 1;
  const World w = path_world();
  SyntheticEvaluator eval(1);
  RunOptions opt;
  opt.schedules = BotSchedules{{1}, {}, {}};
  const RunReport r = run_simulation(s, w, eval, opt);
  ASSERT_TRUE(r.complete) << r.error;
  EXPECT_TRUE(has(r.final_sets.exposed, "A"));
  EXPECT_TRUE(has(r.final_sets.susceptible, "B"));
  EXPECT_EQ(r.counters.malicious_bot_shares, 1);
  EXPECT_EQ(r.counters.receipts, 1);
}

TEST(Engine, PathReceiptsTravelOneHopPerStep) {
  Scenario s = make_shell_scenario(0.5);
  s.params.total_steps = 6;
  const World w = path_world();
  SyntheticEvaluator eval(1);
  RunTrace trace;
  RunOptions opt;
  opt.schedules = BotSchedules{{1}, {}, {}};
  opt.trace = &trace;
  run_simulation(s, w, eval, opt);
  for (const auto& rc : trace.receipts) {
    if (rc.receiver == 2) {
      EXPECT_EQ(rc.sender, 1u);
      EXPECT_GE(rc.step, 2);
    }
    if (rc.sender == 0) {
      EXPECT_EQ(rc.step, 1);
    }
  }
}

TEST(Engine, NothingHappensWithoutBots) {
  Scenario s = make_shell_scenario();
  s.params.total_steps = 1;
  const World w = make_world({make_profile("A", AgentKind::regular, 1),
                              make_profile("B", AgentKind::regular, 1)},
                             {{0, 1}});
  SyntheticEvaluator eval(1);
  const RunReport r = run_simulation(s, w, eval);
  ASSERT_TRUE(r.complete);
  EXPECT_EQ(r.steps, (std::vector<int>{0, 1}));
  for (const auto& snap : {r.series.front()[0], r.series.back()[0]}) {
    EXPECT_EQ(snap.sr, 1.0);
    EXPECT_EQ(snap.er + snap.ir + snap.ur, 0.0);
  }
  EXPECT_EQ(r.counters.receipts, 0);
}

TEST(BotSchedules, FrequencyAndWindowRules) {
  const World w = star_world(4, true);
  const auto& profiles = w.population.profiles;
  SimulationParams params;
  params.malicious_freq = {3, 3};

  const auto control = build_bot_schedules(profiles, params, InterventionPlan::control(), 0, 9);
  EXPECT_EQ(control[0].size(), 3u);
  EXPECT_TRUE(control[1].empty());
  for (std::size_t i = 2; i < profiles.size(); ++i) EXPECT_TRUE(control[i].empty());

  const auto early = build_bot_schedules(
      profiles, params, InterventionPlan::make(Stage::early, Strategy::fact_based, params), 0, 9);
  EXPECT_EQ(early[0], control[0]);  // malicious schedules are shared across plans
  ASSERT_FALSE(early[1].empty());
  EXPECT_GE(early[1].size(), static_cast<std::size_t>(params.legitimate_freq.min));
  EXPECT_LE(early[1].size(), static_cast<std::size_t>(params.legitimate_freq.max));
  for (int t : early[1]) {
    EXPECT_GE(t, 12);
    EXPECT_LE(t, 72);
  }
  EXPECT_TRUE(std::is_sorted(early[1].begin(), early[1].end()));
  EXPECT_EQ(std::adjacent_find(early[1].begin(), early[1].end()), early[1].end());

  // Bots of other communities stay silent.
  EXPECT_TRUE(build_bot_schedules(profiles, params, InterventionPlan::control(), 1, 9)[0].empty());
}

TEST(BotSchedules, WindowTooSmall) {
  const World w = star_world(2, true);
  SimulationParams params;
  params.legitimate_freq = {5, 8};
  params.intervention_windows[Stage::late] = {70, 72};
  try {
    build_bot_schedules(w.population.profiles, params,
                        InterventionPlan::make(Stage::late, Strategy::fact_based, params), 0, 1);
    FAIL();
  } catch (const EngineError& e) {
    EXPECT_EQ(e.kind(), EngineError::Kind::window_too_small);
  }
}

TEST(Engine, LegitimateScheduleUnderControlConflicts) {
  Scenario s = make_shell_scenario();
  const World w = star_world(3, true);
  SyntheticEvaluator eval(1);
  RunOptions opt;
  opt.schedules = BotSchedules(w.population.profiles.size());
  (*opt.schedules)[1] = {5};
  try {
    run_simulation(s, w, eval, opt);
    FAIL();
  } catch (const EngineError& e) {
    EXPECT_EQ(e.kind(), EngineError::Kind::schedule_conflict);
  }
}

TEST(Engine, RejectsMismatchedNetwork) {
  Scenario s = make_shell_scenario();
  World w = star_world(3, false);
  w.population.profiles.push_back(make_profile("extra", AgentKind::regular, 1));
  SyntheticEvaluator eval(1);
  EXPECT_THROW(run_simulation(s, w, eval), EngineError);
}

TEST(Engine, InvariantsAndDeterminismOnSyntheticScenario) {
  const Scenario s = make_synthetic_scenario({});
  SyntheticEvaluator eval(s.params.rng_seed);
  const World w = prepare_world(s, eval);
  RunOptions opt;
  opt.plan = InterventionPlan::make(Stage::mid, Strategy::fact_based, s.params);
  opt.seed = 17;
  opt.record_cadence = 6;
  RunTrace trace;
  opt.trace = &trace;
  const RunReport a = run_simulation(s, w, eval, opt);
  ASSERT_TRUE(a.complete) << a.error;
  EXPECT_TRUE(check_report(a).empty());
  EXPECT_EQ(a.steps.size(), 13u);

  opt.trace = nullptr;
  const RunReport b = run_simulation(s, w, eval, opt);
  EXPECT_EQ(to_json(a), to_json(b));

  // A regular agent shares only something it has received before.
  std::vector<int> first_receipt(w.population.profiles.size(), 1 << 30);
  for (const auto& rc : trace.receipts)
    first_receipt[rc.receiver] = std::min(first_receipt[rc.receiver], rc.step);
  for (const auto& sh : trace.shares) {
    if (w.population.profiles[sh.sender].is_bot()) {
      EXPECT_EQ(sh.mode, ShareMode::original);
      continue;
    }
    EXPECT_LT(first_receipt[sh.sender], sh.step);
    EXPECT_NE(sh.mode, ShareMode::original);
  }
  for (double tt : trace.final_trust) {
    EXPECT_GE(tt, 0.0);
    EXPECT_LE(tt, 1.0);
  }
  // Exposure never shrinks.
  const auto topic = a.community_position(a.topic);
  for (std::size_t k = 1; k < a.series.size(); ++k)
    EXPECT_LE(a.series[k][topic].sr, a.series[k - 1][topic].sr + 1e-12);
}

TEST(Engine, ProgressLinesPerRecordedStep) {
  Scenario s = make_shell_scenario();
  s.params.total_steps = 24;
  const World w = star_world(5, false);
  SyntheticEvaluator eval(1);
  std::ostringstream progress;
  RunOptions opt;
  opt.progress = &progress;
  opt.record_cadence = 12;
  const RunReport r = run_simulation(s, w, eval, opt);
  EXPECT_EQ(r.steps, (std::vector<int>{0, 12, 24}));
  const std::string text = progress.str();
  const auto lines = std::count(text.begin(), text.end(), '\n');
  EXPECT_EQ(static_cast<std::size_t>(lines), r.steps.size());
}

TEST(Engine, EvaluatorFailureMarksRunIncomplete) {
  Scenario s = make_shell_scenario();
  s.content_catalog[0].plausibility.reset();
  const World w = star_world(3, false);
  FailingEvaluator eval;
  const RunReport r = run_simulation(s, w, eval);
  EXPECT_FALSE(r.complete);
  EXPECT_NE(r.error.find("offline"), std::string::npos);
}

TEST(SnapshotRatios, CountsRegularMembers) {
  std::vector<AgentProfile> profiles;
  std::vector<Status> status;
  std::vector<std::size_t> members;
  for (std::size_t i = 0; i < 100; ++i) {
    profiles.push_back(make_profile("u" + std::to_string(i), AgentKind::regular, 1));
    members.push_back(i);
    Status st = Status::susceptible;
    if (i < 15) st = Status::uninfected_spreader;
    else if (i < 25) st = Status::infected_spreader;
    else if (i < 40) st = Status::exposed;
    status.push_back(st);
  }
  profiles.push_back(make_profile("bot", AgentKind::malicious_bot, 1));
  status.push_back(Status::infected_spreader);
  members.push_back(100);
  const Snapshot snap = snapshot_ratios(status, profiles, members);
  EXPECT_DOUBLE_EQ(snap.sr, 0.6);
  EXPECT_DOUBLE_EQ(snap.er, 0.4);
  EXPECT_DOUBLE_EQ(snap.ir, 0.1);
  EXPECT_DOUBLE_EQ(snap.ur, 0.15);

  const Snapshot initial = snapshot_ratios(std::vector<Status>(100, Status::susceptible),
                                           std::span(profiles).first(100), std::span(members).first(100));
  EXPECT_EQ(initial.sr, 1.0);
  EXPECT_EQ(initial.er + initial.ir + initial.ur, 0.0);
}
