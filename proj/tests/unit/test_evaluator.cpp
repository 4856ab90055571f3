#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "madd/remote_evaluator.hpp"
#include "madd/synthetic_evaluator.hpp"

using namespace madd;

namespace {

class FixedUsageEvaluator final : public Evaluator {
 public:
  std::string backend_name() const override { return "fixed"; }

 protected:
  EvaluationResponse do_evaluate(const EvaluationRequest&) override {
    EvaluationResponse r;
    r.scores[kScoreKey] = 0.5;
    r.usage.tokens_in = 60;
    r.usage.tokens_out = 40;
    return r;
  }
};

EvaluationRequest persuasion(std::string text, const char* strategy) {
  EvaluationRequest r;
  r.kind = EvalKind::persuasiveness;
  r.subject_texts = {std::move(text)};
  r.context[ctx::content_kind] = "correction";
  r.context[ctx::strategy] = strategy;
  r.context[ctx::community] = "Sports";
  return r;
}

EvaluationRequest community_request(EvalKind kind) {
  EvaluationRequest r;
  r.kind = kind;
  r.communities = {"Sports", "Politics"};
  r.subject_texts = {"big game tonight"};
  return r;
}

}  // namespace

TEST(SyntheticEvaluator, PureFunctionOfRequestAndSeed) {
  SyntheticEvaluator a(5), b(5), c(6);
  const auto req = community_request(EvalKind::trust_threshold);
  EXPECT_EQ(a.evaluate(req).scores, b.evaluate(req).scores);
  EXPECT_EQ(a.evaluate(req).scores, a.evaluate(req).scores);
  EXPECT_NE(a.evaluate(req).scores, c.evaluate(req).scores);
}

TEST(SyntheticEvaluator, ScoresStayInRange) {
  SyntheticEvaluator e(1);
  for (int i = 0; i < 200; ++i) {
    auto ic = community_request(EvalKind::interest_community);
    ic.context[ctx::subject_id] = "u" + std::to_string(i);
    for (const auto& [name, v] : e.evaluate(ic).scores) {
      EXPECT_GE(v, 1.0);
      EXPECT_LE(v, 10.0);
    }
  }
}

TEST(SyntheticEvaluator, EmptyTextIsNotPersuasive) {
  SyntheticEvaluator e(1);
  EXPECT_EQ(e.evaluate(persuasion("", "fact_based")).score(), 0.0);
}

TEST(SyntheticEvaluator, CitedFactsOutscoreNarratives) {
  SyntheticEvaluator e(3);
  double fact = 0, narrative = 0;
  constexpr int kN = 400;
  for (int i = 0; i < kN; ++i) {
    const std::string tag = " case " + std::to_string(i);
    fact += e.evaluate(persuasion("According to the official report the data show no fraud" + tag,
                                  "fact_based"))
                .score();
    narrative += e.evaluate(persuasion("I was there with my family and we saw it all happen" + tag,
                                       "narrative_based"))
                     .score();
  }
  EXPECT_GT(fact / kN, narrative / kN);
}

TEST(SyntheticEvaluator, BeliefFollowsDiscernment) {
  SyntheticEvaluator e(8);
  int believed = 0;
  for (int i = 0; i < 2000; ++i) {
    EvaluationRequest r;
    r.kind = EvalKind::belief_check;
    r.subject_texts = {"claim " + std::to_string(i)};
    r.context[ctx::trust] = "0.6";
    r.context[ctx::plausibility] = "0.5";
    believed += e.evaluate(r).score() == 1.0;
  }
  EXPECT_NEAR(believed / 2000.0, 0.2, 0.03);
}

TEST(Ledger, CountsCallsAndTokensPerCommunity) {
  FixedUsageEvaluator e;
  EXPECT_EQ(e.ledger_snapshot(), ResourceLedger{});
  EvaluationRequest r;
  r.kind = EvalKind::plausibility;
  r.context[ctx::community] = "Sports";
  e.evaluate(r);
  e.evaluate(r);
  const auto mid = e.ledger_snapshot();
  r.context.erase(ctx::community);
  e.evaluate(r);
  const auto ledger = e.ledger_snapshot();
  EXPECT_EQ(ledger.total.calls, 3);
  EXPECT_EQ(ledger.total.tokens(), 300);
  EXPECT_EQ(ledger.per_community.at("Sports").calls, 2);
  EXPECT_EQ(ledger.per_community.at(kUnattributed).tokens(), 100);
  const auto delta = ledger.since(mid);
  EXPECT_EQ(delta.total.calls, 1);
  EXPECT_FALSE(delta.per_community.count("Sports"));
  e.reset_ledger();
  EXPECT_EQ(e.ledger_snapshot().total.calls, 0);
}

TEST(ValidateResponse, RejectsOutOfRangeAndMissing) {
  auto ic = community_request(EvalKind::interest_community);
  EvaluationResponse r;
  r.scores = {{"Sports", 4}};
  EXPECT_THROW(validate_response(ic, r), EvaluatorError);
  r.scores["Politics"] = 11;
  EXPECT_THROW(validate_response(ic, r), EvaluatorError);
  r.scores["Politics"] = 2;
  EXPECT_NO_THROW(validate_response(ic, r));
}

TEST(ParseModelReply, Plausibility) {
  EvaluationRequest r;
  r.kind = EvalKind::plausibility;
  const auto ok = parse_model_reply(r, R"({"PlausibilityScore": 0.7, "Reasoning": "vague"})");
  EXPECT_DOUBLE_EQ(ok.score(), 0.7);
  EXPECT_EQ(ok.reasoning, "vague");
  try {
    parse_model_reply(r, R"({"PlausibilityScore": 1.4})");
    FAIL();
  } catch (const EvaluatorError& e) {
    EXPECT_EQ(e.kind(), EvaluatorError::Kind::malformed_response);
  }
  EXPECT_THROW(parse_model_reply(r, "I think 0.7"), EvaluatorError);
}

TEST(ParseModelReply, PersuasivenessInFence) {
  EvaluationRequest r;
  r.kind = EvalKind::persuasiveness;
  EXPECT_DOUBLE_EQ(
      parse_model_reply(r, "```json\n{\"Score\": 0.55, \"Reasoning\": \"ok\"}\n```").score(), 0.55);
}

TEST(ParseModelReply, CommunityLists) {
  auto tt = community_request(EvalKind::trust_threshold);
  tt.communities = {"A", "B", "C", "D", "E", "F"};
  std::string reply = R"({"Trust Threshold Scores": [)";
  for (char c = 'A'; c <= 'F'; ++c) {
    reply += std::string(R"({"Community": ")") + c + R"(", "Score": 0.)" + std::to_string(c - 'A' + 1) + "}";
    if (c != 'F') reply += ",";
  }
  reply += "]}";
  const auto parsed = parse_model_reply(tt, reply);
  ASSERT_EQ(parsed.scores.size(), 6u);
  EXPECT_DOUBLE_EQ(parsed.scores.at("C"), 0.3);

  auto missing = tt;
  missing.communities.push_back("G");
  EXPECT_THROW(parse_model_reply(missing, reply), EvaluatorError);

  auto ic = community_request(EvalKind::interest_community);
  const auto insufficient = parse_model_reply(
      ic, R"({"Interest Community Scores": [{"Community": "Sports", "Score": 9},
              {"Community": "Politics", "Score": "Insufficient Data"}]})");
  EXPECT_EQ(insufficient.scores.at("Politics"), 1.0);
}

TEST(ParseModelReply, BeliefVerdict) {
  EvaluationRequest r;
  r.kind = EvalKind::belief_check;
  EXPECT_EQ(parse_model_reply(r, R"({"Believe": true})").score(), 1.0);
  EXPECT_EQ(parse_model_reply(r, R"({"Believe": false})").score(), 0.0);
  EXPECT_THROW(parse_model_reply(r, R"({"Verdict": true})"), EvaluatorError);
}

TEST(PromptTemplates, ShippedFilesMatchBuiltins) {
  for (auto kind : {EvalKind::interest_community, EvalKind::trust_threshold,
                    EvalKind::plausibility, EvalKind::persuasiveness, EvalKind::belief_check}) {
    const auto path = std::filesystem::path(MADD_PROMPT_DIR) / (std::string(to_string(kind)) + ".txt");
    std::ifstream in(path);
    ASSERT_TRUE(in) << path;
    std::stringstream ss;
    ss << in.rdbuf();
    EXPECT_EQ(ss.str(), builtin_prompt(kind)) << path;
  }
}

TEST(PromptTemplates, RenderFillsKnownSlots) {
  EXPECT_EQ(PromptTemplates::render("a {x} b {y}", {{"x", "1"}}), "a 1 b {y}");
  const PromptTemplates t;
  auto r = community_request(EvalKind::trust_threshold);
  const auto text = t.render(r);
  EXPECT_NE(text.find("Politics"), std::string::npos);
  EXPECT_NE(text.find("big game tonight"), std::string::npos);
}
