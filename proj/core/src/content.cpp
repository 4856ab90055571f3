#include "madd/content.hpp"

#include <algorithm>
#include <cmath>

#include "madd/evaluator.hpp"
#include "madd/scenario.hpp"

namespace madd {

std::string_view to_string(Stage stage) {
  switch (stage) {
    case Stage::early: return "early";
    case Stage::mid: return "mid";
    case Stage::late: return "late";
    case Stage::control: return "control";
  }
  return "control";
}

std::string_view to_string(Strategy strategy) {
  switch (strategy) {
    case Strategy::none: return "none";
    case Strategy::fact_based: return "fact_based";
    case Strategy::narrative_based: return "narrative_based";
  }
  return "none";
}

std::string_view to_string(ContentKind kind) {
  return kind == ContentKind::disinformation ? "disinformation" : "correction";
}

std::optional<Stage> parse_stage(std::string_view text) {
  if (text == "early") return Stage::early;
  if (text == "mid") return Stage::mid;
  if (text == "late") return Stage::late;
  if (text == "control") return Stage::control;
  return std::nullopt;
}

std::optional<Strategy> parse_strategy(std::string_view text) {
  if (text == "none") return Strategy::none;
  if (text == "fact_based" || text == "fact") return Strategy::fact_based;
  if (text == "narrative_based" || text == "narrative") return Strategy::narrative_based;
  return std::nullopt;
}

std::optional<ContentKind> parse_content_kind(std::string_view text) {
  if (text == "disinformation") return ContentKind::disinformation;
  if (text == "correction") return ContentKind::correction;
  return std::nullopt;
}

std::string check_item(const ContentItem& item) {
  if (item.content_id.empty()) return "content_id is empty";
  if (item.kind == ContentKind::correction && item.strategy == Strategy::none)
    return "correction '" + item.content_id + "' needs a strategy";
  if (item.kind == ContentKind::disinformation && item.strategy != Strategy::none)
    return "disinformation '" + item.content_id + "' must have strategy none";
  if (item.kind == ContentKind::correction && item.plausibility)
    return "correction '" + item.content_id + "' must not carry a plausibility";
  if (item.plausibility && !(*item.plausibility >= 0.0 && *item.plausibility <= 1.0))
    return "plausibility of '" + item.content_id + "' outside [0, 1]";
  return {};
}

InterventionPlan InterventionPlan::control() { return {}; }

InterventionPlan InterventionPlan::make(Stage stage, Strategy strategy,
                                        const SimulationParams& params) {
  if (stage == Stage::control) return control();
  InterventionPlan plan;
  plan.stage = stage;
  plan.strategy = strategy;
  auto it = params.intervention_windows.find(stage);
  if (it != params.intervention_windows.end()) plan.window = it->second;
  return plan;
}

std::string check_plan(const InterventionPlan& plan, const SimulationParams& params) {
  if (plan.stage == Stage::control) {
    if (plan.strategy != Strategy::none) return "control plan must use strategy none";
    return {};
  }
  if (plan.strategy == Strategy::none)
    return std::string(to_string(plan.stage)) + " plan needs a correction strategy";
  auto it = params.intervention_windows.find(plan.stage);
  if (it == params.intervention_windows.end())
    return "no window configured for stage " + std::string(to_string(plan.stage));
  if (!(it->second == plan.window))
    return "plan window does not match the configured " +
           std::string(to_string(plan.stage)) + " window";
  return {};
}

bool is_intervention_active(const InterventionPlan& plan, int t) {
  return plan.stage != Stage::control && plan.window.contains(t);
}

double score_plausibility(ContentItem& item, Evaluator& evaluator) {
  if (item.kind != ContentKind::disinformation)
    throw ContentError(ContentError::Kind::invalid_item,
                       "plausibility applies to disinformation only: " + item.content_id);
  EvaluationRequest request;
  request.kind = EvalKind::plausibility;
  request.subject_texts = {item.text};
  request.context[ctx::community] = item.topic;
  request.context[ctx::subject_id] = item.content_id;
  const double dp = evaluator.evaluate(request).score();
  item.plausibility = dp;
  return dp;
}

const ContentItem& correction_for(const ContentItem& disinfo, Strategy strategy,
                                  std::span<const ContentItem> catalog) {
  const ContentItem* best = nullptr;
  for (const auto& item : catalog) {
    if (item.kind != ContentKind::correction || item.strategy != strategy ||
        item.topic != disinfo.topic)
      continue;
    if (!best || item.content_id < best->content_id) best = &item;
  }
  if (!best)
    throw ContentError(ContentError::Kind::no_correction_available,
                       "no " + std::string(to_string(strategy)) + " correction for topic '" +
                           disinfo.topic + "'");
  return *best;
}

}  // namespace madd
