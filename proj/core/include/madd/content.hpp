#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>

#include "madd/common.hpp"

namespace madd {

class Evaluator;
struct SimulationParams;

/// A disinformation item or a corrective message.
struct ContentItem {
  std::string content_id;
  std::string topic;  // community name
  ContentKind kind = ContentKind::disinformation;
  Strategy strategy = Strategy::none;
  std::string text;
  std::optional<double> plausibility;  // DP, disinformation only

  bool operator==(const ContentItem&) const = default;
};

class ContentError : public std::runtime_error {
 public:
  enum class Kind { invalid_item, no_correction_available };
  ContentError(Kind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

/// Empty string when the item is consistent, else a description of the
/// first broken invariant (kind/strategy pairing, DP presence and range).
std::string check_item(const ContentItem& item);

/// When and how legitimate bots intervene.
struct InterventionPlan {
  Stage stage = Stage::control;
  StepRange window{0, -1};
  Strategy strategy = Strategy::none;

  static InterventionPlan control();
  /// Window taken from the configured EI/MI/LI range for `stage`.
  static InterventionPlan make(Stage stage, Strategy strategy, const SimulationParams& params);

  bool operator==(const InterventionPlan&) const = default;
};

/// Empty when the plan is consistent with `params`, else the violated rule.
std::string check_plan(const InterventionPlan& plan, const SimulationParams& params);

bool is_intervention_active(const InterventionPlan& plan, int t);

/// Scores DP through the evaluator and stores it on the item.
double score_plausibility(ContentItem& item, Evaluator& evaluator);

/// Correction for `disinfo`'s topic under `strategy`; lowest content_id wins
/// among several candidates.
const ContentItem& correction_for(const ContentItem& disinfo, Strategy strategy,
                                  std::span<const ContentItem> catalog);

}  // namespace madd
