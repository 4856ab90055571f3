#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace madd {

/// Inclusive range of simulation steps.
struct StepRange {
  int first = 1;
  int last = 1;

  bool contains(int t) const noexcept { return t >= first && t <= last; }
  int length() const noexcept { return last >= first ? last - first + 1 : 0; }
  bool operator==(const StepRange&) const = default;
};

/// Inclusive integer range, used for bot activation counts.
struct IntRange {
  int min = 0;
  int max = 0;
  bool operator==(const IntRange&) const = default;
};

enum class Stage { early, mid, late, control };
enum class Strategy { none, fact_based, narrative_based };
enum class ContentKind { disinformation, correction };

std::string_view to_string(Stage stage);
std::string_view to_string(Strategy strategy);
std::string_view to_string(ContentKind kind);

std::optional<Stage> parse_stage(std::string_view text);
/// Accepts the canonical names plus the CLI short forms "fact" and "narrative".
std::optional<Strategy> parse_strategy(std::string_view text);
std::optional<ContentKind> parse_content_kind(std::string_view text);

}  // namespace madd
