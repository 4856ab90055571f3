#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace madd {

enum class EvalKind {
  interest_community,
  trust_threshold,
  plausibility,
  persuasiveness,
  belief_check,
};

std::string_view to_string(EvalKind kind);

/// Context keys understood by every backend.
namespace ctx {
inline constexpr const char* community = "community";        // ledger attribution
inline constexpr const char* history = "history";            // receiver history summary
inline constexpr const char* strategy = "strategy";          // none | fact_based | narrative_based
inline constexpr const char* content_kind = "content_kind";  // disinformation | correction
inline constexpr const char* polarity = "polarity";          // endorse | refute
inline constexpr const char* source_community = "source_community";
inline constexpr const char* description = "description";
inline constexpr const char* subject_id = "subject_id";
inline constexpr const char* trust = "trust";                // belief_check: TT̂
inline constexpr const char* plausibility = "plausibility";  // belief_check: DP
}  // namespace ctx

struct EvaluationRequest {
  EvalKind kind = EvalKind::plausibility;
  std::vector<std::string> subject_texts;
  /// Community names; required for interest_community and trust_threshold.
  std::vector<std::string> communities;
  std::map<std::string, std::string> context;

  /// Stable serialization used for hashing and logging.
  std::string canonical() const;
};

struct Usage {
  std::int64_t calls = 0;
  std::int64_t tokens_in = 0;
  std::int64_t tokens_out = 0;
  double latency_seconds = 0.0;
  bool approximate_tokens = false;

  std::int64_t tokens() const noexcept { return tokens_in + tokens_out; }
  Usage& operator+=(const Usage& other) noexcept;
  bool operator==(const Usage&) const = default;
};

/// Scores keyed by community name for the two per-community kinds and by
/// "score" (plausibility, persuasiveness) or "believe" (belief_check, 0/1).
struct EvaluationResponse {
  std::map<std::string, double> scores;
  std::string reasoning;
  Usage usage;

  double score() const;  // the single "score"/"believe" entry
};

inline constexpr const char* kScoreKey = "score";
inline constexpr const char* kBelieveKey = "believe";
inline constexpr const char* kUnattributed = "(none)";

class EvaluatorError : public std::runtime_error {
 public:
  enum class Kind { malformed_response, remote_unavailable, range_violation };
  EvaluatorError(Kind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

/// Per-community and total evaluator usage.
struct ResourceLedger {
  std::map<std::string, Usage> per_community;
  Usage total;

  void record(const std::string& community, const Usage& usage);
  /// Entry-wise `*this - earlier`.
  ResourceLedger since(const ResourceLedger& earlier) const;
  bool operator==(const ResourceLedger&) const = default;
};

/// The scoring contract behind every judgement the simulation delegates.
///
/// `evaluate` validates each response against the kind's range before
/// returning it and records usage under context["community"].
class Evaluator {
 public:
  virtual ~Evaluator() = default;

  EvaluationResponse evaluate(const EvaluationRequest& request);
  ResourceLedger ledger_snapshot() const;
  void reset_ledger();

  virtual std::string backend_name() const = 0;

 protected:
  virtual EvaluationResponse do_evaluate(const EvaluationRequest& request) = 0;

 private:
  mutable std::mutex mutex_;
  ResourceLedger ledger_;
};

/// Throws EvaluatorError(range_violation) unless `response` carries every
/// field `request.kind` requires, each inside its documented range.
void validate_response(const EvaluationRequest& request, const EvaluationResponse& response);

/// F or F' for `text` as received by a user with `receiver_history`.
double persuasiveness(Evaluator& evaluator, const std::string& text,
                      const std::map<std::string, std::string>& context);

/// Whitespace token count, the fallback when a provider omits usage.
std::int64_t approximate_tokens(std::string_view text) noexcept;

}  // namespace madd
