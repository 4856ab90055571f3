#include "madd/evaluator.hpp"

#include <cctype>
#include <cmath>

namespace madd {

std::string_view to_string(EvalKind kind) {
  switch (kind) {
    case EvalKind::interest_community: return "interest_community";
    case EvalKind::trust_threshold: return "trust_threshold";
    case EvalKind::plausibility: return "plausibility";
    case EvalKind::persuasiveness: return "persuasiveness";
    case EvalKind::belief_check: return "belief_check";
  }
  return "plausibility";
}

namespace {

// Length-prefixed fields so no choice of separators can collide.
void append_field(std::string& out, std::string_view field) {
  out += std::to_string(field.size());
  out += ':';
  out += field;
  out += ';';
}

}  // namespace

std::string EvaluationRequest::canonical() const {
  std::string out;
  append_field(out, to_string(kind));
  out += "T";
  out += std::to_string(subject_texts.size());
  for (const auto& text : subject_texts) append_field(out, text);
  out += "C";
  out += std::to_string(communities.size());
  for (const auto& name : communities) append_field(out, name);
  out += "K";
  out += std::to_string(context.size());
  for (const auto& [key, value] : context) {
    append_field(out, key);
    append_field(out, value);
  }
  return out;
}

Usage& Usage::operator+=(const Usage& other) noexcept {
  calls += other.calls;
  tokens_in += other.tokens_in;
  tokens_out += other.tokens_out;
  latency_seconds += other.latency_seconds;
  approximate_tokens = approximate_tokens || other.approximate_tokens;
  return *this;
}

double EvaluationResponse::score() const {
  if (auto it = scores.find(kScoreKey); it != scores.end()) return it->second;
  if (auto it = scores.find(kBelieveKey); it != scores.end()) return it->second;
  throw EvaluatorError(EvaluatorError::Kind::malformed_response,
                       "response has no single score");
}

void ResourceLedger::record(const std::string& community, const Usage& usage) {
  per_community[community.empty() ? kUnattributed : community] += usage;
  total += usage;
}

ResourceLedger ResourceLedger::since(const ResourceLedger& earlier) const {
  ResourceLedger diff;
  for (const auto& [name, usage] : per_community) {
    Usage d = usage;
    if (auto it = earlier.per_community.find(name); it != earlier.per_community.end()) {
      d.calls -= it->second.calls;
      d.tokens_in -= it->second.tokens_in;
      d.tokens_out -= it->second.tokens_out;
      d.latency_seconds -= it->second.latency_seconds;
    }
    if (d.calls != 0 || d.tokens() != 0) diff.record(name, d);
  }
  return diff;
}

namespace {

void require_in(const std::string& what, double value, double lo, double hi) {
  if (!(value >= lo && value <= hi))
    throw EvaluatorError(EvaluatorError::Kind::range_violation,
                         what + " = " + std::to_string(value) + " outside [" +
                             std::to_string(lo) + ", " + std::to_string(hi) + "]");
}

}  // namespace

void validate_response(const EvaluationRequest& request, const EvaluationResponse& response) {
  switch (request.kind) {
    case EvalKind::interest_community:
    case EvalKind::trust_threshold: {
      const bool interest = request.kind == EvalKind::interest_community;
      for (const auto& name : request.communities) {
        auto it = response.scores.find(name);
        if (it == response.scores.end())
          throw EvaluatorError(EvaluatorError::Kind::malformed_response,
                               "response lacks community '" + name + "'");
        require_in(name, it->second, interest ? 1.0 : 0.0, interest ? 10.0 : 1.0);
      }
      return;
    }
    case EvalKind::plausibility:
    case EvalKind::persuasiveness: {
      auto it = response.scores.find(kScoreKey);
      if (it == response.scores.end())
        throw EvaluatorError(EvaluatorError::Kind::malformed_response, "response lacks score");
      require_in(std::string(to_string(request.kind)), it->second, 0.0, 1.0);
      return;
    }
    case EvalKind::belief_check: {
      auto it = response.scores.find(kBelieveKey);
      if (it == response.scores.end())
        throw EvaluatorError(EvaluatorError::Kind::malformed_response,
                             "response lacks belief verdict");
      if (it->second != 0.0 && it->second != 1.0)
        throw EvaluatorError(EvaluatorError::Kind::range_violation,
                             "belief verdict must be 0 or 1");
      return;
    }
  }
}

EvaluationResponse Evaluator::evaluate(const EvaluationRequest& request) {
  EvaluationResponse response = do_evaluate(request);
  validate_response(request, response);
  response.usage.calls = 1;
  std::string community;
  if (auto it = request.context.find(ctx::community); it != request.context.end())
    community = it->second;
  std::lock_guard lock(mutex_);
  ledger_.record(community, response.usage);
  return response;
}

ResourceLedger Evaluator::ledger_snapshot() const {
  std::lock_guard lock(mutex_);
  return ledger_;
}

void Evaluator::reset_ledger() {
  std::lock_guard lock(mutex_);
  ledger_ = {};
}

double persuasiveness(Evaluator& evaluator, const std::string& text,
                      const std::map<std::string, std::string>& context) {
  EvaluationRequest request;
  request.kind = EvalKind::persuasiveness;
  request.subject_texts = {text};
  request.context = context;
  return evaluator.evaluate(request).score();
}

std::int64_t approximate_tokens(std::string_view text) noexcept {
  std::int64_t count = 0;
  bool in_word = false;
  for (unsigned char ch : text) {
    const bool space = std::isspace(ch) != 0;
    if (!space && !in_word) ++count;
    in_word = !space;
  }
  return count;
}

}  // namespace madd
