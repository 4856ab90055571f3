#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>

#include "madd/evaluator.hpp"
#include "madd/scenario.hpp"

namespace madd {

/// Prompt text per request kind with `{placeholder}` slots.
class PromptTemplates {
 public:
  /// Built-in templates.
  PromptTemplates();
  /// Built-ins overridden by `<kind>.txt` files found in `dir`.
  static PromptTemplates from_directory(const std::filesystem::path& dir);

  const std::string& get(EvalKind kind) const;
  void set(EvalKind kind, std::string text);

  /// Replaces every `{name}` with vars[name]; unknown slots are left as-is.
  static std::string render(const std::string& text,
                            const std::map<std::string, std::string>& vars);

  /// The prompt for `request`, with slots filled from its fields.
  std::string render(const EvaluationRequest& request) const;

 private:
  std::map<EvalKind, std::string> text_;
};

std::string builtin_prompt(EvalKind kind);

/// Interprets a model's reply text (possibly fenced in ```json) for `request`.
/// Throws EvaluatorError(malformed_response) on non-JSON, missing fields,
/// missing communities or out-of-range scores.
EvaluationResponse parse_model_reply(const EvaluationRequest& request, std::string_view reply);

/// Chat-completion client. Requests are bounded to `max_in_flight`
/// concurrent calls; a malformed reply is retried once.
class RemoteEvaluator final : public Evaluator {
 public:
  /// `api_key` empty: read MADD_LLM_API_KEY.
  explicit RemoteEvaluator(RemoteConfig config, std::string api_key = {});
  ~RemoteEvaluator() override;

  std::string backend_name() const override { return "remote"; }

 protected:
  EvaluationResponse do_evaluate(const EvaluationRequest& request) override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace madd
