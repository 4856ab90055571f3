#pragma once

#include <cstdint>

#include "madd/evaluator.hpp"

namespace madd {

struct SyntheticOptions {
  // Trust threshold: per-user base plus per-community jitter, clipped to [0, 1].
  double tt_mean = 0.5;
  double tt_user_sd = 0.14;
  double tt_community_sd = 0.05;
  // Interest: home community high, others from a shifted gamma; both on 1-10.
  // Other communities are reported as lacking data (scored 1) with the given
  // probability, as a model does when the history never touches them.
  double ic_home_mean = 9.0;
  double ic_home_sd = 0.8;
  double ic_other_shape = 1.5;
  double ic_other_scale = 1.6;
  double ic_insufficient_probability = 0.5;
  // Persuasiveness shift when a correction does or does not cite sources.
  double citation_shift = 0.1;
  // Quotes by non-believers that push back on the disinformation.
  double refute_a = 4.0;
  double refute_b = 4.0;
};

/// Deterministic stand-in for a language model.
///
/// Every response is a pure function of the request's canonical bytes and
/// the seed. Trust draws are keyed by context["subject_id"] when present so
/// one user's thresholds share a base across calls.
class SyntheticEvaluator final : public Evaluator {
 public:
  explicit SyntheticEvaluator(std::uint64_t seed, SyntheticOptions options = {})
      : seed_(seed), options_(options) {}

  std::string backend_name() const override { return "synthetic"; }
  std::uint64_t seed() const noexcept { return seed_; }
  const SyntheticOptions& options() const noexcept { return options_; }

 protected:
  EvaluationResponse do_evaluate(const EvaluationRequest& request) override;

 private:
  std::uint64_t seed_;
  SyntheticOptions options_;
};

/// Text features used by the synthetic plausibility and persuasiveness rules.
struct TextFeatures {
  int emotional = 0;   // exclamation marks, alarm words, shouted words
  int absolute = 0;    // "always", "never", "100%", ...
  int numbers = 0;     // digit runs
  int citations = 0;   // "report", "according to", "data", urls, ...
  int tokens = 0;
};

TextFeatures text_features(std::string_view text);

}  // namespace madd
