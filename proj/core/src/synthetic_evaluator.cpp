#include "madd/synthetic_evaluator.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <random>
#include <string>

#include "madd/rng.hpp"

namespace madd {
namespace {

constexpr std::array<std::string_view, 12> kAlarmWords{
    "shocking", "secret", "exposed", "urgent", "truth", "cover-up",
    "hidden",   "scandal", "wake up", "banned", "leaked", "they don't want"};
constexpr std::array<std::string_view, 8> kAbsoluteWords{
    "always", "never", "100%", "proven", "everyone", "nobody", "guaranteed", "all of"};
constexpr std::array<std::string_view, 10> kCitationWords{
    "according to", "report",   "data",     "study",   "source",
    "published",    "official", "http",     "records", "statistics"};

std::string lowered(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

int count_occurrences(const std::string& haystack, std::string_view needle) {
  int n = 0;
  for (auto pos = haystack.find(needle); pos != std::string::npos;
       pos = haystack.find(needle, pos + needle.size()))
    ++n;
  return n;
}

double clip01(double x) { return std::clamp(x, 0.0, 1.0); }

double beta_draw(Substream& rng, double a, double b) {
  std::gamma_distribution<double> ga(a, 1.0);
  std::gamma_distribution<double> gb(b, 1.0);
  const double x = ga(rng);
  const double y = gb(rng);
  return x / (x + y);
}

std::string context_value(const EvaluationRequest& r, const char* key) {
  auto it = r.context.find(key);
  return it == r.context.end() ? std::string{} : it->second;
}

double context_number(const EvaluationRequest& r, const char* key, double fallback) {
  const std::string v = context_value(r, key);
  if (v.empty()) return fallback;
  try {
    return std::stod(v);
  } catch (const std::exception&) {
    return fallback;
  }
}

std::string joined_text(const EvaluationRequest& r) {
  std::string all;
  for (const auto& t : r.subject_texts) {
    all += t;
    all += '\n';
  }
  return all;
}

}  // namespace

TextFeatures text_features(std::string_view text) {
  TextFeatures f;
  const std::string lower = lowered(text);
  f.emotional = static_cast<int>(std::count(text.begin(), text.end(), '!'));
  for (auto w : kAlarmWords) f.emotional += count_occurrences(lower, w);
  for (auto w : kAbsoluteWords) f.absolute += count_occurrences(lower, w);
  for (auto w : kCitationWords) f.citations += count_occurrences(lower, w);

  bool in_digits = false;
  std::size_t word_len = 0;
  bool word_upper = true;
  auto close_word = [&] {
    if (word_len >= 4 && word_upper) ++f.emotional;
    word_len = 0;
    word_upper = true;
  };
  for (unsigned char c : text) {
    const bool digit = std::isdigit(c) != 0;
    if (digit && !in_digits) ++f.numbers;
    in_digits = digit;
    if (std::isalpha(c)) {
      ++word_len;
      word_upper = word_upper && std::isupper(c);
    } else {
      close_word();
    }
  }
  close_word();
  f.tokens = static_cast<int>(approximate_tokens(text));
  return f;
}

EvaluationResponse SyntheticEvaluator::do_evaluate(const EvaluationRequest& request) {
  EvaluationResponse out;
  const std::uint64_t request_key = combine_keys({seed_, fnv1a64(request.canonical())});
  const std::string subject = context_value(request, ctx::subject_id);
  const std::uint64_t subject_key =
      subject.empty() ? fnv1a64(joined_text(request)) : fnv1a64(subject);

  switch (request.kind) {
    case EvalKind::interest_community: {
      std::string home = context_value(request, ctx::source_community);
      if (std::find(request.communities.begin(), request.communities.end(), home) ==
              request.communities.end() &&
          !request.communities.empty()) {
        Substream pick({seed_, subject_key, 0x1c});
        home = request.communities[pick() % request.communities.size()];
      }
      for (const auto& name : request.communities) {
        Substream rng({seed_, subject_key, fnv1a64(name), 0x1c});
        double raw;
        if (name == home) {
          std::normal_distribution<double> nd(options_.ic_home_mean, options_.ic_home_sd);
          raw = nd(rng);
        } else if (rng.bernoulli(options_.ic_insufficient_probability)) {
          raw = 1.0;
        } else {
          std::gamma_distribution<double> gd(options_.ic_other_shape, options_.ic_other_scale);
          raw = 1.0 + gd(rng);
        }
        out.scores[name] = std::clamp(std::round(raw), 1.0, 10.0);
      }
      out.reasoning = "synthetic interest profile, home community " + home;
      break;
    }
    case EvalKind::trust_threshold: {
      Substream base_rng({seed_, subject_key, 0x77});
      std::normal_distribution<double> base(options_.tt_mean, options_.tt_user_sd);
      const double user_base = base(base_rng);
      for (const auto& name : request.communities) {
        Substream rng({seed_, subject_key, fnv1a64(name), 0x77});
        std::normal_distribution<double> jitter(0.0, options_.tt_community_sd);
        out.scores[name] = clip01(user_base + jitter(rng));
      }
      out.reasoning = "synthetic trust profile";
      break;
    }
    case EvalKind::plausibility: {
      const TextFeatures f = text_features(joined_text(request));
      Substream rng(request_key);
      const double jitter = (rng.uniform() - 0.5) * 0.1;
      const double dp = 0.35 + 0.06 * std::min(f.emotional, 4) +
                        0.05 * std::min(f.absolute, 3) + 0.04 * std::min(f.numbers, 3) +
                        jitter;
      out.scores[kScoreKey] = clip01(dp);
      out.reasoning = "synthetic plausibility from framing features";
      break;
    }
    case EvalKind::persuasiveness: {
      const std::string text = joined_text(request);
      const TextFeatures f = text_features(text);
      if (f.tokens == 0) {
        out.scores[kScoreKey] = 0.0;
        break;
      }
      Substream rng(request_key);
      const std::string kind = context_value(request, ctx::content_kind);
      const std::string polarity = context_value(request, ctx::polarity);
      double score;
      if (kind == "correction") {
        const std::string strategy = context_value(request, ctx::strategy);
        const bool fact = strategy == "fact_based";
        score = fact ? beta_draw(rng, 5.0, 3.0) : beta_draw(rng, 4.0, 4.0);
        score += f.citations > 0 ? options_.citation_shift : -options_.citation_shift;
      } else if (polarity == "refute") {
        score = beta_draw(rng, options_.refute_a, options_.refute_b);
      } else {
        // DP already enters belief through discernment; the message's pull on
        // trust depends on how it argues, not on how plausible the claim is.
        score = beta_draw(rng, 4.0, 4.0);
        score += f.citations > 0 ? options_.citation_shift : -options_.citation_shift;
      }
      if (f.tokens < 8) score -= 0.05;
      out.scores[kScoreKey] = clip01(score);
      break;
    }
    case EvalKind::belief_check: {
      const double tt = clip01(context_number(request, ctx::trust, 0.5));
      const double dp = clip01(context_number(request, ctx::plausibility, 0.5));
      const double da = 1.0 - (1.0 - tt) * dp;
      Substream rng(request_key);
      out.scores[kBelieveKey] = rng.bernoulli(1.0 - da) ? 1.0 : 0.0;
      break;
    }
  }

  std::int64_t tokens_in = 0;
  for (const auto& t : request.subject_texts) tokens_in += approximate_tokens(t);
  for (const auto& [k, v] : request.context) tokens_in += approximate_tokens(v);
  tokens_in += static_cast<std::int64_t>(request.communities.size());
  out.usage.tokens_in = tokens_in;
  out.usage.tokens_out = approximate_tokens(out.reasoning) +
                         static_cast<std::int64_t>(out.scores.size()) * 2;
  out.usage.approximate_tokens = true;
  return out;
}

}  // namespace madd
