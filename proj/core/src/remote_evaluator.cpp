#include "madd/remote_evaluator.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <semaphore>
#include <sstream>

#include "httplib.h"
#include "json.hpp"

namespace madd {

using nlohmann::json;

namespace {

constexpr EvalKind kAllKinds[] = {EvalKind::interest_community, EvalKind::trust_threshold,
                                  EvalKind::plausibility, EvalKind::persuasiveness,
                                  EvalKind::belief_check};

[[noreturn]] void malformed(const std::string& what) {
  throw EvaluatorError(EvaluatorError::Kind::malformed_response, what);
}

std::string_view strip_fences(std::string_view reply) {
  auto first = reply.find('{');
  auto last = reply.rfind('}');
  if (first == std::string_view::npos || last == std::string_view::npos || last < first)
    return reply;
  return reply.substr(first, last - first + 1);
}

double as_number(const json& value, const std::string& field) {
  if (value.is_number()) return value.get<double>();
  if (value.is_string()) {
    const auto& s = value.get_ref<const std::string&>();
    try {
      std::size_t used = 0;
      double v = std::stod(s, &used);
      if (used == s.size()) return v;
    } catch (const std::exception&) {
    }
  }
  malformed("field '" + field + "' is not a number");
}

double checked(double v, double lo, double hi, const std::string& field) {
  if (!(v >= lo && v <= hi))
    malformed("field '" + field + "' = " + std::to_string(v) + " outside [" +
              std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return v;
}

std::string reasoning_of(const json& j) {
  if (auto it = j.find("Reasoning"); it != j.end() && it->is_string())
    return it->get<std::string>();
  return {};
}

void parse_community_scores(const EvaluationRequest& request, const json& doc,
                            EvaluationResponse& out) {
  const bool interest = request.kind == EvalKind::interest_community;
  const char* key = interest ? "Interest Community Scores" : "Trust Threshold Scores";
  auto list = doc.find(key);
  if (list == doc.end() || !list->is_array()) malformed(std::string("missing array '") + key + "'");
  for (const auto& entry : *list) {
    if (!entry.is_object() || !entry.contains("Community") || !entry.contains("Score"))
      malformed("community entry lacks Community/Score");
    const auto name = entry.at("Community").get<std::string>();
    const auto& score = entry.at("Score");
    double v;
    if (score.is_string() && score.get<std::string>() == "Insufficient Data")
      v = interest ? 1.0 : 0.5;
    else
      v = checked(as_number(score, name), interest ? 1.0 : 0.0, interest ? 10.0 : 1.0, name);
    out.scores[name] = v;
    const auto why = reasoning_of(entry);
    if (!why.empty()) out.reasoning += name + ": " + why + "\n";
  }
  for (const auto& name : request.communities)
    if (!out.scores.count(name)) malformed("community '" + name + "' missing from reply");
}

struct Endpoint {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

Endpoint split_endpoint(const std::string& url) {
  const auto scheme_end = url.find("://");
  const auto path_start = url.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

}  // namespace

PromptTemplates::PromptTemplates() {
  for (auto kind : kAllKinds) text_[kind] = builtin_prompt(kind);
}

PromptTemplates PromptTemplates::from_directory(const std::filesystem::path& dir) {
  PromptTemplates t;
  for (auto kind : kAllKinds) {
    std::ifstream in(dir / (std::string(to_string(kind)) + ".txt"), std::ios::binary);
    if (!in) continue;
    std::ostringstream buf;
    buf << in.rdbuf();
    t.set(kind, buf.str());
  }
  return t;
}

const std::string& PromptTemplates::get(EvalKind kind) const { return text_.at(kind); }

void PromptTemplates::set(EvalKind kind, std::string text) { text_[kind] = std::move(text); }

std::string PromptTemplates::render(const std::string& text,
                                    const std::map<std::string, std::string>& vars) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] == '{') {
      const auto close = text.find('}', i + 1);
      if (close != std::string::npos) {
        auto it = vars.find(text.substr(i + 1, close - i - 1));
        if (it != vars.end()) {
          out += it->second;
          i = close + 1;
          continue;
        }
      }
    }
    out += text[i++];
  }
  return out;
}

std::string PromptTemplates::render(const EvaluationRequest& request) const {
  std::map<std::string, std::string> vars = request.context;
  std::string joined;
  for (const auto& t : request.subject_texts) {
    if (!joined.empty()) joined += '\n';
    joined += t;
  }
  vars["text"] = joined;
  if (!vars.count(ctx::history)) vars[ctx::history] = joined;
  std::string names;
  for (const auto& c : request.communities) {
    if (!names.empty()) names += ", ";
    names += c;
  }
  vars["communities"] = names;
  return render(get(request.kind), vars);
}

EvaluationResponse parse_model_reply(const EvaluationRequest& request, std::string_view reply) {
  const json doc = json::parse(strip_fences(reply), nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) malformed("reply is not a JSON object");
  EvaluationResponse out;
  switch (request.kind) {
    case EvalKind::interest_community:
    case EvalKind::trust_threshold:
      parse_community_scores(request, doc, out);
      break;
    case EvalKind::plausibility:
    case EvalKind::persuasiveness: {
      const char* key = request.kind == EvalKind::plausibility ? "PlausibilityScore" : "Score";
      auto it = doc.find(key);
      if (it == doc.end()) malformed(std::string("missing field '") + key + "'");
      out.scores[kScoreKey] = checked(as_number(*it, key), 0.0, 1.0, key);
      out.reasoning = reasoning_of(doc);
      break;
    }
    case EvalKind::belief_check: {
      auto it = doc.find("Believe");
      if (it == doc.end()) malformed("missing field 'Believe'");
      if (it->is_boolean())
        out.scores[kBelieveKey] = it->get<bool>() ? 1.0 : 0.0;
      else
        out.scores[kBelieveKey] = checked(as_number(*it, "Believe"), 0.0, 1.0, "Believe") >= 0.5;
      out.reasoning = reasoning_of(doc);
      break;
    }
  }
  return out;
}

struct RemoteEvaluator::Impl {
  RemoteConfig config;
  std::string api_key;
  PromptTemplates prompts;
  Endpoint endpoint;
  std::counting_semaphore<1024> slots;

  Impl(RemoteConfig c, std::string key)
      : config(std::move(c)),
        api_key(std::move(key)),
        prompts(config.prompt_dir.empty() ? PromptTemplates()
                                          : PromptTemplates::from_directory(config.prompt_dir)),
        endpoint(split_endpoint(config.endpoint)),
        slots(std::clamp(config.max_in_flight, 1, 1024)) {}

  // One HTTP exchange; returns the assistant text and fills usage.
  std::string post(const std::string& prompt, Usage& usage) {
    json body = {{"model", config.model},
                 {"temperature", 0},
                 {"messages",
                  json::array({{{"role", "system"},
                                {"content", "Reply with a single JSON object and nothing else."}},
                               {{"role", "user"}, {"content", prompt}}})}};
    httplib::Client client(endpoint.origin);
    const auto secs = static_cast<time_t>(config.timeout_seconds);
    const auto usecs = static_cast<time_t>((config.timeout_seconds - secs) * 1e6);
    client.set_connection_timeout(secs, usecs);
    client.set_read_timeout(secs, usecs);
    client.set_write_timeout(secs, usecs);
    httplib::Headers headers;
    if (!api_key.empty()) headers.emplace("Authorization", "Bearer " + api_key);

    slots.acquire();
    const auto start = std::chrono::steady_clock::now();
    auto result = client.Post(endpoint.path, headers, body.dump(), "application/json");
    usage.latency_seconds +=
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    slots.release();

    if (!result)
      throw EvaluatorError(EvaluatorError::Kind::remote_unavailable,
                           "request to " + config.endpoint + " failed: " +
                               httplib::to_string(result.error()));
    if (result->status < 200 || result->status >= 300)
      throw EvaluatorError(EvaluatorError::Kind::remote_unavailable,
                           "endpoint returned HTTP " + std::to_string(result->status));
    const json reply = json::parse(result->body, nullptr, false);
    if (reply.is_discarded()) malformed("endpoint body is not JSON");
    std::string content;
    try {
      content = reply.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const json::exception&) {
      malformed("endpoint body has no choices[0].message.content");
    }
    if (auto u = reply.find("usage"); u != reply.end() && u->is_object() &&
                                      u->contains("prompt_tokens") &&
                                      u->contains("completion_tokens")) {
      usage.tokens_in += u->at("prompt_tokens").get<std::int64_t>();
      usage.tokens_out += u->at("completion_tokens").get<std::int64_t>();
    } else {
      usage.tokens_in += approximate_tokens(prompt);
      usage.tokens_out += approximate_tokens(content);
      usage.approximate_tokens = true;
    }
    return content;
  }
};

RemoteEvaluator::RemoteEvaluator(RemoteConfig config, std::string api_key) {
  if (api_key.empty())
    if (const char* env = std::getenv("MADD_LLM_API_KEY")) api_key = env;
  impl_ = std::make_unique<Impl>(std::move(config), std::move(api_key));
}

RemoteEvaluator::~RemoteEvaluator() = default;

EvaluationResponse RemoteEvaluator::do_evaluate(const EvaluationRequest& request) {
  const std::string prompt = impl_->prompts.render(request);
  Usage usage;
  for (int attempt = 0;; ++attempt) {
    try {
      const std::string content = impl_->post(prompt, usage);
      EvaluationResponse response = parse_model_reply(request, content);
      response.usage = usage;
      return response;
    } catch (const EvaluatorError& e) {
      if (attempt >= 1) {
        if (e.kind() == EvaluatorError::Kind::malformed_response) throw;
        throw EvaluatorError(EvaluatorError::Kind::remote_unavailable,
                             std::string(e.what()) + " (after retry)");
      }
    }
  }
}

}  // namespace madd
