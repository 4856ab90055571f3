#include "madd/scenario.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "json.hpp"
#include "madd/digest.hpp"

namespace madd {

using nlohmann::json;

std::string_view to_string(TextKind kind) {
  switch (kind) {
    case TextKind::post: return "post";
    case TextKind::retweet: return "retweet";
    case TextKind::quote: return "quote";
  }
  return "post";
}

std::optional<std::size_t> Scenario::community_index(std::string_view name) const {
  for (std::size_t j = 0; j < communities.size(); ++j)
    if (communities[j] == name) return j;
  return std::nullopt;
}

namespace {

std::string num(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::string range_text(const StepRange& r) {
  return "[" + std::to_string(r.first) + ", " + std::to_string(r.last) + "]";
}

void open_unit(std::vector<Violation>& out, const char* field, double v) {
  if (!(v > 0.0 && v < 1.0)) out.push_back({field, num(v), "0 < " + std::string(field) + " < 1"});
}

}  // namespace

std::vector<Violation> validate_params(const SimulationParams& p) {
  std::vector<Violation> out;
  open_unit(out, "theta", p.theta);
  open_unit(out, "gamma", p.gamma);
  open_unit(out, "beta", p.beta);
  open_unit(out, "delta", p.delta);
  if (!(p.xi >= 0.0) || !std::isfinite(p.xi)) out.push_back({"xi", num(p.xi), "xi >= 0"});
  if (!(p.tau >= 1.0 && p.tau <= 10.0)) out.push_back({"tau", num(p.tau), "1 <= tau <= 10"});
  if (p.m0 < 2) out.push_back({"m0", std::to_string(p.m0), "m0 >= 2"});
  if (p.m < 1) out.push_back({"m", std::to_string(p.m), "m >= 1"});
  if (p.m > p.m0) out.push_back({"m", std::to_string(p.m), "m ≤ m0"});
  if (p.total_steps < 1)
    out.push_back({"total_steps", std::to_string(p.total_steps), "total_steps >= 1"});
  if (!(p.malicious_ratio >= 0.0 && p.malicious_ratio < 1.0))
    out.push_back({"malicious_ratio", num(p.malicious_ratio), "0 <= malicious_ratio < 1"});
  if (!(p.legitimate_ratio >= 0.0 && p.legitimate_ratio < 1.0))
    out.push_back({"legitimate_ratio", num(p.legitimate_ratio), "0 <= legitimate_ratio < 1"});
  if (!(p.malicious_ratio + p.legitimate_ratio < 1.0))
    out.push_back({"malicious_ratio", num(p.malicious_ratio + p.legitimate_ratio),
                   "malicious_ratio + legitimate_ratio < 1"});
  auto check_freq = [&](const char* field, const IntRange& r) {
    const std::string value = "[" + std::to_string(r.min) + ", " + std::to_string(r.max) + "]";
    if (r.min < 0 || r.min > r.max)
      out.push_back({field, value, "0 <= min <= max"});
    else if (r.max > p.total_steps)
      out.push_back({field, value, "max <= total_steps"});
  };
  check_freq("malicious_freq", p.malicious_freq);
  check_freq("legitimate_freq", p.legitimate_freq);
  for (const auto& [stage, window] : p.intervention_windows) {
    const std::string field = "intervention_windows." + std::string(to_string(stage));
    if (stage == Stage::control)
      out.push_back({field, range_text(window), "control has no window"});
    else if (window.first < 1 || window.first > window.last || window.last > p.total_steps)
      out.push_back({field, range_text(window), "window within [1, total_steps]"});
  }
  if (!(p.repost_probability >= 0.0 && p.repost_probability <= 1.0))
    out.push_back({"repost_probability", num(p.repost_probability), "0 <= repost_probability <= 1"});
  if (p.record_cadence < 1)
    out.push_back({"record_cadence", std::to_string(p.record_cadence), "record_cadence >= 1"});
  return out;
}

namespace {

using Kind = ScenarioError::Kind;

[[noreturn]] void fail(Kind kind, const std::string& what) { throw ScenarioError(kind, what); }

const json& require(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(Kind::missing_field, where + ": missing field '" + key + "'");
  return *it;
}

template <typename T>
T get_as(const json& value, const std::string& where) {
  try {
    return value.get<T>();
  } catch (const json::exception& e) {
    fail(Kind::malformed, where + ": " + e.what());
  }
}

template <typename T>
void read_opt(const json& obj, const char* key, T& out, const std::string& where) {
  if (auto it = obj.find(key); it != obj.end()) out = get_as<T>(*it, where + "." + key);
}

std::int64_t read_count(const json& obj, const char* key, const std::string& where,
                        bool required) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    if (required) fail(Kind::missing_field, where + ": missing field '" + key + "'");
    return 0;
  }
  if (!it->is_number_integer()) fail(Kind::malformed, where + "." + key + " must be an integer");
  const auto v = it->get<std::int64_t>();
  if (v < 0) fail(Kind::range_violation, where + "." + key + " must be non-negative");
  return v;
}

IntRange read_int_range(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 2) fail(Kind::malformed, where + " must be [min, max]");
  return {get_as<int>(v[0], where), get_as<int>(v[1], where)};
}

StepRange read_step_range(const json& v, const std::string& where) {
  const auto r = read_int_range(v, where);
  return {r.min, r.max};
}

SimulationParams parse_params(const json& j) {
  static const std::set<std::string> known{
      "theta", "xi", "gamma", "beta", "delta", "tau", "m0", "m", "total_steps",
      "malicious_ratio", "legitimate_ratio", "malicious_freq", "legitimate_freq",
      "intervention_windows", "rng_seed", "repost_probability", "record_cadence"};
  if (!j.is_object()) fail(Kind::malformed, "params must be an object");
  for (const auto& [key, value] : j.items())
    if (!known.count(key)) fail(Kind::malformed, "params: unknown parameter '" + key + "'");

  SimulationParams p;
  read_opt(j, "theta", p.theta, "params");
  read_opt(j, "xi", p.xi, "params");
  read_opt(j, "gamma", p.gamma, "params");
  read_opt(j, "beta", p.beta, "params");
  read_opt(j, "delta", p.delta, "params");
  read_opt(j, "tau", p.tau, "params");
  read_opt(j, "m0", p.m0, "params");
  read_opt(j, "m", p.m, "params");
  read_opt(j, "total_steps", p.total_steps, "params");
  read_opt(j, "malicious_ratio", p.malicious_ratio, "params");
  read_opt(j, "legitimate_ratio", p.legitimate_ratio, "params");
  read_opt(j, "rng_seed", p.rng_seed, "params");
  read_opt(j, "repost_probability", p.repost_probability, "params");
  read_opt(j, "record_cadence", p.record_cadence, "params");
  if (auto it = j.find("malicious_freq"); it != j.end())
    p.malicious_freq = read_int_range(*it, "params.malicious_freq");
  if (auto it = j.find("legitimate_freq"); it != j.end())
    p.legitimate_freq = read_int_range(*it, "params.legitimate_freq");
  if (auto it = j.find("intervention_windows"); it != j.end()) {
    if (!it->is_object()) fail(Kind::malformed, "params.intervention_windows must be an object");
    for (const auto& [name, value] : it->items()) {
      auto stage = parse_stage(name);
      if (!stage || *stage == Stage::control)
        fail(Kind::malformed, "params.intervention_windows: unknown stage '" + name + "'");
      p.intervention_windows[*stage] =
          read_step_range(value, "params.intervention_windows." + name);
    }
  }
  return p;
}

json params_to_json(const SimulationParams& p) {
  json windows = json::object();
  for (const auto& [stage, w] : p.intervention_windows)
    windows[std::string(to_string(stage))] = {w.first, w.last};
  return {{"theta", p.theta},
          {"xi", p.xi},
          {"gamma", p.gamma},
          {"beta", p.beta},
          {"delta", p.delta},
          {"tau", p.tau},
          {"m0", p.m0},
          {"m", p.m},
          {"total_steps", p.total_steps},
          {"malicious_ratio", p.malicious_ratio},
          {"legitimate_ratio", p.legitimate_ratio},
          {"malicious_freq", {p.malicious_freq.min, p.malicious_freq.max}},
          {"legitimate_freq", {p.legitimate_freq.min, p.legitimate_freq.max}},
          {"intervention_windows", windows},
          {"rng_seed", p.rng_seed},
          {"repost_probability", p.repost_probability},
          {"record_cadence", p.record_cadence}};
}

std::vector<HistoricalText> parse_history(const json& arr, const std::string& where) {
  if (!arr.is_array()) fail(Kind::malformed, where + " must be an array");
  std::vector<HistoricalText> out;
  for (const auto& e : arr) {
    HistoricalText h;
    if (e.is_string()) {
      h.text = e.get<std::string>();
    } else {
      const auto kind = get_as<std::string>(require(e, "kind", where), where + ".kind");
      if (kind == "post") h.kind = TextKind::post;
      else if (kind == "retweet" || kind == "repost") h.kind = TextKind::retweet;
      else if (kind == "quote") h.kind = TextKind::quote;
      else fail(Kind::malformed, where + ": unknown text kind '" + kind + "'");
      h.text = get_as<std::string>(require(e, "text", where), where + ".text");
    }
    out.push_back(std::move(h));
  }
  return out;
}

std::vector<std::int64_t> parse_histogram(const json& arr, const std::string& where) {
  if (!arr.is_array()) fail(Kind::malformed, where + " must be an array");
  std::vector<std::int64_t> out;
  for (const auto& v : arr) {
    if (!v.is_number_integer()) fail(Kind::malformed, where + " entries must be integers");
    out.push_back(v.get<std::int64_t>());
  }
  return out;
}

UserRecord parse_user(const json& j, std::size_t index) {
  const std::string where = "users[" + std::to_string(index) + "]";
  if (!j.is_object()) fail(Kind::malformed, where + " must be an object");
  UserRecord u;
  u.user_id = get_as<std::string>(require(j, "user_id", where), where + ".user_id");
  u.follower_count = read_count(j, "follower_count", where, true);
  u.following_count = read_count(j, "following_count", where, false);
  u.post_count = read_count(j, "post_count", where, false);
  u.retweet_count = read_count(j, "retweet_count", where, false);
  u.quote_count = read_count(j, "quote_count", where, false);
  read_opt(j, "description", u.description, where);
  if (auto it = j.find("historical_texts"); it != j.end())
    u.historical_texts = parse_history(*it, where + ".historical_texts");
  if (auto it = j.find("activity_histogram"); it != j.end())
    u.activity_histogram = parse_histogram(*it, where + ".activity_histogram");
  if (auto it = j.find("source_community"); it != j.end() && !it->is_null())
    u.source_community = get_as<std::string>(*it, where + ".source_community");
  return u;
}

json user_to_json(const UserRecord& u) {
  json texts = json::array();
  for (const auto& h : u.historical_texts)
    texts.push_back({{"kind", std::string(to_string(h.kind))}, {"text", h.text}});
  json j = {{"user_id", u.user_id},
            {"follower_count", u.follower_count},
            {"following_count", u.following_count},
            {"description", u.description},
            {"post_count", u.post_count},
            {"retweet_count", u.retweet_count},
            {"quote_count", u.quote_count},
            {"historical_texts", texts},
            {"activity_histogram", u.activity_histogram}};
  if (u.source_community) j["source_community"] = *u.source_community;
  return j;
}

ContentItem parse_item(const json& j, std::size_t index) {
  const std::string where = "content[" + std::to_string(index) + "]";
  ContentItem item;
  item.content_id = get_as<std::string>(require(j, "content_id", where), where);
  item.topic = get_as<std::string>(require(j, "topic", where), where);
  const auto kind = get_as<std::string>(require(j, "kind", where), where);
  auto k = parse_content_kind(kind);
  if (!k) fail(Kind::malformed, where + ": unknown kind '" + kind + "'");
  item.kind = *k;
  if (auto it = j.find("strategy"); it != j.end()) {
    const auto s = get_as<std::string>(*it, where + ".strategy");
    auto st = parse_strategy(s);
    if (!st) fail(Kind::malformed, where + ": unknown strategy '" + s + "'");
    item.strategy = *st;
  }
  item.text = get_as<std::string>(require(j, "text", where), where);
  if (auto it = j.find("plausibility"); it != j.end() && !it->is_null())
    item.plausibility = get_as<double>(*it, where + ".plausibility");
  return item;
}

json item_to_json(const ContentItem& item) {
  json j = {{"content_id", item.content_id},
            {"topic", item.topic},
            {"kind", std::string(to_string(item.kind))},
            {"strategy", std::string(to_string(item.strategy))},
            {"text", item.text}};
  if (item.plausibility) j["plausibility"] = *item.plausibility;
  return j;
}

EvaluatorConfig parse_evaluator(const json& j) {
  EvaluatorConfig c;
  if (!j.is_object()) fail(Kind::malformed, "evaluator must be an object");
  read_opt(j, "backend", c.backend, "evaluator");
  if (c.backend != "synthetic" && c.backend != "remote")
    fail(Kind::range_violation, "evaluator.backend must be synthetic or remote");
  if (auto it = j.find("belief"); it != j.end()) {
    const auto b = get_as<std::string>(*it, "evaluator.belief");
    if (b == "bernoulli") c.belief = BeliefMode::bernoulli;
    else if (b == "evaluator") c.belief = BeliefMode::evaluator;
    else fail(Kind::range_violation, "evaluator.belief must be bernoulli or evaluator");
  }
  if (auto it = j.find("remote"); it != j.end()) {
    read_opt(*it, "endpoint", c.remote.endpoint, "evaluator.remote");
    read_opt(*it, "model", c.remote.model, "evaluator.remote");
    read_opt(*it, "max_in_flight", c.remote.max_in_flight, "evaluator.remote");
    read_opt(*it, "timeout_seconds", c.remote.timeout_seconds, "evaluator.remote");
    read_opt(*it, "prompt_dir", c.remote.prompt_dir, "evaluator.remote");
    if (c.remote.max_in_flight < 1)
      fail(Kind::range_violation, "evaluator.remote.max_in_flight must be >= 1");
    if (!(c.remote.timeout_seconds > 0))
      fail(Kind::range_violation, "evaluator.remote.timeout_seconds must be > 0");
  }
  return c;
}

json evaluator_to_json(const EvaluatorConfig& c) {
  return {{"backend", c.backend},
          {"belief", c.belief == BeliefMode::bernoulli ? "bernoulli" : "evaluator"},
          {"remote",
           {{"endpoint", c.remote.endpoint},
            {"model", c.remote.model},
            {"max_in_flight", c.remote.max_in_flight},
            {"timeout_seconds", c.remote.timeout_seconds},
            {"prompt_dir", c.remote.prompt_dir}}}};
}

PowerLawFit parse_power_law(const json& j) {
  PowerLawFit f;
  f.alpha = get_as<double>(require(j, "alpha", "power_law"), "power_law.alpha");
  f.x_min = get_as<double>(require(j, "x_min", "power_law"), "power_law.x_min");
  read_opt(j, "lambda", f.lambda, "power_law");
  read_opt(j, "tail_count", f.tail_count, "power_law");
  read_opt(j, "ks_distance", f.ks_distance, "power_law");
  read_opt(j, "log_likelihood", f.log_likelihood, "power_law");
  if (!(f.alpha > 1.0)) fail(Kind::range_violation, "power_law.alpha must be > 1");
  if (!(f.lambda >= 0.0)) fail(Kind::range_violation, "power_law.lambda must be >= 0");
  if (!(f.x_min >= 1.0) || f.x_min != std::floor(f.x_min))
    fail(Kind::range_violation, "power_law.x_min must be an integer >= 1");
  f.c = normalization_constant(f.alpha, f.x_min);
  return f;
}

json power_law_to_json(const PowerLawFit& f) {
  return {{"alpha", f.alpha},
          {"lambda", f.lambda},
          {"c", f.c},
          {"x_min", f.x_min},
          {"tail_count", f.tail_count},
          {"ks_distance", f.ks_distance},
          {"log_likelihood", f.log_likelihood}};
}

// RFC 4180 records: quoted fields may contain commas, quotes ("") and newlines.
std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"': quoted = true; any = true; break;
      case ',':
        row.push_back(std::move(field));
        field.clear();
        any = true;
        break;
      case '\r': break;
      case '\n':
        if (any || !field.empty()) {
          row.push_back(std::move(field));
          rows.push_back(std::move(row));
        }
        row.clear();
        field.clear();
        any = false;
        break;
      default: field += c; any = true;
    }
  }
  if (quoted) fail(Kind::malformed, "users csv: unterminated quoted field");
  if (any || !field.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::int64_t csv_count(const std::string& cell, const std::string& where) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(cell, &used);
    if (used != cell.size()) throw std::invalid_argument(cell);
    if (v < 0) fail(Kind::range_violation, where + " must be non-negative");
    return v;
  } catch (const std::logic_error&) {
    fail(Kind::malformed, where + ": '" + cell + "' is not an integer");
  }
}

// "[1,2,3]" (JSON) or "[1 2 3]" / "1 2 3" (space separated).
std::vector<std::int64_t> csv_histogram(std::string cell, const std::string& where) {
  if (cell.find(',') != std::string::npos) {
    const json j = json::parse(cell, nullptr, false);
    if (j.is_discarded()) fail(Kind::malformed, where + ": bad histogram");
    return parse_histogram(j, where);
  }
  for (char& c : cell)
    if (c == '[' || c == ']') c = ' ';
  std::istringstream in(cell);
  std::vector<std::int64_t> out;
  std::string tok;
  while (in >> tok) out.push_back(csv_count(tok, where));
  return out;
}

std::vector<UserRecord> users_from_csv(std::string_view text) {
  const auto rows = parse_csv(text);
  if (rows.empty()) fail(Kind::malformed, "users csv: missing header row");
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < rows[0].size(); ++i) col[rows[0][i]] = i;
  for (const char* needed : {"user_id", "follower_count"})
    if (!col.count(needed))
      fail(Kind::missing_field, std::string("users csv: missing column '") + needed + "'");

  std::vector<UserRecord> users;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    const std::string where = "users csv row " + std::to_string(r);
    auto cell = [&](const char* name) -> const std::string* {
      auto it = col.find(name);
      if (it == col.end() || it->second >= row.size()) return nullptr;
      return &row[it->second];
    };
    UserRecord u;
    u.user_id = *cell("user_id");
    auto count = [&](const char* name) {
      const std::string* c = cell(name);
      return (c && !c->empty()) ? csv_count(*c, where + "." + name) : 0;
    };
    if (!cell("follower_count") || cell("follower_count")->empty())
      fail(Kind::missing_field, where + ": missing follower_count");
    u.follower_count = count("follower_count");
    u.following_count = count("following_count");
    u.post_count = count("post_count");
    u.retweet_count = count("retweet_count");
    u.quote_count = count("quote_count");
    if (auto c = cell("description")) u.description = *c;
    if (auto c = cell("activity_histogram"); c && !c->empty())
      u.activity_histogram = csv_histogram(*c, where + ".activity_histogram");
    if (auto c = cell("source_community"); c && !c->empty()) u.source_community = *c;
    if (auto c = cell("historical_texts"); c && !c->empty()) {
      const json j = json::parse(*c, nullptr, false);
      if (j.is_discarded()) fail(Kind::malformed, where + ": historical_texts is not JSON");
      u.historical_texts = parse_history(j, where + ".historical_texts");
    }
    users.push_back(std::move(u));
  }
  return users;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Kind::io, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<UserRecord> users_from_json(const json& arr) {
  if (!arr.is_array()) fail(Kind::malformed, "users must be an array");
  std::vector<UserRecord> users;
  users.reserve(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) users.push_back(parse_user(arr[i], i));
  return users;
}

}  // namespace

std::vector<UserRecord> load_user_records(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  if (path.extension() == ".csv") return users_from_csv(text);
  const json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) fail(Kind::malformed, path.string() + " is not valid JSON");
  return users_from_json(j.is_object() && j.contains("users") ? j.at("users") : j);
}

void validate_scenario(const Scenario& s) {
  if (s.version != kScenarioVersion)
    fail(Kind::range_violation, "version must be " + std::to_string(kScenarioVersion));
  if (auto v = validate_params(s.params); !v.empty())
    fail(Kind::range_violation, "params." + v.front().field + " = " + v.front().value +
                                    " violates " + v.front().constraint);
  if (s.communities.empty()) fail(Kind::range_violation, "at least one community is required");
  std::set<std::string> names;
  for (const auto& c : s.communities) {
    if (c.empty()) fail(Kind::range_violation, "community names must be non-empty");
    if (!names.insert(c).second) fail(Kind::range_violation, "duplicate community '" + c + "'");
  }
  std::set<std::string> ids;
  for (const auto& u : s.users) {
    if (u.user_id.empty()) fail(Kind::missing_field, "user with empty user_id");
    if (!ids.insert(u.user_id).second) fail(Kind::duplicate_user_id, "duplicate user_id '" + u.user_id + "'");
    if (u.follower_count < 0 || u.following_count < 0 || u.post_count < 0 ||
        u.retweet_count < 0 || u.quote_count < 0)
      fail(Kind::range_violation, "user '" + u.user_id + "' has a negative count");
    if (!u.activity_histogram.empty()) {
      if (u.activity_histogram.size() != kHoursPerDay)
        fail(Kind::range_violation, "user '" + u.user_id + "' activity_histogram needs 24 buckets");
      for (auto v : u.activity_histogram)
        if (v < 0)
          fail(Kind::range_violation, "user '" + u.user_id + "' activity_histogram is negative");
    }
    if (u.source_community && !names.count(*u.source_community))
      fail(Kind::unknown_community, "user '" + u.user_id + "' names unknown community '" +
                                        *u.source_community + "'");
  }
  std::set<std::string> content_ids;
  for (const auto& item : s.content_catalog) {
    if (!names.count(item.topic))
      fail(Kind::unknown_community, "content '" + item.content_id + "' has unknown topic '" +
                                        item.topic + "'");
    if (auto problem = check_item(item); !problem.empty()) fail(Kind::range_violation, problem);
    if (!content_ids.insert(item.content_id).second)
      fail(Kind::range_violation, "duplicate content_id '" + item.content_id + "'");
  }
  if (s.power_law && !(s.power_law->alpha > 1.0 && s.power_law->x_min >= 1.0))
    fail(Kind::range_violation, "power_law needs alpha > 1 and x_min >= 1");
}

Scenario parse_scenario(std::string_view json_text, const std::filesystem::path& base_dir) {
  const json doc = json::parse(json_text, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) fail(Kind::malformed, "scenario is not a JSON object");

  Scenario s;
  s.version = get_as<int>(require(doc, "version", "scenario"), "version");
  if (auto it = doc.find("params"); it != doc.end()) s.params = parse_params(*it);
  s.communities = get_as<std::vector<std::string>>(require(doc, "communities", "scenario"),
                                                   "communities");
  const bool embedded = doc.contains("users");
  const bool sidecar = doc.contains("users_file");
  if (embedded && sidecar) fail(Kind::malformed, "give either users or users_file, not both");
  if (embedded) {
    s.users = users_from_json(doc.at("users"));
  } else if (sidecar) {
    std::filesystem::path p = get_as<std::string>(doc.at("users_file"), "users_file");
    if (p.is_relative()) p = base_dir / p;
    s.users = load_user_records(p);
  } else {
    fail(Kind::missing_field, "scenario: missing field 'users' (or 'users_file')");
  }
  if (auto it = doc.find("content"); it != doc.end()) {
    if (!it->is_array()) fail(Kind::malformed, "content must be an array");
    for (std::size_t i = 0; i < it->size(); ++i) s.content_catalog.push_back(parse_item((*it)[i], i));
  }
  if (auto it = doc.find("evaluator"); it != doc.end()) s.evaluator_config = parse_evaluator(*it);
  if (auto it = doc.find("power_law"); it != doc.end() && !it->is_null())
    s.power_law = parse_power_law(*it);
  validate_scenario(s);
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  return parse_scenario(read_file(path), path.parent_path());
}

std::string to_json(const Scenario& s, int indent) {
  json users = json::array();
  for (const auto& u : s.users) users.push_back(user_to_json(u));
  json content = json::array();
  for (const auto& item : s.content_catalog) content.push_back(item_to_json(item));
  json doc = {{"version", s.version},
              {"params", params_to_json(s.params)},
              {"communities", s.communities},
              {"users", users},
              {"content", content},
              {"evaluator", evaluator_to_json(s.evaluator_config)}};
  if (s.power_law) doc["power_law"] = power_law_to_json(*s.power_law);
  return doc.dump(indent) + "\n";
}

std::string scenario_digest(const Scenario& scenario) { return sha256_hex(to_json(scenario, -1)); }

std::string render_defaults_table() {
  const SimulationParams d;
  struct Row {
    std::string symbol, key, value, meaning;
  };
  auto window = [&](Stage s) { return range_text(d.intervention_windows.at(s)); };
  const std::vector<Row> rows{
      {"theta", "theta", "(0, 1)/0.5", "weight of the share-count CDF against interest in DT"},
      {"xi", "xi", "[0, inf)/0.1", "repeated-exposure damping of DT"},
      {"T", "total_steps", "[1, 72]/72", "simulated time steps"},
      {"MR", "malicious_ratio", "0.15 * N", "malicious bots per community, as a share of members"},
      {"LR", "legitimate_ratio", "0.05 * N", "legitimate bots per community, as a share of members"},
      {"MF", "malicious_freq", "[1, 18]", "activations per malicious bot over the run"},
      {"LF", "legitimate_freq", "[1, 12]", "activations per legitimate bot over the run"},
      {"N", "(users)", "689", "regular users in the reference data set"},
      {"m0", "m0", "5", "fully connected seed members per community"},
      {"m", "m", "[1, 4]/2", "edges added by each arriving member"},
      {"tau", "tau", "8", "interest score needed to join a community"},
      {"EI", "intervention_windows.early", window(Stage::early), "early intervention steps"},
      {"MI", "intervention_windows.mid", window(Stage::mid), "mid intervention steps"},
      {"LI", "intervention_windows.late", window(Stage::late), "late intervention steps"},
      {"gamma", "gamma", "(0, 1)/0.5", "enhancement share of the trust update"},
      {"beta", "beta", "(0, 1)/0.5", "enhancement rate"},
      {"delta", "delta", "(0, 1)/0.5", "decay rate"},
      {"p_repost", "repost_probability", "[0, 1]/0.7", "repost (vs quote) share of regular shares"},
      {"cadence", "record_cadence", "[1, T]/12", "steps between recorded snapshots"},
  };
  std::ostringstream os;
  os << std::left << std::setw(10) << "symbol" << std::setw(28) << "key" << std::setw(14)
     << "value" << "meaning\n";
  for (const auto& r : rows)
    os << std::setw(10) << r.symbol << std::setw(28) << r.key << std::setw(14) << r.value
       << r.meaning << "\n";
  return os.str();
}

std::string defaults_json(int indent) { return params_to_json(SimulationParams{}).dump(indent) + "\n"; }

}  // namespace madd
