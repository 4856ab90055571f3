#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "madd/common.hpp"
#include "madd/content.hpp"
#include "madd/power_law.hpp"

namespace madd {

inline constexpr int kScenarioVersion = 1;
inline constexpr int kHoursPerDay = 24;

/// Every run parameter. Defaults are the values of the reference setup.
struct SimulationParams {
  double theta = 0.5;            // power-law vs interest weight in DT
  double xi = 0.1;               // repeated-exposure decay of DT
  double gamma = 0.5;            // enhancement vs decay balance
  double beta = 0.5;             // enhancement rate
  double delta = 0.5;            // decay rate
  double tau = 8.0;              // community assignment threshold (1-10 scale)
  int m0 = 5;                    // fully connected seed nodes per community
  int m = 2;                     // edges per arriving node
  int total_steps = 72;
  double malicious_ratio = 0.15;
  double legitimate_ratio = 0.05;
  IntRange malicious_freq{1, 18};
  IntRange legitimate_freq{1, 12};
  std::map<Stage, StepRange> intervention_windows{
      {Stage::early, {12, 72}}, {Stage::mid, {36, 72}}, {Stage::late, {48, 72}}};
  std::uint64_t rng_seed = 0;
  double repost_probability = 0.7;
  int record_cadence = 12;

  bool operator==(const SimulationParams&) const = default;
};

struct Violation {
  std::string field;
  std::string value;
  std::string constraint;
  bool operator==(const Violation&) const = default;
};

/// Empty iff every parameter invariant holds.
std::vector<Violation> validate_params(const SimulationParams& params);

enum class TextKind { post, retweet, quote };
std::string_view to_string(TextKind kind);

struct HistoricalText {
  TextKind kind = TextKind::post;
  std::string text;
  bool operator==(const HistoricalText&) const = default;
};

/// One ingested user.
struct UserRecord {
  std::string user_id;
  std::int64_t follower_count = 0;
  std::int64_t following_count = 0;
  std::string description;
  std::int64_t post_count = 0;
  std::int64_t retweet_count = 0;
  std::int64_t quote_count = 0;
  std::vector<HistoricalText> historical_texts;
  /// Activity counts per hour of day; empty or 24 entries.
  std::vector<std::int64_t> activity_histogram;
  /// Community the user was sampled from, when known.
  std::optional<std::string> source_community;

  /// x_u: retweets plus quotes.
  std::int64_t share_total() const noexcept { return retweet_count + quote_count; }
  bool operator==(const UserRecord&) const = default;
};

enum class BeliefMode { bernoulli, evaluator };

struct RemoteConfig {
  std::string endpoint = "https://api.deepseek.com/v1/chat/completions";
  std::string model = "deepseek-chat";
  int max_in_flight = 4;
  double timeout_seconds = 60.0;
  std::string prompt_dir;  // empty: built-in templates
  bool operator==(const RemoteConfig&) const = default;
};

struct EvaluatorConfig {
  std::string backend = "synthetic";  // "synthetic" | "remote"
  RemoteConfig remote;
  BeliefMode belief = BeliefMode::bernoulli;
  bool operator==(const EvaluatorConfig&) const = default;
};

struct Scenario {
  int version = kScenarioVersion;
  SimulationParams params;
  std::vector<UserRecord> users;
  std::vector<std::string> communities;
  std::vector<ContentItem> content_catalog;
  EvaluatorConfig evaluator_config;
  /// Fixed share-count law; fitted from the users when absent.
  std::optional<PowerLawFit> power_law;

  std::optional<std::size_t> community_index(std::string_view name) const;
  bool operator==(const Scenario&) const = default;
};

class ScenarioError : public std::runtime_error {
 public:
  enum class Kind {
    missing_field,
    range_violation,
    duplicate_user_id,
    unknown_community,
    malformed,
    io,
  };
  ScenarioError(Kind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

/// Reads and validates a scenario file. Sidecar user files named by
/// "users_file" resolve relative to the scenario's directory.
Scenario load_scenario(const std::filesystem::path& path);

/// Parses scenario JSON text; `base_dir` resolves sidecar paths.
Scenario parse_scenario(std::string_view json_text,
                        const std::filesystem::path& base_dir = {});

/// Checks every scenario invariant; throws ScenarioError on the first failure.
void validate_scenario(const Scenario& scenario);

/// Canonical JSON (users embedded). Parsing it back yields an equal Scenario.
std::string to_json(const Scenario& scenario, int indent = 2);

/// Users from a sidecar file (.json array or .csv with a header row).
std::vector<UserRecord> load_user_records(const std::filesystem::path& path);

/// SHA-256 hex digest of the canonical scenario JSON.
std::string scenario_digest(const Scenario& scenario);

/// Defaults rendered as a parameter table (name, range, default, meaning).
std::string render_defaults_table();
/// Defaults as the "params" JSON object of a scenario file.
std::string defaults_json(int indent = 2);

}  // namespace madd
