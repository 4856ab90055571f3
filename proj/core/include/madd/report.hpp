#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "madd/content.hpp"
#include "madd/evaluator.hpp"

namespace madd {

/// Group ratios and trust statistics of one community at one recorded step.
struct Snapshot {
  double sr = 1.0;
  double er = 0.0;
  double ir = 0.0;
  double ur = 0.0;
  double tt_mean = 0.0;
  double tt_std = 0.0;
  bool operator==(const Snapshot&) const = default;
};

struct TrustTrajectories {
  std::vector<std::string> agent_ids;
  std::vector<std::vector<double>> values;  // [agent][recorded step]
  bool operator==(const TrustTrajectories&) const = default;
};

struct FinalSets {
  std::vector<std::string> susceptible;
  std::vector<std::string> exposed;
  std::vector<std::string> infected_spreaders;
  std::vector<std::string> uninfected_spreaders;
  bool operator==(const FinalSets&) const = default;
};

/// Event totals, handy for audits and sanity checks.
struct RunCounters {
  std::int64_t activations = 0;        // regular agents drawn active
  std::int64_t regular_shares = 0;
  std::int64_t malicious_bot_shares = 0;
  std::int64_t legitimate_bot_shares = 0;
  std::int64_t receipts = 0;
  std::int64_t evaluator_calls = 0;    // made by the engine itself
  bool operator==(const RunCounters&) const = default;
};

struct RunReport {
  std::string scenario_digest;
  std::uint64_t seed = 0;
  std::string topic;
  InterventionPlan plan;
  std::string disinformation_id;
  std::string correction_id;  // empty without an active plan
  std::vector<std::string> communities;
  std::vector<int> steps;                    // recorded steps, starting at 0
  std::vector<std::vector<Snapshot>> series;  // [step index][community]
  std::vector<Snapshot> overall;             // [step index], all regular agents
  std::optional<TrustTrajectories> trajectories;
  FinalSets final_sets;
  RunCounters counters;
  ResourceLedger ledger;
  bool complete = true;
  std::string error;

  std::size_t community_position(std::string_view name) const;
  bool operator==(const RunReport&) const = default;
};

class ReportError : public std::runtime_error {
 public:
  enum class Kind { mismatched_runs, unknown_community, invalid_report, io };
  ReportError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

/// Violated series invariants (partition, monotone exposure, spreaders within
/// exposed, trust bounds); empty when the report is consistent. `tolerance`
/// absorbs rounding of imported values.
std::vector<std::string> check_report(const RunReport& report, double tolerance = 1e-12);

std::string to_json(const RunReport& report, int indent = 2);
RunReport report_from_json(std::string_view text);

/// Long format: step,community,SR,ER,IR,UR,tt_mean,tt_std with 9 decimals.
std::string to_csv(const RunReport& report);
/// Rebuilds the series (steps, communities, snapshots) from `to_csv` output.
RunReport report_from_csv(std::string_view text);

enum class ExportFormat { csv, json };
void export_report(const RunReport& report, ExportFormat format, const std::filesystem::path& path);

struct TrustPoint {
  int step = 0;
  double mean = 0.0;
  double std = 0.0;
};

std::vector<TrustPoint> trust_trajectory_stats(const RunReport& report, std::string_view community);

struct CommunityDelta {
  std::string community;
  std::vector<double> delta_ir;  // per recorded step
  double final_delta_ir = 0.0;
  double peak_delta_ir = 0.0;    // max IR of the run minus max IR of the baseline
  double final_delta_tt_mean = 0.0;
};

struct ArmComparison {
  std::string label;  // "<stage>/<strategy>"
  std::vector<CommunityDelta> communities;
};

struct ComparisonReport {
  std::string scenario_digest;
  std::uint64_t seed = 0;
  std::string topic;
  std::string baseline_label;
  std::vector<int> steps;
  std::vector<ArmComparison> arms;
};

std::string plan_label(const InterventionPlan& plan);

/// Deltas of every report against the first one. Throws
/// ReportError(mismatched_runs) unless all share digest, seed, topic,
/// communities and recorded steps.
ComparisonReport compare_interventions(const std::vector<RunReport>& reports);

std::string to_json(const ComparisonReport& comparison, int indent = 2);

}  // namespace madd
