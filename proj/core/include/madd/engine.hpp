#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "madd/attributes.hpp"
#include "madd/content.hpp"
#include "madd/network.hpp"
#include "madd/power_law.hpp"
#include "madd/report.hpp"
#include "madd/scenario.hpp"

namespace madd {

class Evaluator;

class EngineError : public std::runtime_error {
 public:
  enum class Kind { schedule_conflict, window_too_small, invalid_input };
  EngineError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

enum class Status { susceptible, exposed, infected_spreader, uninfected_spreader };
std::string_view to_string(Status status);

/// Activation steps per agent (ascending); empty for regular agents and for
/// bots that stay silent in this run.
using BotSchedules = std::vector<std::vector<int>>;

/// Malicious bots draw |steps| uniformly from MF and the steps without
/// replacement from [1, T]; legitimate bots draw from LF and the plan's
/// window (empty under control). Only bots whose home is `topic` are
/// scheduled. Throws EngineError(window_too_small) when LF's minimum exceeds
/// the window length.
BotSchedules build_bot_schedules(std::span<const AgentProfile> profiles,
                                 const SimulationParams& params, const InterventionPlan& plan,
                                 std::size_t topic, std::uint64_t seed);

/// Which content a message carries and which side it takes.
enum class MessageKind {
  disinformation,  // the disinformation item, endorsed
  refutation,      // the disinformation item, quoted to push back on it
  correction,      // the corrective item
};

enum class ShareMode { original, repost, quote };

struct ShareEvent {
  int step = 0;
  NodeId sender = 0;
  MessageKind kind = MessageKind::disinformation;
  ShareMode mode = ShareMode::original;
};

struct ReceiptEvent {
  int step = 0;
  NodeId receiver = 0;
  NodeId sender = 0;
  MessageKind kind = MessageKind::disinformation;
};

/// Full event log of a run, for audits.
struct RunTrace {
  std::vector<ShareEvent> shares;
  std::vector<ReceiptEvent> receipts;
  std::vector<double> final_trust;  // TT̂ per agent for the topic (bots: 1)
  BotSchedules schedules;
};

struct RunOptions {
  InterventionPlan plan;
  /// Community name of the disinformation topic; empty selects the first
  /// community with a disinformation item in the catalog.
  std::string topic;
  /// Overrides params.rng_seed for the run's random streams.
  std::optional<std::uint64_t> seed;
  /// Overrides params.record_cadence.
  std::optional<int> record_cadence;
  bool record_trajectories = false;
  /// JSON lines, one per recorded step.
  std::ostream* progress = nullptr;
  /// Replaces build_bot_schedules; must have one entry per agent.
  std::optional<BotSchedules> schedules;
  RunTrace* trace = nullptr;
};

/// Everything a run needs that does not depend on the intervention plan.
struct World {
  Population population;
  PropagationNetwork network;
  PowerLawFit share_law;
  std::string scenario_digest;
};

/// Profiles, network and share-count law for `scenario`, seeded by
/// params.rng_seed.
World prepare_world(const Scenario& scenario, Evaluator& evaluator);

/// Runs the time-stepped simulation for one plan. Evaluator failures end the
/// run early with `complete = false` and the error text in the report.
RunReport run_simulation(const Scenario& scenario, const World& world, Evaluator& evaluator,
                         const RunOptions& options = {});

/// (SR, ER, IR, UR) over the regular members of one community.
Snapshot snapshot_ratios(std::span<const Status> status, std::span<const AgentProfile> profiles,
                         std::span<const std::size_t> members);

}  // namespace madd
