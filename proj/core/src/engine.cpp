#include "madd/engine.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "json.hpp"
#include "madd/dynamics.hpp"
#include "madd/evaluator.hpp"
#include "madd/rng.hpp"

namespace madd {

std::string_view to_string(Status status) {
  switch (status) {
    case Status::susceptible: return "SU";
    case Status::exposed: return "EU";
    case Status::infected_spreader: return "IS";
    case Status::uninfected_spreader: return "US";
  }
  return "SU";
}

namespace {

constexpr std::uint64_t key(DrawPurpose p) { return static_cast<std::uint64_t>(p); }

// Partial Fisher-Yates: `count` distinct steps from [first, last], ascending.
std::vector<int> sample_steps(int first, int last, int count, Substream& rng) {
  std::vector<int> pool;
  for (int t = first; t <= last; ++t) pool.push_back(t);
  count = std::min<int>(count, static_cast<int>(pool.size()));
  for (int k = 0; k < count; ++k) {
    const auto span = static_cast<std::uint64_t>(pool.size() - static_cast<std::size_t>(k));
    const auto pick = static_cast<std::size_t>(k) + static_cast<std::size_t>(rng() % span);
    std::swap(pool[static_cast<std::size_t>(k)], pool[pick]);
  }
  pool.resize(static_cast<std::size_t>(count));
  std::sort(pool.begin(), pool.end());
  return pool;
}

int draw_count(const IntRange& range, Substream& rng) {
  const auto width = static_cast<std::uint64_t>(range.max - range.min + 1);
  return range.min + static_cast<int>(rng() % width);
}

}  // namespace

BotSchedules build_bot_schedules(std::span<const AgentProfile> profiles,
                                 const SimulationParams& params, const InterventionPlan& plan,
                                 std::size_t topic, std::uint64_t seed) {
  BotSchedules out(profiles.size());
  const bool intervening = plan.stage != Stage::control;
  StepRange window{std::max(plan.window.first, 1), std::min(plan.window.last, params.total_steps)};
  if (intervening && params.legitimate_freq.min > window.length())
    throw EngineError(EngineError::Kind::window_too_small,
                      "legitimate bots need at least " + std::to_string(params.legitimate_freq.min) +
                          " steps but the " + std::string(to_string(plan.stage)) + " window has " +
                          std::to_string(window.length()));
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    const auto& p = profiles[i];
    if (!p.is_bot() || p.home_community != topic) continue;
    // Keyed by agent id, so malicious schedules match across paired plans.
    if (p.kind == AgentKind::malicious_bot) {
      Substream rng({seed, key(DrawPurpose::schedule), fnv1a64(p.agent_id), 1});
      const int count = draw_count(params.malicious_freq, rng);
      out[i] = sample_steps(1, params.total_steps, count, rng);
    } else if (intervening) {
      Substream rng({seed, key(DrawPurpose::schedule), fnv1a64(p.agent_id), 2});
      const int count = draw_count(params.legitimate_freq, rng);
      out[i] = sample_steps(window.first, window.last, count, rng);
    }
  }
  return out;
}

Snapshot snapshot_ratios(std::span<const Status> status, std::span<const AgentProfile> profiles,
                         std::span<const std::size_t> members) {
  Snapshot s;
  std::size_t regular = 0, exposed = 0, infected = 0, uninfected = 0;
  for (auto i : members) {
    if (profiles[i].is_bot()) continue;
    ++regular;
    switch (status[i]) {
      case Status::susceptible: break;
      case Status::exposed: ++exposed; break;
      case Status::infected_spreader: ++exposed; ++infected; break;
      case Status::uninfected_spreader: ++exposed; ++uninfected; break;
    }
  }
  if (regular == 0) return s;
  const double n = static_cast<double>(regular);
  s.er = static_cast<double>(exposed) / n;
  s.sr = static_cast<double>(regular - exposed) / n;
  s.ir = static_cast<double>(infected) / n;
  s.ur = static_cast<double>(uninfected) / n;
  return s;
}

World prepare_world(const Scenario& scenario, Evaluator& evaluator) {
  World w;
  w.population = derive_profiles(scenario, evaluator);
  w.network = build_network(w.population.profiles, w.population.communities, scenario.params,
                            scenario.params.rng_seed);
  w.share_law = share_count_law(scenario);
  w.scenario_digest = scenario_digest(scenario);
  return w;
}

namespace {

struct Pending {
  MessageKind kind;
  NodeId sender;
};

struct Outgoing {
  NodeId sender;
  MessageKind kind;
  ShareMode mode;
};

class Simulation {
 public:
  Simulation(const Scenario& scenario, const World& world, Evaluator& evaluator,
             const RunOptions& options)
      : scenario_(scenario),
        params_(scenario.params),
        world_(world),
        profiles_(world.population.profiles),
        evaluator_(evaluator),
        options_(options),
        law_(world.share_law),
        seed_(options.seed.value_or(scenario.params.rng_seed)),
        cadence_(options.record_cadence.value_or(scenario.params.record_cadence)) {}

  RunReport run();

 private:
  void setup();
  void step(int t);
  void receive(NodeId receiver, const Outgoing& msg, int t);
  double persuasion(MessageKind kind, NodeId receiver);
  bool draw_belief(NodeId receiver, NodeId sender, int t, double tt);
  double sender_influence(NodeId sender) const;
  Status status_of(std::size_t i) const;
  void record(int t);
  EvaluationResponse call(const EvaluationRequest& request);

  const Scenario& scenario_;
  const SimulationParams& params_;
  const World& world_;
  const std::vector<AgentProfile>& profiles_;
  Evaluator& evaluator_;
  const RunOptions& options_;
  TruncatedPowerLaw law_;
  std::uint64_t seed_;
  int cadence_;

  std::size_t topic_ = 0;
  ContentItem disinfo_;
  const ContentItem* correction_ = nullptr;
  double dp_ = 0.0;
  BotSchedules schedules_;
  std::vector<double> share_dt_base_;  // DT at n = 0 per agent

  std::vector<char> exposed_, believes_, spreader_;
  std::vector<double> tt_, anchor_, corr_sum_, dis_sum_;
  std::vector<std::vector<NodeId>> corr_senders_, dis_senders_;
  std::vector<std::int64_t> n_dis_, n_corr_;
  std::vector<std::optional<Pending>> inbox_;
  std::map<std::pair<int, NodeId>, double> persuasion_memo_;

  RunReport report_;
};

EvaluationResponse Simulation::call(const EvaluationRequest& request) {
  ++report_.counters.evaluator_calls;
  return evaluator_.evaluate(request);
}

void Simulation::setup() {
  const auto& names = scenario_.communities;
  if (world_.network.node_count() != profiles_.size())
    throw EngineError(EngineError::Kind::invalid_input, "network does not cover the profiles");
  if (!options_.topic.empty()) {
    auto idx = scenario_.community_index(options_.topic);
    if (!idx) throw EngineError(EngineError::Kind::invalid_input, "unknown topic '" + options_.topic + "'");
    topic_ = *idx;
  } else {
    bool found = false;
    for (std::size_t j = 0; j < names.size() && !found; ++j)
      for (const auto& item : scenario_.content_catalog)
        if (item.kind == ContentKind::disinformation && item.topic == names[j]) {
          topic_ = j;
          found = true;
          break;
        }
    if (!found) throw EngineError(EngineError::Kind::invalid_input, "catalog has no disinformation item");
  }
  const ContentItem* chosen = nullptr;
  for (const auto& item : scenario_.content_catalog)
    if (item.kind == ContentKind::disinformation && item.topic == names[topic_] &&
        (!chosen || item.content_id < chosen->content_id))
      chosen = &item;
  if (!chosen)
    throw EngineError(EngineError::Kind::invalid_input,
                      "no disinformation item for topic '" + names[topic_] + "'");
  disinfo_ = *chosen;

  if (auto problem = check_plan(options_.plan, params_); !problem.empty())
    throw EngineError(EngineError::Kind::invalid_input, problem);
  if (options_.plan.stage != Stage::control)
    correction_ = &correction_for(disinfo_, options_.plan.strategy, scenario_.content_catalog);

  if (options_.schedules) {
    if (options_.schedules->size() != profiles_.size())
      throw EngineError(EngineError::Kind::invalid_input, "schedule override needs one entry per agent");
    for (std::size_t i = 0; i < profiles_.size(); ++i) {
      const auto& steps = (*options_.schedules)[i];
      if (steps.empty()) continue;
      if (!profiles_[i].is_bot())
        throw EngineError(EngineError::Kind::invalid_input, "regular agents have no schedule");
      if (profiles_[i].kind == AgentKind::legitimate_bot && options_.plan.stage == Stage::control)
        throw EngineError(EngineError::Kind::schedule_conflict,
                          "legitimate bot '" + profiles_[i].agent_id + "' scheduled under control");
    }
    schedules_ = *options_.schedules;
  } else {
    schedules_ = build_bot_schedules(profiles_, params_, options_.plan, topic_, seed_);
  }

  const std::size_t n = profiles_.size();
  exposed_.assign(n, 0);
  believes_.assign(n, 0);
  spreader_.assign(n, 0);
  tt_.resize(n);
  for (std::size_t i = 0; i < n; ++i) tt_[i] = profiles_[i].is_bot() ? 1.0 : profiles_[i].trust[topic_];
  anchor_ = tt_;
  corr_sum_.assign(n, 0.0);
  dis_sum_.assign(n, 0.0);
  corr_senders_.assign(n, {});
  dis_senders_.assign(n, {});
  n_dis_.assign(n, 0);
  n_corr_.assign(n, 0);
  inbox_.assign(n, std::nullopt);
  share_dt_base_.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    share_dt_base_[i] = dissemination_tendency(profiles_[i], topic_, law_, params_, 0);

  report_.seed = seed_;
  report_.scenario_digest = world_.scenario_digest;
  report_.topic = names[topic_];
  report_.plan = options_.plan;
  report_.disinformation_id = disinfo_.content_id;
  report_.correction_id = correction_ ? correction_->content_id : std::string{};
  report_.communities = names;
  if (options_.record_trajectories) {
    report_.trajectories.emplace();
    for (const auto& p : profiles_)
      if (!p.is_bot()) {
        report_.trajectories->agent_ids.push_back(p.agent_id);
        report_.trajectories->values.emplace_back();
      }
  }
  if (options_.trace) {
    *options_.trace = {};
    options_.trace->schedules = schedules_;
  }

}

double Simulation::sender_influence(NodeId sender) const {
  const auto& si = profiles_[sender].influence;
  if (si[topic_] > 0.0) return si[topic_];
  return *std::max_element(si.begin(), si.end());
}

double Simulation::persuasion(MessageKind kind, NodeId receiver) {
  const auto memo_key = std::make_pair(static_cast<int>(kind), receiver);
  if (auto it = persuasion_memo_.find(memo_key); it != persuasion_memo_.end()) return it->second;
  EvaluationRequest request;
  request.kind = EvalKind::persuasiveness;
  request.context[ctx::community] = scenario_.communities[topic_];
  request.context[ctx::history] = profiles_[receiver].history_summary;
  request.context[ctx::subject_id] = profiles_[receiver].agent_id;
  if (kind == MessageKind::correction) {
    request.subject_texts = {correction_->text};
    request.context[ctx::content_kind] = "correction";
    request.context[ctx::strategy] = std::string(to_string(correction_->strategy));
    request.context[ctx::polarity] = "refute";
  } else {
    request.subject_texts = {disinfo_.text};
    request.context[ctx::content_kind] = "disinformation";
    request.context[ctx::strategy] = "none";
    request.context[ctx::polarity] = kind == MessageKind::refutation ? "refute" : "endorse";
    request.context[ctx::plausibility] = std::to_string(dp_);
  }
  const double f = call(request).score();
  persuasion_memo_.emplace(memo_key, f);
  return f;
}

bool Simulation::draw_belief(NodeId receiver, NodeId sender, int t, double tt) {
  const double da = discernment(tt, dp_);
  if (scenario_.evaluator_config.belief == BeliefMode::evaluator) {
    EvaluationRequest request;
    request.kind = EvalKind::belief_check;
    request.subject_texts = {disinfo_.text};
    request.context[ctx::community] = scenario_.communities[topic_];
    request.context[ctx::history] = profiles_[receiver].history_summary;
    request.context[ctx::subject_id] = profiles_[receiver].agent_id;
    request.context[ctx::trust] = std::to_string(tt);
    request.context[ctx::plausibility] = std::to_string(dp_);
    request.context["receipt"] = profiles_[sender].agent_id + "@" + std::to_string(t);
    return call(request).score() >= 0.5;
  }
  Substream rng({seed_, receiver, static_cast<std::uint64_t>(t), key(DrawPurpose::belief), sender});
  return believe_disinformation(da, rng);
}

void Simulation::receive(NodeId r, const Outgoing& msg, int t) {
  ++report_.counters.receipts;
  if (options_.trace) options_.trace->receipts.push_back({t, r, msg.sender, msg.kind});
  inbox_[r] = Pending{msg.kind, msg.sender};
  if (msg.kind == MessageKind::correction) {
    ++n_corr_[r];
  } else {
    exposed_[r] = 1;
    ++n_dis_[r];
  }

  // Each neighbour counts once per batch between two activations.
  const double weight = sender_influence(msg.sender) * persuasion(msg.kind, r);
  auto& senders = msg.kind == MessageKind::disinformation ? dis_senders_[r] : corr_senders_[r];
  if (std::find(senders.begin(), senders.end(), msg.sender) == senders.end()) {
    senders.push_back(msg.sender);
    (msg.kind == MessageKind::disinformation ? dis_sum_[r] : corr_sum_[r]) += weight;
  }
  tt_[r] = update_trust(anchor_[r], corr_sum_[r], dis_sum_[r], params_.gamma, params_.beta,
                        params_.delta);

  // Endorsements re-open the question; counter-messages can only talk a
  // believer out of it.
  if (msg.kind == MessageKind::disinformation || believes_[r])
    believes_[r] = draw_belief(r, msg.sender, t, tt_[r]) ? 1 : 0;
}

void Simulation::step(int t) {
  std::vector<Outgoing> outgoing;
  const auto T = static_cast<std::uint64_t>(t);
  for (std::size_t i = 0; i < profiles_.size(); ++i) {
    const auto& p = profiles_[i];
    const auto id = static_cast<NodeId>(i);
    if (p.is_bot()) {
      const auto& steps = schedules_[i];
      if (!std::binary_search(steps.begin(), steps.end(), t)) continue;
      if (p.kind == AgentKind::malicious_bot) {
        outgoing.push_back({id, MessageKind::disinformation, ShareMode::original});
        ++report_.counters.malicious_bot_shares;
      } else if (correction_ && is_intervention_active(options_.plan, t)) {
        outgoing.push_back({id, MessageKind::correction, ShareMode::original});
        ++report_.counters.legitimate_bot_shares;
      }
      continue;
    }

    Substream activation({seed_, i, T, key(DrawPurpose::activation)});
    if (!activation.bernoulli(activation_probability(p, t))) continue;
    ++report_.counters.activations;
    anchor_[i] = tt_[i];
    corr_sum_[i] = dis_sum_[i] = 0.0;
    corr_senders_[i].clear();
    dis_senders_[i].clear();
    if (!inbox_[i]) continue;
    const Pending latest = *inbox_[i];
    inbox_[i].reset();

    MessageKind kind;
    if (believes_[i])
      kind = MessageKind::disinformation;
    else if (latest.kind == MessageKind::disinformation)
      kind = MessageKind::refutation;
    else
      kind = latest.kind;
    const std::int64_t n = kind == MessageKind::correction ? n_corr_[i] : n_dis_[i];
    const double dt = std::clamp(
        share_dt_base_[i] * std::exp(-params_.xi * static_cast<double>(n)), 0.0, 1.0);
    Substream share({seed_, i, T, key(DrawPurpose::share)});
    if (!share.bernoulli(dt)) continue;

    ShareMode mode = ShareMode::quote;
    if (!(kind == MessageKind::refutation && latest.kind == MessageKind::disinformation)) {
      Substream mode_rng({seed_, i, T, key(DrawPurpose::share_mode)});
      mode = mode_rng.bernoulli(params_.repost_probability) ? ShareMode::repost : ShareMode::quote;
    }
    if (exposed_[i]) spreader_[i] = 1;
    outgoing.push_back({id, kind, mode});
    ++report_.counters.regular_shares;
  }

  for (const auto& msg : outgoing) {
    if (options_.trace) options_.trace->shares.push_back({t, msg.sender, msg.kind, msg.mode});
    for (NodeId r : world_.network.adjacency[msg.sender])
      if (!profiles_[r].is_bot()) receive(r, msg, t);
  }
}

Status Simulation::status_of(std::size_t i) const {
  if (!exposed_[i]) return Status::susceptible;
  if (!spreader_[i]) return Status::exposed;
  return believes_[i] ? Status::infected_spreader : Status::uninfected_spreader;
}

void Simulation::record(int t) {
  std::vector<Status> status(profiles_.size());
  for (std::size_t i = 0; i < profiles_.size(); ++i) status[i] = status_of(i);

  auto with_trust = [&](Snapshot s, std::span<const std::size_t> members) {
    double sum = 0.0;
    std::size_t count = 0;
    for (auto i : members)
      if (!profiles_[i].is_bot()) {
        sum += tt_[i];
        ++count;
      }
    if (count == 0) return s;
    s.tt_mean = sum / static_cast<double>(count);
    double sq = 0.0;
    for (auto i : members)
      if (!profiles_[i].is_bot()) sq += (tt_[i] - s.tt_mean) * (tt_[i] - s.tt_mean);
    s.tt_std = std::sqrt(sq / static_cast<double>(count));
    return s;
  };

  std::vector<Snapshot> row;
  for (const auto& members : world_.population.communities.members)
    row.push_back(with_trust(snapshot_ratios(status, profiles_, members), members));
  std::vector<std::size_t> everyone(profiles_.size());
  for (std::size_t i = 0; i < everyone.size(); ++i) everyone[i] = i;
  const Snapshot overall = with_trust(snapshot_ratios(status, profiles_, everyone), everyone);

  report_.steps.push_back(t);
  report_.series.push_back(std::move(row));
  report_.overall.push_back(overall);
  if (report_.trajectories) {
    std::size_t k = 0;
    for (std::size_t i = 0; i < profiles_.size(); ++i)
      if (!profiles_[i].is_bot()) report_.trajectories->values[k++].push_back(tt_[i]);
  }
  if (options_.progress) {
    nlohmann::json line = {{"event", "record"},   {"step", t},
                           {"topic", report_.topic}, {"plan", plan_label(options_.plan)},
                           {"SR", overall.sr},     {"ER", overall.er},
                           {"IR", overall.ir},     {"UR", overall.ur},
                           {"tt_mean", overall.tt_mean}};
    *options_.progress << line.dump() << '\n';
    options_.progress->flush();
  }
}

RunReport Simulation::run() {
  const ResourceLedger before = evaluator_.ledger_snapshot();
  setup();
  record(0);
  const int T = params_.total_steps;
  try {
    if (disinfo_.plausibility) {
      dp_ = *disinfo_.plausibility;
    } else {
      ++report_.counters.evaluator_calls;
      dp_ = score_plausibility(disinfo_, evaluator_);
    }
    for (int t = 1; t <= T; ++t) {
      step(t);
      if (t % cadence_ == 0 || t == T) record(t);
    }
  } catch (const EvaluatorError& e) {
    report_.complete = false;
    report_.error = e.what();
  }

  for (std::size_t i = 0; i < profiles_.size(); ++i) {
    if (profiles_[i].is_bot()) continue;
    const auto& id = profiles_[i].agent_id;
    switch (status_of(i)) {
      case Status::susceptible: report_.final_sets.susceptible.push_back(id); break;
      case Status::exposed: report_.final_sets.exposed.push_back(id); break;
      case Status::infected_spreader:
        report_.final_sets.exposed.push_back(id);
        report_.final_sets.infected_spreaders.push_back(id);
        break;
      case Status::uninfected_spreader:
        report_.final_sets.exposed.push_back(id);
        report_.final_sets.uninfected_spreaders.push_back(id);
        break;
    }
  }
  if (options_.trace) options_.trace->final_trust = tt_;
  report_.ledger = evaluator_.ledger_snapshot().since(before);
  return std::move(report_);
}

}  // namespace

RunReport run_simulation(const Scenario& scenario, const World& world, Evaluator& evaluator,
                         const RunOptions& options) {
  Simulation sim(scenario, world, evaluator, options);
  return sim.run();
}

}  // namespace madd
