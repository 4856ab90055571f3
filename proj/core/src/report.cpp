#include "madd/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

namespace madd {

using nlohmann::json;

std::size_t RunReport::community_position(std::string_view name) const {
  for (std::size_t j = 0; j < communities.size(); ++j)
    if (communities[j] == name) return j;
  throw ReportError(ReportError::Kind::unknown_community,
                    "report has no community '" + std::string(name) + "'");
}

std::string plan_label(const InterventionPlan& plan) {
  if (plan.stage == Stage::control) return "control";
  return std::string(to_string(plan.stage)) + "/" + std::string(to_string(plan.strategy));
}

std::vector<std::string> check_report(const RunReport& r, double tol) {
  std::vector<std::string> problems;
  auto where = [&](std::size_t k, const std::string& c) {
    return "step " + std::to_string(r.steps[k]) + " " + c + ": ";
  };
  auto check = [&](const Snapshot& s, std::size_t k, const std::string& c) {
    if (std::abs(s.sr + s.er - 1.0) > tol) problems.push_back(where(k, c) + "SR + ER != 1");
    if (s.ir + s.ur > s.er + tol) problems.push_back(where(k, c) + "IR + UR > ER");
    for (double v : {s.sr, s.er, s.ir, s.ur})
      if (v < -tol || v > 1.0 + tol) problems.push_back(where(k, c) + "ratio outside [0, 1]");
    if (s.tt_mean < -tol || s.tt_mean > 1.0 + tol) problems.push_back(where(k, c) + "tt_mean outside [0, 1]");
    if (s.tt_std < -tol) problems.push_back(where(k, c) + "tt_std negative");
  };
  if (r.series.size() != r.steps.size()) problems.push_back("series length differs from steps");
  for (std::size_t k = 0; k < r.series.size() && k < r.steps.size(); ++k) {
    if (r.series[k].size() != r.communities.size())
      problems.push_back(where(k, "") + "wrong community count");
    for (std::size_t j = 0; j < r.series[k].size() && j < r.communities.size(); ++j) {
      check(r.series[k][j], k, r.communities[j]);
      if (k > 0 && r.series[k][j].er + tol < r.series[k - 1][j].er)
        problems.push_back(where(k, r.communities[j]) + "ER decreased");
    }
    if (k < r.overall.size()) {
      check(r.overall[k], k, "overall");
      if (k > 0 && r.overall[k].er + tol < r.overall[k - 1].er)
        problems.push_back(where(k, "overall") + "ER decreased");
    }
    if (k > 0 && r.steps[k] <= r.steps[k - 1]) problems.push_back(where(k, "") + "steps not increasing");
  }
  if (r.trajectories)
    for (const auto& row : r.trajectories->values)
      for (double v : row)
        if (v < 0.0 || v > 1.0) problems.push_back("trust trajectory outside [0, 1]");
  return problems;
}

namespace {

json snapshot_json(const Snapshot& s) {
  return {{"SR", s.sr}, {"ER", s.er}, {"IR", s.ir}, {"UR", s.ur}, {"tt_mean", s.tt_mean}, {"tt_std", s.tt_std}};
}

Snapshot snapshot_from(const json& j) {
  return {j.at("SR").get<double>(), j.at("ER").get<double>(), j.at("IR").get<double>(),
          j.at("UR").get<double>(), j.at("tt_mean").get<double>(), j.at("tt_std").get<double>()};
}

json usage_json(const Usage& u) {
  return {{"calls", u.calls},
          {"tokens_in", u.tokens_in},
          {"tokens_out", u.tokens_out},
          {"latency_seconds", u.latency_seconds},
          {"approximate_tokens", u.approximate_tokens}};
}

Usage usage_from(const json& j) {
  Usage u;
  u.calls = j.at("calls").get<std::int64_t>();
  u.tokens_in = j.at("tokens_in").get<std::int64_t>();
  u.tokens_out = j.at("tokens_out").get<std::int64_t>();
  u.latency_seconds = j.at("latency_seconds").get<double>();
  u.approximate_tokens = j.at("approximate_tokens").get<bool>();
  return u;
}

[[noreturn]] void invalid(const std::string& what) {
  throw ReportError(ReportError::Kind::invalid_report, what);
}

void require_consistent(const RunReport& r, double tol) {
  if (auto problems = check_report(r, tol); !problems.empty()) invalid(problems.front());
}

}  // namespace

std::string to_json(const RunReport& r, int indent) {
  json series = json::array();
  for (std::size_t k = 0; k < r.steps.size(); ++k) {
    json by_community = json::object();
    for (std::size_t j = 0; j < r.communities.size(); ++j)
      by_community[r.communities[j]] = snapshot_json(r.series[k][j]);
    series.push_back({{"step", r.steps[k]}, {"communities", by_community}, {"overall", snapshot_json(r.overall[k])}});
  }
  json ledger_by = json::object();
  for (const auto& [name, usage] : r.ledger.per_community) ledger_by[name] = usage_json(usage);
  json doc = {
      {"scenario_digest", r.scenario_digest},
      {"seed", r.seed},
      {"topic", r.topic},
      {"plan",
       {{"stage", std::string(to_string(r.plan.stage))},
        {"strategy", std::string(to_string(r.plan.strategy))},
        {"window", {r.plan.window.first, r.plan.window.last}}}},
      {"disinformation_id", r.disinformation_id},
      {"correction_id", r.correction_id},
      {"communities", r.communities},
      {"series", series},
      {"final_sets",
       {{"susceptible", r.final_sets.susceptible},
        {"exposed", r.final_sets.exposed},
        {"infected_spreaders", r.final_sets.infected_spreaders},
        {"uninfected_spreaders", r.final_sets.uninfected_spreaders}}},
      {"counters",
       {{"activations", r.counters.activations},
        {"regular_shares", r.counters.regular_shares},
        {"malicious_bot_shares", r.counters.malicious_bot_shares},
        {"legitimate_bot_shares", r.counters.legitimate_bot_shares},
        {"receipts", r.counters.receipts},
        {"evaluator_calls", r.counters.evaluator_calls}}},
      {"ledger", {{"total", usage_json(r.ledger.total)}, {"per_community", ledger_by}}},
      {"complete", r.complete},
  };
  if (!r.error.empty()) doc["error"] = r.error;
  if (r.trajectories) {
    json traj = json::array();
    for (std::size_t a = 0; a < r.trajectories->agent_ids.size(); ++a)
      traj.push_back({{"agent_id", r.trajectories->agent_ids[a]}, {"tt", r.trajectories->values[a]}});
    doc["trajectories"] = traj;
  }
  return doc.dump(indent) + "\n";
}

RunReport report_from_json(std::string_view text) {
  const json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) invalid("report is not a JSON object");
  RunReport r;
  try {
    r.scenario_digest = doc.at("scenario_digest").get<std::string>();
    r.seed = doc.at("seed").get<std::uint64_t>();
    r.topic = doc.at("topic").get<std::string>();
    const auto& plan = doc.at("plan");
    auto stage = parse_stage(plan.at("stage").get<std::string>());
    auto strategy = parse_strategy(plan.at("strategy").get<std::string>());
    if (!stage || !strategy) invalid("unknown plan stage or strategy");
    r.plan.stage = *stage;
    r.plan.strategy = *strategy;
    r.plan.window = {plan.at("window").at(0).get<int>(), plan.at("window").at(1).get<int>()};
    r.disinformation_id = doc.at("disinformation_id").get<std::string>();
    r.correction_id = doc.at("correction_id").get<std::string>();
    r.communities = doc.at("communities").get<std::vector<std::string>>();
    for (const auto& entry : doc.at("series")) {
      r.steps.push_back(entry.at("step").get<int>());
      std::vector<Snapshot> row;
      for (const auto& name : r.communities) row.push_back(snapshot_from(entry.at("communities").at(name)));
      r.series.push_back(std::move(row));
      r.overall.push_back(snapshot_from(entry.at("overall")));
    }
    const auto& sets = doc.at("final_sets");
    r.final_sets.susceptible = sets.at("susceptible").get<std::vector<std::string>>();
    r.final_sets.exposed = sets.at("exposed").get<std::vector<std::string>>();
    r.final_sets.infected_spreaders = sets.at("infected_spreaders").get<std::vector<std::string>>();
    r.final_sets.uninfected_spreaders = sets.at("uninfected_spreaders").get<std::vector<std::string>>();
    const auto& c = doc.at("counters");
    r.counters.activations = c.at("activations").get<std::int64_t>();
    r.counters.regular_shares = c.at("regular_shares").get<std::int64_t>();
    r.counters.malicious_bot_shares = c.at("malicious_bot_shares").get<std::int64_t>();
    r.counters.legitimate_bot_shares = c.at("legitimate_bot_shares").get<std::int64_t>();
    r.counters.receipts = c.at("receipts").get<std::int64_t>();
    r.counters.evaluator_calls = c.at("evaluator_calls").get<std::int64_t>();
    r.ledger.total = usage_from(doc.at("ledger").at("total"));
    for (const auto& [name, usage] : doc.at("ledger").at("per_community").items())
      r.ledger.per_community[name] = usage_from(usage);
    r.complete = doc.at("complete").get<bool>();
    if (auto it = doc.find("error"); it != doc.end()) r.error = it->get<std::string>();
    if (auto it = doc.find("trajectories"); it != doc.end()) {
      r.trajectories.emplace();
      for (const auto& entry : *it) {
        r.trajectories->agent_ids.push_back(entry.at("agent_id").get<std::string>());
        r.trajectories->values.push_back(entry.at("tt").get<std::vector<double>>());
      }
    }
  } catch (const json::exception& e) {
    invalid(std::string("malformed report: ") + e.what());
  }
  require_consistent(r, 1e-12);
  return r;
}

std::string to_csv(const RunReport& r) {
  std::string out = "step,community,SR,ER,IR,UR,tt_mean,tt_std\n";
  char buf[256];
  for (std::size_t k = 0; k < r.steps.size(); ++k)
    for (std::size_t j = 0; j < r.communities.size(); ++j) {
      const auto& s = r.series[k][j];
      std::snprintf(buf, sizeof buf, "%d,", r.steps[k]);
      out += buf;
      // Community names are quoted only when they need it.
      const auto& name = r.communities[j];
      if (name.find_first_of(",\"\n") != std::string::npos) {
        out += '"';
        for (char ch : name) {
          if (ch == '"') out += '"';
          out += ch;
        }
        out += '"';
      } else {
        out += name;
      }
      std::snprintf(buf, sizeof buf, ",%.9f,%.9f,%.9f,%.9f,%.9f,%.9f\n", s.sr, s.er, s.ir, s.ur,
                    s.tt_mean, s.tt_std);
      out += buf;
    }
  return out;
}

RunReport report_from_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != "step,community,SR,ER,IR,UR,tt_mean,tt_std")
    invalid("unexpected CSV header");
  RunReport r;
  std::map<int, std::map<std::string, Snapshot>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::string cell;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      const char ch = line[i];
      if (quoted) {
        if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') { cell += '"'; ++i; }
        else if (ch == '"') quoted = false;
        else cell += ch;
      } else if (ch == '"') {
        quoted = true;
      } else if (ch == ',') {
        cells.push_back(std::move(cell));
        cell.clear();
      } else {
        cell += ch;
      }
    }
    cells.push_back(std::move(cell));
    if (cells.size() != 8) invalid("CSV row needs 8 fields: " + line);
    try {
      const int step = std::stoi(cells[0]);
      if (std::find(r.communities.begin(), r.communities.end(), cells[1]) == r.communities.end())
        r.communities.push_back(cells[1]);
      rows[step][cells[1]] = {std::stod(cells[2]), std::stod(cells[3]), std::stod(cells[4]),
                              std::stod(cells[5]), std::stod(cells[6]), std::stod(cells[7])};
    } catch (const std::logic_error&) {
      invalid("CSV row has a non-numeric field: " + line);
    }
  }
  for (const auto& [step, by_name] : rows) {
    r.steps.push_back(step);
    std::vector<Snapshot> row;
    for (const auto& name : r.communities) {
      auto it = by_name.find(name);
      if (it == by_name.end()) invalid("CSV lacks community " + name + " at step " + std::to_string(step));
      row.push_back(it->second);
    }
    r.series.push_back(std::move(row));
  }
  // Nine decimals per field: two rounded values can disagree by 1e-9 each.
  require_consistent(r, 5e-9);
  return r;
}

void export_report(const RunReport& report, ExportFormat format, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ReportError(ReportError::Kind::io, "cannot write " + path.string());
  out << (format == ExportFormat::csv ? to_csv(report) : to_json(report));
  if (!out) throw ReportError(ReportError::Kind::io, "failed writing " + path.string());
}

std::vector<TrustPoint> trust_trajectory_stats(const RunReport& report, std::string_view community) {
  const std::size_t j = report.community_position(community);
  std::vector<TrustPoint> out;
  for (std::size_t k = 0; k < report.steps.size(); ++k)
    out.push_back({report.steps[k], report.series[k][j].tt_mean, report.series[k][j].tt_std});
  return out;
}

ComparisonReport compare_interventions(const std::vector<RunReport>& reports) {
  if (reports.size() < 2)
    throw ReportError(ReportError::Kind::mismatched_runs, "need at least two reports to compare");
  const RunReport& base = reports.front();
  ComparisonReport out;
  out.scenario_digest = base.scenario_digest;
  out.seed = base.seed;
  out.topic = base.topic;
  out.baseline_label = plan_label(base.plan);
  out.steps = base.steps;

  auto peak_ir = [](const RunReport& r, std::size_t j) {
    double m = 0.0;
    for (const auto& row : r.series) m = std::max(m, row[j].ir);
    return m;
  };
  for (std::size_t a = 1; a < reports.size(); ++a) {
    const RunReport& arm = reports[a];
    if (arm.scenario_digest != base.scenario_digest || arm.seed != base.seed)
      throw ReportError(ReportError::Kind::mismatched_runs,
                        "reports differ in scenario digest or seed: " + plan_label(arm.plan));
    if (arm.topic != base.topic || arm.communities != base.communities || arm.steps != base.steps)
      throw ReportError(ReportError::Kind::mismatched_runs,
                        "reports differ in topic, communities or recorded steps: " + plan_label(arm.plan));
    ArmComparison cmp;
    cmp.label = plan_label(arm.plan);
    for (std::size_t j = 0; j < base.communities.size(); ++j) {
      CommunityDelta d;
      d.community = base.communities[j];
      for (std::size_t k = 0; k < base.steps.size(); ++k)
        d.delta_ir.push_back(arm.series[k][j].ir - base.series[k][j].ir);
      if (!d.delta_ir.empty()) {
        d.final_delta_ir = d.delta_ir.back();
        d.final_delta_tt_mean = arm.series.back()[j].tt_mean - base.series.back()[j].tt_mean;
      }
      d.peak_delta_ir = peak_ir(arm, j) - peak_ir(base, j);
      cmp.communities.push_back(std::move(d));
    }
    out.arms.push_back(std::move(cmp));
  }
  return out;
}

std::string to_json(const ComparisonReport& c, int indent) {
  json arms = json::array();
  for (const auto& arm : c.arms) {
    json comms = json::array();
    for (const auto& d : arm.communities)
      comms.push_back({{"community", d.community},
                       {"delta_IR", d.delta_ir},
                       {"final_delta_IR", d.final_delta_ir},
                       {"peak_delta_IR", d.peak_delta_ir},
                       {"final_delta_tt_mean", d.final_delta_tt_mean}});
    arms.push_back({{"label", arm.label}, {"communities", comms}});
  }
  json doc = {{"scenario_digest", c.scenario_digest},
              {"seed", c.seed},
              {"topic", c.topic},
              {"baseline", c.baseline_label},
              {"steps", c.steps},
              {"arms", arms}};
  return doc.dump(indent) + "\n";
}

}  // namespace madd
