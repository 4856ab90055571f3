#include "madd_cli/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "madd/digest.hpp"
#include "madd/engine.hpp"
#include "madd/evaluator.hpp"
#include "madd/network.hpp"
#include "madd/remote_evaluator.hpp"
#include "madd/report.hpp"
#include "madd/scenario.hpp"
#include "madd/synthetic_evaluator.hpp"
#include "madd/synthetic_scenario.hpp"

namespace madd::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

/// Bad input from the user: exit code 1.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Writes files under one directory and remembers each for the manifest.
class OutputDir {
 public:
  explicit OutputDir(fs::path root) : root_(std::move(root)) {}

  void write(const std::string& relative, const std::string& content) {
    const fs::path path = root_ / relative;
    fs::create_directories(path.parent_path());
    std::ofstream os(path, std::ios::binary);
    os << content;
    if (!os) throw std::runtime_error("cannot write " + path.string());
    files_.push_back({{"path", relative},
                      {"bytes", content.size()},
                      {"sha256", sha256_hex(content)}});
  }

  void write_manifest(std::string_view command, const std::string& digest,
                      std::optional<std::uint64_t> seed) {
    json m = {{"command", command}, {"scenario_digest", digest}, {"files", files_}};
    m["seed"] = seed ? json(*seed) : json(nullptr);
    const fs::path path = root_ / "manifest.json";
    fs::create_directories(root_);
    std::ofstream os(path, std::ios::binary);
    os << m.dump(2) << '\n';
    if (!os) throw std::runtime_error("cannot write " + path.string());
  }

 private:
  fs::path root_;
  json files_ = json::array();
};

struct ScenarioArgs {
  std::string path;
  std::string backend;
};

Scenario load(const ScenarioArgs& args) {
  Scenario s = load_scenario(args.path);
  if (!args.backend.empty()) {
    s.evaluator_config.backend = args.backend;
    validate_scenario(s);
  }
  return s;
}

std::unique_ptr<Evaluator> make_evaluator(const Scenario& s) {
  if (s.evaluator_config.backend == "remote")
    return std::make_unique<RemoteEvaluator>(s.evaluator_config.remote);
  return std::make_unique<SyntheticEvaluator>(s.params.rng_seed);
}

void add_scenario_options(CLI::App& cmd, ScenarioArgs& args) {
  cmd.add_option("--scenario", args.path, "Scenario JSON file")->required()->check(CLI::ExistingFile);
  cmd.add_option("--backend", args.backend, "Evaluator backend override")
      ->check(CLI::IsMember({"synthetic", "remote"}));
}

void dump_world(OutputDir& out, const Scenario& s, const World& w, bool profiles, bool network) {
  if (profiles) out.write("profiles.json", profiles_to_json(s, w.population) + "\n");
  if (network) {
    out.write("network.json", network_to_json(w.network, s.communities) + "\n");
    out.write("edges.txt", edge_list(w.network));
  }
}

struct RunArgs {
  ScenarioArgs scenario;
  std::optional<std::uint64_t> seed;
  std::string stage;
  std::string strategy;
  std::string topic;
  std::string out;
  std::optional<int> record_cadence;
  bool dump_profiles = false;
  bool dump_network = false;
  bool trajectories = false;
  bool progress = false;
};

void add_run_options(CLI::App& cmd, RunArgs& a) {
  add_scenario_options(cmd, a.scenario);
  cmd.add_option("--stage", a.stage, "Intervention stage")
      ->check(CLI::IsMember({"early", "mid", "late"}));
  cmd.add_option("--topic", a.topic, "Community whose disinformation item is seeded");
  cmd.add_option("--out", a.out, "Output directory")->required();
  cmd.add_option("--record-cadence", a.record_cadence, "Steps between recorded snapshots")
      ->check(CLI::PositiveNumber);
  cmd.add_flag("--dump-profiles", a.dump_profiles, "Also write profiles.json");
  cmd.add_flag("--dump-network", a.dump_network, "Also write network.json and edges.txt");
  cmd.add_flag("--trajectories", a.trajectories, "Record per-agent trust trajectories");
  cmd.add_flag("--progress", a.progress, "Stream progress events (JSON lines) to stderr");
}

RunOptions base_options(const RunArgs& a, std::ostream& err) {
  RunOptions o;
  o.topic = a.topic;
  o.seed = a.seed;
  o.record_cadence = a.record_cadence;
  o.record_trajectories = a.trajectories;
  if (a.progress) o.progress = &err;
  return o;
}

int finish_run(OutputDir& dir, const std::string& prefix, const RunReport& report,
               std::ostream& err) {
  dir.write(prefix + "report.json", to_json(report) + "\n");
  dir.write(prefix + "report.csv", to_csv(report));
  if (!report.complete) {
    err << "run incomplete: " << report.error << '\n';
    return runtime_failure;
  }
  return ok;
}

int cmd_validate(const ScenarioArgs& a, std::ostream& out) {
  const Scenario s = load(a);
  out << "OK " << s.users.size() << " users, " << s.communities.size() << " communities, "
      << s.content_catalog.size() << " content items, digest " << scenario_digest(s) << '\n';
  return ok;
}

int cmd_defaults(bool as_json, std::ostream& out) {
  out << (as_json ? defaults_json() + "\n" : render_defaults_table());
  return ok;
}

int cmd_synth(std::uint64_t seed, int users, const std::string& out_dir, std::ostream& out) {
  SyntheticScenarioOptions options;
  options.seed = seed;
  options.total_users = users;
  const Scenario s = make_synthetic_scenario(options);
  validate_scenario(s);
  OutputDir dir(out_dir);
  dir.write("scenario.json", to_json(s) + "\n");
  const std::string digest = scenario_digest(s);
  dir.write_manifest("synth", digest, seed);
  out << "wrote " << (fs::path(out_dir) / "scenario.json").string() << " digest " << digest << '\n';
  return ok;
}

int cmd_profiles(const ScenarioArgs& a, const std::string& out_dir, std::ostream& out) {
  const Scenario s = load(a);
  auto evaluator = make_evaluator(s);
  const Population pop = derive_profiles(s, *evaluator);
  OutputDir dir(out_dir);
  dir.write("profiles.json", profiles_to_json(s, pop) + "\n");
  for (const auto& w : pop.warnings) out << "warning: " << w << '\n';
  dir.write_manifest("profiles", scenario_digest(s), s.params.rng_seed);
  out << pop.profiles.size() << " profiles written\n";
  return ok;
}

int cmd_network(const ScenarioArgs& a, const std::string& out_dir, std::ostream& out) {
  const Scenario s = load(a);
  auto evaluator = make_evaluator(s);
  const World w = prepare_world(s, *evaluator);
  OutputDir dir(out_dir);
  dump_world(dir, s, w, false, true);

  const DegreeDistribution dd = degree_distribution(w.network);
  json degrees = {{"histogram", dd.histogram}};
  if (dd.tail_fit)
    degrees["tail_fit"] = {{"alpha", dd.tail_fit->alpha},
                           {"x_min", dd.tail_fit->x_min},
                           {"ks_distance", dd.tail_fit->ks_distance},
                           {"tail_count", dd.tail_fit->tail_count}};
  const auto labels = primary_labels(w.population.profiles, w.population.communities);
  const EdgeDensities density = edge_densities(w.network, labels);
  degrees["density"] = {{"intra", density.intra}, {"inter", density.inter}};
  degrees["overlap"] = community_overlap_matrix(w.population.communities);
  dir.write("degrees.json", degrees.dump(2) + "\n");
  dir.write_manifest("network", w.scenario_digest, s.params.rng_seed);
  out << w.network.ids.size() << " nodes, " << w.network.edges.size() << " edges\n";
  return ok;
}

int cmd_run(RunArgs& a, std::ostream& out, std::ostream& err) {
  if (a.stage.empty() != a.strategy.empty())
    throw InputError("--stage and --strategy must be given together");
  const Scenario s = load(a.scenario);
  RunOptions options = base_options(a, err);
  if (!a.stage.empty())
    options.plan = InterventionPlan::make(*parse_stage(a.stage), *parse_strategy(a.strategy), s.params);

  auto evaluator = make_evaluator(s);
  const World world = prepare_world(s, *evaluator);
  OutputDir dir(a.out);
  dump_world(dir, s, world, a.dump_profiles, a.dump_network);
  const RunReport report = run_simulation(s, world, *evaluator, options);
  const int code = finish_run(dir, "", report, err);
  dir.write_manifest("run", report.scenario_digest, report.seed);
  const auto& last = report.overall.back();
  out << plan_label(report.plan) << " topic " << report.topic << ": final ER " << last.er
      << " IR " << last.ir << " UR " << last.ur << '\n';
  return code;
}

int cmd_experiment(RunArgs& a, std::ostream& out, std::ostream& err) {
  const Scenario s = load(a.scenario);
  std::vector<Strategy> strategies;
  if (a.strategy == "both" || a.strategy.empty())
    strategies = {Strategy::fact_based, Strategy::narrative_based};
  else
    strategies = {*parse_strategy(a.strategy)};
  const Stage stage = *parse_stage(a.stage);

  auto evaluator = make_evaluator(s);
  const World world = prepare_world(s, *evaluator);
  OutputDir dir(a.out);
  dump_world(dir, s, world, a.dump_profiles, a.dump_network);

  std::vector<InterventionPlan> plans{InterventionPlan::control()};
  for (auto strategy : strategies) plans.push_back(InterventionPlan::make(stage, strategy, s.params));

  int code = ok;
  std::vector<RunReport> reports;
  for (const auto& plan : plans) {
    RunOptions options = base_options(a, err);
    options.plan = plan;
    RunReport report = run_simulation(s, world, *evaluator, options);
    std::string label = plan_label(plan);
    std::replace(label.begin(), label.end(), '/', '-');
    if (finish_run(dir, label + "/", report, err) != ok) code = runtime_failure;
    reports.push_back(std::move(report));
  }
  if (code == ok) {
    const ComparisonReport comparison = compare_interventions(reports);
    dir.write("comparison.json", to_json(comparison) + "\n");
    for (const auto& arm : comparison.arms) {
      const auto& topic_delta = arm.communities.at(reports.front().community_position(comparison.topic));
      out << arm.label << " vs " << comparison.baseline_label << " in " << comparison.topic
          << ": final delta IR " << topic_delta.final_delta_ir << '\n';
    }
  }
  dir.write_manifest("experiment", reports.front().scenario_digest, reports.front().seed);
  return code;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Agent-based simulation of disinformation spread and bot-driven correction", "madd"};
  app.require_subcommand(0, 1);
  bool print_defaults = false;
  app.add_flag("--print-defaults", print_defaults, "Print the parameter defaults and exit");

  ScenarioArgs validate_args;
  auto* validate = app.add_subcommand("validate", "Check a scenario file");
  add_scenario_options(*validate, validate_args);

  bool defaults_as_json = false;
  auto* defaults = app.add_subcommand("defaults", "Print the parameter defaults");
  defaults->add_flag("--json", defaults_as_json, "As a scenario \"params\" object");

  ScenarioArgs derive_args;
  std::string derive_out;
  auto* profiles = app.add_subcommand("profiles", "Derive agent profiles");
  add_scenario_options(*profiles, derive_args);
  profiles->add_option("--out", derive_out, "Output directory")->required();
  auto* network = app.add_subcommand("network", "Build the propagation network");
  add_scenario_options(*network, derive_args);
  network->add_option("--out", derive_out, "Output directory")->required();

  RunArgs run_args;
  auto* run_cmd = app.add_subcommand("run", "Run one simulation");
  add_run_options(*run_cmd, run_args);
  run_cmd->add_option("--seed", run_args.seed, "Run seed")->required();
  run_cmd->add_option("--strategy", run_args.strategy, "Correction strategy")
      ->check(CLI::IsMember({"fact", "narrative", "fact_based", "narrative_based"}));

  RunArgs exp_args;
  auto* experiment = app.add_subcommand("experiment", "Control plus corrected runs, compared");
  add_run_options(*experiment, exp_args);
  experiment->get_option("--stage")->required();
  experiment->add_option("--seed", exp_args.seed, "Run seed (default: the scenario's)");
  exp_args.strategy = "both";
  experiment->add_option("--strategy", exp_args.strategy, "Correction strategy")
      ->capture_default_str()
      ->check(CLI::IsMember({"fact", "narrative", "both", "fact_based", "narrative_based"}));

  std::uint64_t synth_seed = 0;
  int synth_users = 689;
  std::string synth_out;
  auto* synth = app.add_subcommand("synth", "Write a synthetic scenario");
  synth->add_option("--seed", synth_seed, "Generator seed");
  synth->add_option("--users", synth_users, "Regular users")->check(CLI::PositiveNumber);
  synth->add_option("--out", synth_out, "Output directory")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return ok;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return validation_failure;
  }

  try {
    if (print_defaults) return cmd_defaults(false, out);
    if (*validate) return cmd_validate(validate_args, out);
    if (*defaults) return cmd_defaults(defaults_as_json, out);
    if (*profiles) return cmd_profiles(derive_args, derive_out, out);
    if (*network) return cmd_network(derive_args, derive_out, out);
    if (*run_cmd) return cmd_run(run_args, out, err);
    if (*experiment) return cmd_experiment(exp_args, out, err);
    if (*synth) return cmd_synth(synth_seed, synth_users, synth_out, out);
    out << app.help();
    return ok;
  } catch (const ScenarioError& e) {
    err << "invalid scenario: " << e.what() << '\n';
    return validation_failure;
  } catch (const ContentError& e) {
    err << "invalid content: " << e.what() << '\n';
    return validation_failure;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return validation_failure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return runtime_failure;
  }
}

}  // namespace madd::cli
