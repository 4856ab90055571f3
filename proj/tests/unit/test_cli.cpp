#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "madd_cli/cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = madd::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path fresh_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("madd_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// A small synthetic scenario written once per test binary.
const fs::path& scenario_file() {
  static const fs::path path = [] {
    const auto dir = fresh_dir("scenario");
    const auto r = invoke({"synth", "--seed", "5", "--users", "300", "--out", dir.string()});
    EXPECT_EQ(r.code, 0) << r.err;
    return dir / "scenario.json";
  }();
  return path;
}

}  // namespace

TEST(Cli, ValidateAcceptsSyntheticScenario) {
  const auto r = invoke({"validate", "--scenario", scenario_file().string()});
  EXPECT_EQ(r.code, madd::cli::ok) << r.err;
  EXPECT_EQ(r.out.rfind("OK 300 users, 6 communities", 0), 0u) << r.out;
}

TEST(Cli, ValidationFailuresExitOne) {
  const auto dir = fresh_dir("bad");
  std::ofstream(dir / "empty.json") << "{}";
  const auto r = invoke({"validate", "--scenario", (dir / "empty.json").string()});
  EXPECT_EQ(r.code, madd::cli::validation_failure);
  EXPECT_NE(r.err.find("version"), std::string::npos);

  EXPECT_EQ(invoke({"run", "--scenario", scenario_file().string(), "--out", dir.string()}).code,
            madd::cli::validation_failure);
  EXPECT_EQ(invoke({"frobnicate"}).code, madd::cli::validation_failure);
  EXPECT_EQ(invoke({"run", "--scenario", scenario_file().string(), "--seed", "1", "--out",
                    dir.string(), "--stage", "early"})
                .code,
            madd::cli::validation_failure);
}

TEST(Cli, DefaultsAsJson) {
  const auto r = invoke({"defaults", "--json"});
  ASSERT_EQ(r.code, 0);
  EXPECT_DOUBLE_EQ(json::parse(r.out).at("theta").get<double>(), 0.5);
  const auto table = invoke({"--print-defaults"});
  EXPECT_EQ(table.code, 0);
  EXPECT_NE(table.out.find("intervention_windows.early"), std::string::npos);
}

TEST(Cli, RepeatedRunsAreByteIdentical) {
  const auto a = fresh_dir("run_a"), b = fresh_dir("run_b");
  for (const auto& dir : {a, b}) {
    const auto r = invoke({"run", "--scenario", scenario_file().string(), "--seed", "11",
                           "--stage", "early", "--strategy", "fact", "--out", dir.string()});
    ASSERT_EQ(r.code, 0) << r.err;
  }
  const auto manifest = slurp(a / "manifest.json");
  EXPECT_EQ(manifest, slurp(b / "manifest.json"));
  const auto doc = json::parse(manifest);
  EXPECT_EQ(doc.at("seed").get<std::uint64_t>(), 11u);
  EXPECT_FALSE(doc.at("files").empty());
}

TEST(Cli, ExperimentWritesEveryArm) {
  const auto dir = fresh_dir("experiment");
  const auto r = invoke({"experiment", "--scenario", scenario_file().string(), "--stage", "late",
                         "--out", dir.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(dir / "control"));
  EXPECT_TRUE(fs::exists(dir / "late-fact_based"));
  EXPECT_TRUE(fs::exists(dir / "late-narrative_based"));
  const auto cmp = json::parse(slurp(dir / "comparison.json"));
  EXPECT_EQ(cmp.at("arms").size(), 2u);
}

TEST(Cli, NetworkExport) {
  const auto dir = fresh_dir("network");
  const auto r = invoke({"network", "--scenario", scenario_file().string(), "--out", dir.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto degrees = json::parse(slurp(dir / "degrees.json"));
  EXPECT_TRUE(degrees.contains("histogram"));
  EXPECT_TRUE(fs::exists(dir / "edges.txt"));
}
