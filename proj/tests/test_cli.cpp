// Runs the g2cal executable: exit codes, golden values and byte-identical reports.

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch() {
  const fs::path dir = fs::temp_directory_path() / ("g2cal_cli_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir;
}

int runTool(const std::vector<std::string>& args) {
  std::string cmd = G2CAL_EXE;
  for (const auto& a : args) cmd += " '" + a + "'";
  cmd += " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const json* findCheck(const json& report, const std::string& name) {
  for (const auto& c : report["checks"])
    if (c["name"] == name) return &c;
  return nullptr;
}

// Every key of `expected` is present in `actual` with an equal value.
void expectSubset(const json& expected, const json& actual, const std::string& path) {
  if (expected.is_object()) {
    ASSERT_TRUE(actual.is_object()) << path;
    for (const auto& [k, v] : expected.items()) {
      ASSERT_TRUE(actual.contains(k)) << path << "/" << k;
      expectSubset(v, actual[k], path + "/" + k);
    }
  } else {
    EXPECT_EQ(expected, actual) << path;
  }
}

class Golden : public testing::TestWithParam<std::string> {};

} // namespace

TEST_P(Golden, MatchesStoredValues) {
  const json golden = json::parse(slurp(fs::path(G2CAL_GOLDEN_DIR) / GetParam()));
  const fs::path out = scratch() / "golden.json";
  std::vector<std::string> args = golden["args"].get<std::vector<std::string>>();
  args.insert(args.end(), {"--out", out.string(), "--quiet"});
  ASSERT_EQ(runTool(args), golden["exit"].get<int>());
  const json report = json::parse(slurp(out));
  for (const auto& [name, exp] : golden["checks"].items()) {
    const json* c = findCheck(report, name);
    ASSERT_NE(c, nullptr) << name;
    EXPECT_EQ((*c)["provenance"], exp["provenance"]) << name;
    if (exp.contains("tol"))
      EXPECT_LE(std::abs((*c)["computed"].get<double>() - exp["value"].get<double>()), exp["tol"].get<double>())
          << name;
    else
      EXPECT_EQ((*c)["computed"], exp["value"]) << name;
  }
  expectSubset(golden["results"], report["results"], "results");
}

INSTANTIATE_TEST_SUITE_P(Cli, Golden,
                         testing::Values("certify_torus_n6.json", "certify_cy_m3.json", "boundary_chern_r1.json"),
                         [](const auto& info) { return info.param.substr(0, info.param.find('.')); });

TEST(Cli, ReportsAreByteIdenticalUnderFixedSeed) {
  const fs::path dir = scratch();
  for (const char* name : {"a.json", "b.json"})
    ASSERT_EQ(runTool({"algebra-check", "--seed", "11", "--trials", "300", "--out", (dir / name).string()}), 0);
  EXPECT_EQ(slurp(dir / "a.json"), slurp(dir / "b.json"));

  for (const char* name : {"a.csv", "b.csv"})
    ASSERT_EQ(runTool({"dirac", "--kind", "torus", "--n", "5", "--task", "spectrum", "--csv", (dir / name).string(),
                       "--out", (dir / (std::string(name) + ".json")).string()}),
              0);
  EXPECT_EQ(slurp(dir / "a.csv"), slurp(dir / "b.csv"));
  EXPECT_EQ(slurp(dir / "a.csv.json"), slurp(dir / "b.csv.json"));
}

TEST(Cli, WallTimeOnlyWithTiming) {
  const fs::path dir = scratch();
  ASSERT_EQ(runTool({"algebra-check", "--trials", "50", "--out", (dir / "t.json").string(), "--timing"}), 0);
  EXPECT_TRUE(json::parse(slurp(dir / "t.json")).contains("wall_time_s"));
  ASSERT_EQ(runTool({"algebra-check", "--trials", "50", "--out", (dir / "n.json").string()}), 0);
  EXPECT_FALSE(json::parse(slurp(dir / "n.json")).contains("wall_time_s"));
}

TEST(Cli, MeshRoundTripThroughFile) {
  const fs::path mesh = scratch() / "ball.json";
  ASSERT_EQ(runTool({"mesh", "--kind", "ball", "--refine", "1", "--out", mesh.string()}), 0);
  ASSERT_TRUE(fs::exists(mesh));
  EXPECT_EQ(runTool({"boundary", "--mesh", mesh.string(), "--task", "index"}), 0);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(runTool({}), 2);
  EXPECT_EQ(runTool({"frobnicate"}), 2);
  EXPECT_EQ(runTool({"certify-torus", "--n", "eight"}), 2);
  EXPECT_EQ(runTool({"dirac", "--mesh", "/nonexistent/mesh.json"}), 2);
  EXPECT_EQ(runTool({"certify-torus", "--n", "3"}), 2); // InvalidResolution
  EXPECT_EQ(runTool({"dirac", "--kind", "torus", "--n", "5", "--bc", "nu_x", "--task", "kernel"}), 2);
  EXPECT_EQ(runTool({"algebra-check", "--gap-ratio", "0.5"}), 2); // not an option of this subcommand
  // a kernel threshold that leaves no clear gap is a module error, not a usage error
  EXPECT_EQ(runTool({"dirac", "--kind", "torus", "--n", "6", "--task", "kernel", "--abs-tol", "5.3"}), 1);
  EXPECT_EQ(runTool({"algebra-check", "--trials", "100"}), 0);
}
