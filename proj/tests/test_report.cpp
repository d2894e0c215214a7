#include "g2cal/errors.hpp"
#include "g2cal/harness.hpp"
#include "g2cal/mesh_io.hpp"
#include "g2cal/report.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

using namespace g2cal;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

} // namespace

TEST(Report, ChecksAndProvenance) {
  Report r("demo");
  r.atMost("small", 1e-13, 1e-12, Provenance::Derived);
  r.above("gap", 10.0, 50.0, Provenance::Reported);
  r.equals("dim", 4, 4, Provenance::Elementary);
  r.near("value", 1.02, 1.0, 0.05, Provenance::Derived);
  EXPECT_FALSE(r.passed());
  const auto j = r.toJson();
  EXPECT_EQ(j["command"], "demo");
  ASSERT_EQ(j["checks"].size(), 4u);
  EXPECT_EQ(j["checks"][0]["provenance"], "derived");
  EXPECT_EQ(j["checks"][1]["provenance"], "reported");
  EXPECT_EQ(j["checks"][1]["pass"], false);
  EXPECT_EQ(j["checks"][2]["provenance"], "elementary");
  EXPECT_FALSE(j.contains("wall_time_s"));
  EXPECT_NE(r.summary().find("FAIL gap"), std::string::npos);
}

TEST(Report, NonFiniteValuesFail) {
  Report r("nan");
  r.atMost("x", std::numeric_limits<double>::quiet_NaN(), 1.0, Provenance::Derived);
  EXPECT_FALSE(r.passed());
  const std::string dumped = r.toJson().dump();
  EXPECT_NE(dumped.find("nan"), std::string::npos);
}

TEST(Report, AtomicWriteAndCsv) {
  const fs::path dir = fs::temp_directory_path() / "g2cal_report_test";
  fs::create_directories(dir);
  Report r("demo");
  r.equals("dim", 1, 1, Provenance::Derived);
  writeReport(r, (dir / "r.json").string());
  const auto back = nlohmann::json::parse(slurp(dir / "r.json"));
  EXPECT_EQ(back["pass"], true);
  for (const auto& e : fs::directory_iterator(dir)) EXPECT_NE(e.path().extension(), ".tmp");

  writeSpectrumCsv({0.1, -2.5, 1.0 / 3.0}, (dir / "s.csv").string());
  std::ifstream in(dir / "s.csv");
  double a, b, c;
  in >> a >> b >> c;
  EXPECT_EQ(c, 1.0 / 3.0); // full precision survives the round trip
  fs::remove_all(dir);

  try {
    writeReport(r, "/nonexistent/dir/r.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::IoError);
  }
}

TEST(RunConfig, Validation) {
  RunConfig c;
  c.command = "algebra-check";
  EXPECT_NO_THROW(c.validate());
  c.gapRatio = 0.5;
  EXPECT_THROW(c.validate(), Error);
  c = RunConfig{};
  c.command = "algebra-check";
  c.absTol = -1.0;
  EXPECT_THROW(c.validate(), Error);
  c = RunConfig{};
  c.command = "algebra-check";
  c.e = 2.0 * basisVector(4);
  EXPECT_THROW(c.validate(), Error);
  c = RunConfig{};
  c.command = "nope";
  try {
    run(c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ConfigError);
  }
}

TEST(Run, DeterministicUnderFixedSeed) {
  RunConfig c;
  c.command = "algebra-check";
  c.trials = 500;
  c.seed = 42;
  const std::string a = run(c).toJson().dump();
  const std::string b = run(c).toJson().dump();
  EXPECT_EQ(a, b);
  c.seed = 43;
  EXPECT_NE(run(c).toJson().dump(), a);
}

TEST(Run, MissingMeshIsIoError) {
  RunConfig c;
  c.command = "dirac";
  c.task = "kernel";
  c.meshPath = "/nonexistent/mesh.json";
  try {
    run(c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::IoError);
  }
}
