#pragma once

// Machine-readable run reports: named checks with computed and expected values,
// the provenance of each expectation, and pass/fail.

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

namespace g2cal {

/// Where an expected value comes from:
///  reported   - a result claimed by the theory being checked,
///  derived    - computed independently (closed form, oracle),
///  elementary - follows from definitions or arithmetic.
enum class Provenance { Reported, Derived, Elementary };
const char* provenanceName(Provenance p);

struct Check {
  std::string name;
  nlohmann::json computed;
  nlohmann::json expected;
  Provenance provenance = Provenance::Derived;
  std::string criterion; // e.g. "<= 1e-10", "== 4"
  bool pass = false;
  std::string note;
};

class Report {
public:
  explicit Report(std::string command) : command_(std::move(command)) {}

  Check& add(Check check);
  /// computed <= tolerance.
  Check& atMost(const std::string& name, double computed, double tolerance, Provenance p);
  /// computed > bound.
  Check& above(const std::string& name, double computed, double bound, Provenance p);
  /// computed == expected.
  Check& equals(const std::string& name, long long computed, long long expected, Provenance p);
  Check& equals(const std::string& name, const std::string& computed, const std::string& expected, Provenance p);
  /// |computed - expected| <= tolerance.
  Check& near(const std::string& name, double computed, double expected, double tolerance, Provenance p);
  Check& holds(const std::string& name, bool value, Provenance p, const std::string& note = {});

  /// Free-form results (arrays, per-node data).
  nlohmann::json& data() { return data_; }
  void setConfig(nlohmann::json config) { config_ = std::move(config); }
  void setWallTime(double seconds) { wallTime_ = seconds; }

  bool passed() const;
  const std::vector<Check>& checks() const { return checks_; }
  const std::string& command() const { return command_; }
  /// Wall time is included only when it was set.
  nlohmann::json toJson() const;
  /// One line per check.
  std::string summary() const;

private:
  std::string command_;
  std::vector<Check> checks_;
  nlohmann::json data_ = nlohmann::json::object();
  nlohmann::json config_ = nlohmann::json::object();
  double wallTime_ = -1.0;
};

/// Pretty-printed JSON written atomically. Throws IoError.
void writeReport(const Report& report, const std::string& path);
/// One value per line, full precision. Throws IoError.
void writeSpectrumCsv(const std::vector<double>& values, const std::string& path);

} // namespace g2cal
