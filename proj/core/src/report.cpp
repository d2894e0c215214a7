#include "g2cal/report.hpp"

#include "g2cal/mesh_io.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

namespace g2cal {

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(3) << std::scientific << x;
  return os.str();
}

// NaN and infinities are not valid JSON numbers.
nlohmann::json number(double x) {
  if (std::isfinite(x)) return x;
  return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
}

} // namespace

const char* provenanceName(Provenance p) {
  switch (p) {
  case Provenance::Reported: return "reported";
  case Provenance::Derived: return "derived";
  case Provenance::Elementary: return "elementary";
  }
  return "?";
}

Check& Report::add(Check check) {
  checks_.push_back(std::move(check));
  return checks_.back();
}

Check& Report::atMost(const std::string& name, double computed, double tolerance, Provenance p) {
  return add({name, number(computed), number(tolerance), p, "<= " + fmt(tolerance), computed <= tolerance, {}});
}

Check& Report::above(const std::string& name, double computed, double bound, Provenance p) {
  return add({name, number(computed), number(bound), p, "> " + fmt(bound), computed > bound, {}});
}

Check& Report::equals(const std::string& name, long long computed, long long expected, Provenance p) {
  return add({name, computed, expected, p, "== " + std::to_string(expected), computed == expected, {}});
}

Check& Report::equals(const std::string& name, const std::string& computed, const std::string& expected,
                      Provenance p) {
  return add({name, computed, expected, p, "== " + expected, computed == expected, {}});
}

Check& Report::near(const std::string& name, double computed, double expected, double tolerance, Provenance p) {
  return add({name, number(computed), number(expected), p, "within " + fmt(tolerance),
              std::abs(computed - expected) <= tolerance, {}});
}

Check& Report::holds(const std::string& name, bool value, Provenance p, const std::string& note) {
  return add({name, value, true, p, "true", value, note});
}

bool Report::passed() const {
  for (const auto& c : checks_)
    if (!c.pass) return false;
  return true;
}

nlohmann::json Report::toJson() const {
  nlohmann::json j;
  j["command"] = command_;
  j["config"] = config_;
  j["pass"] = passed();
  j["checks"] = nlohmann::json::array();
  for (const auto& c : checks_) {
    nlohmann::json cj = {{"name", c.name},
                         {"computed", c.computed},
                         {"expected", c.expected},
                         {"provenance", provenanceName(c.provenance)},
                         {"criterion", c.criterion},
                         {"pass", c.pass}};
    if (!c.note.empty()) cj["note"] = c.note;
    j["checks"].push_back(cj);
  }
  j["results"] = data_;
  if (wallTime_ >= 0) j["wall_time_s"] = wallTime_;
  return j;
}

std::string Report::summary() const {
  std::ostringstream os;
  for (const auto& c : checks_) {
    os << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.computed.dump() << " (" << c.criterion << ", "
       << provenanceName(c.provenance) << ")";
    if (!c.note.empty()) os << " - " << c.note;
    os << '\n';
  }
  return os.str();
}

void writeReport(const Report& report, const std::string& path) {
  writeFileAtomic(path, report.toJson().dump(2) + "\n");
}

void writeSpectrumCsv(const std::vector<double>& values, const std::string& path) {
  std::ostringstream os;
  os << std::setprecision(17);
  for (double v : values) os << v << '\n';
  writeFileAtomic(path, os.str());
}

} // namespace g2cal
