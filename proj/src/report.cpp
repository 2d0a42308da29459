#include "dcone/report.hpp"

#include <cmath>
#include <cstdio>
#include <utility>

#include <nlohmann/json.hpp>

#include "dcone/grid.hpp"
#include "dcone/version.hpp"

namespace dcone {

CheckResult check_below(std::string name, double value, double tolerance) {
  CheckResult c;
  c.name = std::move(name);
  c.value = value;
  c.tolerance = tolerance;
  c.rule = "below";
  c.pass = std::isfinite(value) && value <= tolerance;
  return c;
}

CheckResult check_above(std::string name, double value, double bound) {
  CheckResult c;
  c.name = std::move(name);
  c.value = value;
  c.tolerance = bound;
  c.rule = "above";
  c.pass = std::isfinite(value) && value >= bound;
  return c;
}

CheckResult check_match(std::string name, double value, double reference,
                        double tolerance) {
  CheckResult c;
  c.name = std::move(name);
  c.value = value;
  c.reference = reference;
  c.tolerance = tolerance;
  c.rule = "match";
  c.pass = std::isfinite(value) && std::abs(value - reference) <= tolerance;
  return c;
}

CheckResult check_flag(std::string name, bool ok) {
  CheckResult c;
  c.name = std::move(name);
  c.value = ok ? 1.0 : 0.0;
  c.rule = "flag";
  c.pass = ok;
  return c;
}

bool CheckReport::all_pass() const {
  for (const CheckResult& c : checks)
    if (!c.pass) return false;
  return true;
}

namespace {

// nlohmann serializes doubles with shortest-roundtrip digits; the report
// contract wants a fixed 17-significant-digit form, so numbers go in as
// preformatted strings under their own key.
std::string num17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string report_to_json(const CheckReport& r, const std::string& timestamp) {
  nlohmann::ordered_json j;
  j["suite"] = r.suite;
  if (!timestamp.empty()) j["timestamp"] = timestamp;
  j["environment"] = {{"grid_l", num17(r.env.grid_l)},
                      {"grid_n", r.env.grid_n},
                      {"seed", r.env.seed},
                      {"threads", r.env.threads},
                      {"version", r.env.version.empty() ? kVersion : r.env.version}};
  j["all_pass"] = r.all_pass();
  nlohmann::ordered_json checks = nlohmann::ordered_json::array();
  for (const CheckResult& c : r.checks) {
    nlohmann::ordered_json jc;
    jc["name"] = c.name;
    jc["value"] = num17(c.value);
    jc["reference"] = num17(c.reference);
    jc["tolerance"] = num17(c.tolerance);
    jc["rule"] = c.rule;
    jc["pass"] = c.pass;
    checks.push_back(jc);
  }
  j["checks"] = checks;
  return j.dump(2) + "\n";
}

}  // namespace dcone
