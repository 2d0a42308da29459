#pragma once
// Structured check reports shared by the verification suites, the
// acceptance gate, and the command-line front end, plus their JSON form.

#include <cstdint>
#include <string>
#include <vector>

namespace dcone {

// One verified property. `rule` states how `pass` was decided:
//   "below" : value <= tolerance                    (reference unused)
//   "above" : value >= tolerance                    (reference unused)
//   "match" : |value - reference| <= tolerance
//   "flag"  : value != 0 required                   (tolerance unused)
struct CheckResult {
  std::string name;
  double value = 0.0;
  double reference = 0.0;
  double tolerance = 0.0;
  std::string rule = "below";
  bool pass = false;
};

CheckResult check_below(std::string name, double value, double tolerance);
CheckResult check_above(std::string name, double value, double bound);
CheckResult check_match(std::string name, double value, double reference,
                        double tolerance);
CheckResult check_flag(std::string name, bool ok);

struct Environment {
  double grid_l = 0.0;
  int grid_n = 0;
  std::uint64_t seed = 0;
  int threads = 0;
  std::string version;
};

struct CheckReport {
  std::string suite;
  Environment env;
  std::vector<CheckResult> checks;
  bool all_pass() const;
};

// JSON document with every numeric field printed at 17 significant digits.
// The timestamp sits in a single top-level field so byte comparison of two
// reports can exclude exactly one line; pass "" to omit the field.
std::string report_to_json(const CheckReport& r, const std::string& timestamp);

}  // namespace dcone
