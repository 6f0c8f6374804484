#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "qfp/forms.hpp"

namespace qfp {

// Named pencils: "p5", "fi", "toy2", "qpair1:L".
Pencil standard_pencil(const std::string& name);

enum class Profile { Full, Quick };

struct CheckResult {
  std::string name;
  bool pass = false;
  double seconds = 0;
  double limit = 0;  // seconds; 0 = none
  std::string detail;
};

// Acceptance criteria 1..12.
CheckResult run_criterion(int id, Profile profile = Profile::Full);
const char* criterion_name(int id);

// Invariant suites behind `qfp verify`.
std::vector<std::string> suite_names();
CheckResult run_suite(const std::string& name, const std::string& baseline_path);

std::string default_baseline_path();
nlohmann::json compute_baselines();

}  // namespace qfp
