#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "orbitlab/action.hpp"
#include "orbitlab/check.hpp"

namespace orbitlab {

/// Run configuration for the verification driver. All fields optional in
/// config files; command-line flags override file values.
struct RunConfig {
  std::vector<std::string> action_ids;  // empty means every builtin action
  std::vector<std::string> suites;      // empty means every suite
  int trials = 500;
  std::uint64_t seed = 42;
  double fd_step = 1e-6;
  double tol_fd = 1e-6;
  double tol_analytic = 1e-9;
  std::string report_path;  // empty means $ORBITLAB_REPORT_DIR/report.json
};

struct SuiteResult {
  std::string action;
  std::string suite;
  std::vector<CheckResult> checks;
};

struct Report {
  RunConfig config;
  std::string rng_id;
  std::vector<SuiteResult> results;
  bool overall_pass = true;
  double wall_seconds = 0.0;  // console-only; kept out of the report file
                              // so identical configs serialize identically
};

/// Canonical suite order.
const std::vector<std::string>& all_suite_names();

/// Fills defaults (all actions, all suites, report path) and validates;
/// throws ConfigError on unknown ids or out-of-range values.
RunConfig normalize_config(RunConfig cfg);

/// Runs one suite against one action. Suites that do not apply (frames on
/// non-free actions) return an empty check list.
std::vector<CheckResult> run_action_suite(const std::string& suite, const ActionSpec& spec,
                                          const RunConfig& cfg);

/// Runs every selected (action, suite) pair, writes the JSON report to
/// config.report_path, and returns the in-memory report.
Report run_suite(const RunConfig& cfg);

}  // namespace orbitlab
