#pragma once

#include "ups/verify/checks.hpp"

namespace ups::verify {

struct RunSpec {
  FieldDescriptor field = FieldDescriptor::real();
  int n = 1;
  std::vector<std::string> checks;  // empty: every applicable check
};

struct SuiteConfig {
  std::vector<RunSpec> runs;
  CheckOptions options;  // field and n are taken from each run
};

/// Full battery at n = 1 over R and over Q_2, Q_3.
SuiteConfig default_suite_config();

/// Throws ConfigError listing every schema problem.
SuiteConfig parse_suite_config(const json& j);

struct SuiteReport {
  std::vector<CheckReport> checks;  // ordered by check name, field, n
  bool pass = false;
  double runtime_seconds = 0.0;
  std::uint64_t seed = 0;
};

/// Runs every selected check, at most `threads` at a time (0: UPS_THREADS
/// or the hardware count). A check that throws is reported as failed.
SuiteReport run_suite(const SuiteConfig& cfg, unsigned threads = 0);

json to_json(const SuiteReport& r, bool include_timing = true);

/// JSON-driven evaluation: op is "fourier", "intertwine" or "inner-product".
json compute(const std::string& op, const json& spec);

}  // namespace ups::verify
