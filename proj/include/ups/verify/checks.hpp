#pragma once

// The verification battery. Each check samples its inputs from a seeded
// engine, evaluates both sides of one identity independently and records
// every comparison.

#include "ups/hilbert_module.hpp"
#include "ups/verify/json_io.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ups::verify {

struct CheckOptions {
  FieldDescriptor field = FieldDescriptor::real();
  int n = 1;
  std::uint64_t seed = 20240601;
  std::optional<double> tol;  // overrides the check's default tolerance
  int samples = 0;            // 0: the check's default count
  long k_max = 16;
  double quad_tol = 1e-10;
  CutoffSchedule schedule = CutoffSchedule::quadratic;
  int truncation_m = 20;

  // Negative controls. Each defaults to the correct value.
  Rational gamma_shift = Rational(0);  // added to the exponent of gamma_n
  Rational fiber_factor = Rational(1);  // scales the fiber measure
  int eq_sign = 1;                      // sign of the L-equivariance exponent
};

struct SampleRecord {
  std::string label;
  json input;
  json lhs;
  json rhs;
  std::optional<double> abs_err;
  std::optional<bool> exact_equal;
  bool pass = false;
  json extra;  // certificates, oracles, quadrature errors
};

struct CheckReport {
  std::string check;
  FieldDescriptor field = FieldDescriptor::real();
  int n = 1;
  double tolerance = 0.0;
  std::vector<SampleRecord> samples;
  bool pass = false;
  json summary = json::object();
  std::string note;
  double runtime_seconds = 0.0;
};

const std::vector<std::string>& check_names();
bool is_check(const std::string& name);

/// Whether the check is defined for the field and n; `why` says otherwise.
bool applicable(const std::string& name, const FieldDescriptor& fd, int n, std::string* why = nullptr);

/// Throws ConfigError for unknown names or inapplicable combinations.
CheckReport run_check(const std::string& name, const CheckOptions& opt);

/// The implemented formula, tolerances and defaults; unknown names get the
/// list of available checks.
std::string explain_check(const std::string& name);

json to_json(const SampleRecord& r);
/// `include_timing` false drops runtimes, for byte-stable output.
json to_json(const CheckReport& r, bool include_timing = true);

}  // namespace ups::verify
