#include "ups/verify/suite.hpp"

#include "support/helpers.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace ups;
using namespace ups::verify;
using ups::testing::q;

namespace {

CheckOptions opts(FieldDescriptor fd, int n = 1) {
  CheckOptions o;
  o.field = fd;
  o.n = n;
  return o;
}

}  // namespace

TEST(Explain, KnownAndUnknown) {
  for (const auto& name : check_names()) {
    const std::string text = explain_check(name);
    EXPECT_EQ(text.rfind(name + ":", 0), 0u) << name;
    EXPECT_NE(text.find("olerance"), std::string::npos) << name;
  }
  EXPECT_NE(explain_check("slice").find("T(f)(y, a) chi(Tr a)"), std::string::npos);
  EXPECT_NE(explain_check("estimate").find("min(|a_i|, |a_i|^{-1})^{(n+1)/2}"), std::string::npos);
  const std::string unknown = explain_check("no-such-check");
  EXPECT_NE(unknown.find("unknown check"), std::string::npos);
  for (const auto& name : check_names()) EXPECT_NE(unknown.find(name), std::string::npos);
}

TEST(Checks, ApplicabilityAndErrors) {
  EXPECT_FALSE(applicable("composition", FieldDescriptor::real(), 1));
  EXPECT_FALSE(applicable("composition", FieldDescriptor::padic(2), 2));
  EXPECT_FALSE(applicable("truncation", FieldDescriptor::padic(2), 1));
  EXPECT_TRUE(applicable("truncation", FieldDescriptor::real(), 1));
  EXPECT_THROW(run_check("composition", opts(FieldDescriptor::real())), ConfigError);
  EXPECT_THROW(run_check("bogus", opts(FieldDescriptor::real())), ConfigError);
}

TEST(Checks, RecordShape) {
  CheckOptions o = opts(FieldDescriptor::real());
  o.samples = 5;
  const json r = to_json(run_check("gamma-kernel", o));
  EXPECT_EQ(r["check"], "gamma-kernel");
  EXPECT_EQ(r["field"], "R");
  ASSERT_EQ(r["samples"].size(), 5u);
  for (const json& s : r["samples"]) {
    EXPECT_TRUE(s.contains("input") && s.contains("lhs") && s.contains("rhs"));
    EXPECT_TRUE(s.contains("abs_err"));
    EXPECT_FALSE(s.contains("exact_equal"));
  }
  o.field = FieldDescriptor::padic(3);
  const json e = to_json(run_check("gamma-kernel", o));
  for (const json& s : e["samples"]) {
    EXPECT_TRUE(s["exact_equal"].get<bool>());
    EXPECT_FALSE(s.contains("abs_err"));
  }
}

TEST(Checks, DeterministicPadicReports) {
  for (const std::string c : {"slice", "composition", "unitarity", "fiber"}) {
    CheckOptions o = opts(FieldDescriptor::padic(2));
    o.samples = 4;
    const std::string a = to_json(run_check(c, o), false).dump();
    const std::string b = to_json(run_check(c, o), false).dump();
    EXPECT_EQ(a, b) << c;
    o.seed += 1;
    if (c != "composition") EXPECT_NE(a, to_json(run_check(c, o), false).dump()) << c;
  }
}

TEST(Suite, ThreadCountDoesNotChangeReport) {
  SuiteConfig cfg;
  cfg.options.samples = 3;
  cfg.runs.push_back({FieldDescriptor::padic(3), 1, {"gamma-kernel", "slice", "equivariance"}});
  cfg.runs.push_back({FieldDescriptor::padic(2), 1, {"unitarity"}});
  const std::string one = to_json(run_suite(cfg, 1), false).dump();
  const std::string four = to_json(run_suite(cfg, 4), false).dump();
  EXPECT_EQ(one, four);
  const SuiteReport r = run_suite(cfg, 2);
  ASSERT_EQ(r.checks.size(), 4u);
  EXPECT_EQ(r.checks[0].check, "equivariance");
  EXPECT_EQ(r.checks.back().check, "unitarity");
  EXPECT_TRUE(r.pass);
}

TEST(Suite, DefaultBatteryPasses) {
  const SuiteConfig cfg = parse_suite_config(json::object());
  ASSERT_EQ(cfg.runs.size(), 3u);
  const SuiteReport r = run_suite(cfg);
  EXPECT_TRUE(r.pass);
  // 8 checks over R (no composition), 8 over each Q_p (no truncation)
  EXPECT_EQ(r.checks.size(), 24u);
}

TEST(Suite, ConfigErrorsAreListed) {
  const json bad = {{"bogus", 1}, {"k_max", 0}, {"runs", {{{"field", "x"}}, {{"field", "r"}, {"checks", {"composition"}}}}},
                    {"negative_controls", {{"eq_sign", 3}}}};
  try {
    parse_suite_config(bad);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.problems().size(), 5u);
  }
  const SuiteConfig ok = parse_suite_config({{"seed", 7}, {"runs", {{{"field", "qp"}, {"p", 5}, {"n", 2}}}},
                                             {"negative_controls", {{"gamma_shift", "1/2"}}}});
  EXPECT_EQ(ok.options.seed, 7u);
  ASSERT_EQ(ok.runs.size(), 1u);
  EXPECT_EQ(ok.runs[0].field, FieldDescriptor::padic(5));
  EXPECT_EQ(ok.options.gamma_shift, Rational(1, 2));
}

TEST(NegativeControls, GammaExponent) {
  for (const FieldDescriptor fd : {FieldDescriptor::real(), FieldDescriptor::complex(), FieldDescriptor::padic(2), FieldDescriptor::padic(3)}) {
    for (const Rational s : {Rational(1, 2), Rational(-1, 2)}) {
      CheckOptions o = opts(fd);
      o.samples = 50;
      o.gamma_shift = s;
      const CheckReport r = run_check("gamma-kernel", o);
      EXPECT_FALSE(r.pass) << fd.name();
      EXPECT_TRUE(r.summary.contains("first_failure"));
    }
  }
}

TEST(NegativeControls, FiberMeasure) {
  for (long p : {2L, 3L}) {
    CheckOptions o = opts(FieldDescriptor::padic(p));
    o.samples = 5;
    o.fiber_factor = Rational(p);
    EXPECT_FALSE(run_check("slice", o).pass);
    EXPECT_FALSE(run_check("composition", o).pass);
    o.fiber_factor = Rational(1);
    EXPECT_TRUE(run_check("slice", o).pass);
    EXPECT_TRUE(run_check("composition", o).pass);
  }
  CheckOptions o = opts(FieldDescriptor::real());
  o.samples = 3;
  o.fiber_factor = Rational(2);
  EXPECT_FALSE(run_check("slice", o).pass);
}

TEST(NegativeControls, TranslationSign) {
  for (const FieldDescriptor fd : {FieldDescriptor::real(), FieldDescriptor::complex(), FieldDescriptor::padic(3)}) {
    CheckOptions o = opts(fd);
    o.eq_sign = -1;
    EXPECT_FALSE(run_check("equivariance", o).pass) << fd.name();
  }
}

TEST(JsonIO, RoundTrips) {
  Rng rng(3);
  const MatQ m = q({{Rational(1, 3), Rational(-2)}, {Rational(0), Rational(5, 7)}});
  EXPECT_EQ(matrix_from_json<Rational>(to_json(m)), m);
  const MatC c = random_complex_matrix(rng, 2, 3);
  EXPECT_EQ(matrix_from_json<Complex>(to_json(c)), c);
  const CyclotomicValue v = padic_character(Rational(5, 9), 3) * Rational(2, 5) + CyclotomicValue::rational(3, 1);
  EXPECT_EQ(cyclotomic_from_json(to_json(v), 3), v);

  const SBFunction f = random_sb(rng, 3, x_shape(1));
  const SBFunction g = function_from_json<Rational>(to_json(f), FieldDescriptor::padic(3), x_shape(1));
  for (int i = 0; i < 20; ++i) {
    const MatQ x = random_padic_matrix(rng, 2, 1, 3, -1, 1);
    EXPECT_EQ(f.evaluate(x), g.evaluate(x));
  }
  const GaussianForm h = random_gaussian(rng, FieldDescriptor::complex(), x_shape(1));
  const GaussianForm k = function_from_json<Complex>(to_json(h), FieldDescriptor::complex(), x_shape(1));
  const MatC x = random_complex_matrix(rng, 2, 1);
  EXPECT_NEAR(std::abs(h.evaluate(x) - k.evaluate(x)), 0.0, 1e-14);
}

TEST(JsonIO, MalformedInputs) {
  EXPECT_THROW(rational_from_json(json(1.5)), ConfigError);
  EXPECT_THROW(rational_from_json(json("1/0")), ConfigError);
  EXPECT_THROW(matrix_from_json<double>(json::parse("[[1,2],[3]]")), ConfigError);
  EXPECT_THROW(parse_field("z", 2), ConfigError);
  EXPECT_THROW(parse_field("qp", 4), ConfigError);
  EXPECT_THROW(function_from_json<double>(json{{"type", "ball"}}, FieldDescriptor::real(), x_shape(1)), ConfigError);
}

TEST(Compute, Examples) {
  const json fr = compute("fourier", {{"field", "r"}, {"n", 1}, {"function", {{"type", "standard"}}}, {"points", {json::parse("[[1,0]]")}}});
  EXPECT_NEAR(fr["values"][0]["value"]["re"].get<double>(), std::exp(-std::numbers::pi), 1e-15);

  const json ip = compute("inner-product", {{"field", "qp"}, {"p", 3}, {"n", 1}, {"function", {{"type", "ball"}}},
                                            {"points", {json::parse("[[\"3\"]]"), json::parse("[[\"1/9\"]]")}}});
  EXPECT_EQ(ip["values"][0]["value"]["coeffs"][0], "1/3");
  EXPECT_EQ(ip["values"][1]["value"]["coeffs"][0], "1/9");

  const json in = compute("intertwine", {{"field", "qp"}, {"p", 2}, {"n", 1}, {"function", {{"type", "ball"}}},
                                         {"points", {json::parse("[[\"1\", \"0\"]]")}}});
  EXPECT_EQ(in["values"][0]["value"]["text"], "1/1");

  EXPECT_THROW(compute("fourier", {{"field", "r"}, {"function", {{"type", "standard"}}}}), ConfigError);
  EXPECT_THROW(compute("intertwine", {{"field", "r"}, {"function", {{"type", "standard"}}}, {"points", {json::parse("[[0,0]]")}}}),
               ConfigError);
  EXPECT_THROW(compute("transpose", {{"field", "r"}, {"function", {{"type", "standard"}}}, {"points", {json::parse("[[1,0]]")}}}),
               ConfigError);
}
