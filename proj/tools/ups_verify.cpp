#include "ups/verify/suite.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace ups;
using namespace ups::verify;

constexpr int kPass = 0, kFail = 1, kConfig = 2;

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot open '" + path + "'"});
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError({path + ": " + e.what()});
  }
}

void emit(const json& j, const std::string& out) {
  if (out.empty()) {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream f(out);
  if (!f) throw ConfigError({"cannot write '" + out + "'"});
  f << j.dump(2) << '\n';
}

void print_summary(const SuiteReport& r, std::ostream& os) {
  for (const CheckReport& c : r.checks) {
    os << (c.pass ? "PASS " : "FAIL ") << c.check << " [" << c.field.name() << ", n=" << c.n << "] "
       << c.samples.size() << " samples";
    if (!c.note.empty()) os << " (" << c.note << ")";
    os << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical and exact verification of the Fourier intertwiner identities"};
  app.require_subcommand(1);

  // verify
  auto* verify = app.add_subcommand("verify", "Run one check, a comma-separated list, or all");
  std::string which, field = "r", out;
  long p = 2;
  int n = 1;
  CheckOptions opt;
  double tol = 0.0;
  std::string gamma_shift = "0", fiber_factor = "1", schedule = "quadratic";
  bool no_timing = false;
  verify->add_option("check", which, "Check name(s) or 'all'")->required();
  verify->add_option("--field", field, "r, c or qp")->capture_default_str();
  verify->add_option("--p", p, "Prime for --field qp")->capture_default_str();
  verify->add_option("--n", n, "Matrix size n")->capture_default_str();
  verify->add_option("--seed", opt.seed, "RNG seed")->capture_default_str();
  verify->add_option("--tol", tol, "Override the check tolerance");
  verify->add_option("--samples", opt.samples, "Override the sample count");
  verify->add_option("--k-max", opt.k_max, "Shell radius bound for composition")->capture_default_str();
  verify->add_option("--quad-tol", opt.quad_tol, "Relative quadrature tolerance")->capture_default_str();
  verify->add_option("--m-max", opt.truncation_m, "Last truncation index")->capture_default_str();
  verify->add_option("--schedule", schedule, "Cutoff schedule: quadratic or linear")->capture_default_str();
  verify->add_option("--gamma-shift", gamma_shift, "Negative control: shift of the gamma exponent");
  verify->add_option("--fiber-factor", fiber_factor, "Negative control: fiber measure factor");
  verify->add_option("--eq-sign", opt.eq_sign, "Negative control: sign of the translation exponent")->check(CLI::IsMember({-1, 1}));
  verify->add_option("--out", out, "Write the JSON report here (default stdout)");
  verify->add_flag("--no-timing", no_timing, "Omit runtimes from the report");

  // suite
  auto* suite = app.add_subcommand("suite", "Run a configured battery (default: n = 1 over R, Q_2, Q_3)");
  std::string config, suite_out;
  unsigned threads = 0;
  bool suite_no_timing = false;
  suite->add_option("--config", config, "JSON suite configuration");
  suite->add_option("--out", suite_out, "Write the JSON report here (default stdout)");
  suite->add_option("--threads", threads, "Concurrent checks (default UPS_THREADS or hardware)");
  suite->add_flag("--no-timing", suite_no_timing, "Omit runtimes from the report");

  // compute
  auto* comp = app.add_subcommand("compute", "Evaluate fourier, intertwine or inner-product from a JSON spec");
  std::string op, input, comp_out;
  comp->add_option("op", op, "fourier | intertwine | inner-product")->required()->check(CLI::IsMember({"fourier", "intertwine", "inner-product"}));
  comp->add_option("--input", input, "JSON input spec")->required();
  comp->add_option("--out", comp_out, "Write the result here (default stdout)");

  // explain
  auto* expl = app.add_subcommand("explain", "Describe a check");
  std::string topic;
  expl->add_option("check", topic, "Check name (omit to list all)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kConfig;
  }

  try {
    if (*verify) {
      opt.field = parse_field(field, p);
      opt.n = n;
      if (verify->count("--tol")) {
        if (tol <= 0) throw ConfigError({"--tol must be positive"});
        opt.tol = tol;
      }
      opt.gamma_shift = rational_from_json(gamma_shift);
      opt.fiber_factor = rational_from_json(fiber_factor);
      if (opt.fiber_factor <= 0) throw ConfigError({"--fiber-factor must be positive"});
      if (schedule == "quadratic") opt.schedule = CutoffSchedule::quadratic;
      else if (schedule == "linear") opt.schedule = CutoffSchedule::linear;
      else throw ConfigError({"--schedule must be quadratic or linear"});

      SuiteConfig cfg;
      cfg.options = opt;
      RunSpec run{opt.field, n, {}};
      if (which != "all") {
        std::vector<std::string> problems;
        for (const std::string& c : split(which)) {
          std::string why;
          if (!applicable(c, opt.field, n, &why)) problems.push_back(why);
          run.checks.push_back(c);
        }
        if (!problems.empty()) throw ConfigError(problems);
      }
      cfg.runs.push_back(run);
      const SuiteReport rep = run_suite(cfg);
      emit(to_json(rep, !no_timing), out);
      print_summary(rep, out.empty() ? std::cerr : std::cout);
      return rep.pass ? kPass : kFail;
    }
    if (*suite) {
      const SuiteConfig cfg = config.empty() ? default_suite_config() : parse_suite_config(read_json(config));
      const SuiteReport rep = run_suite(cfg, threads);
      emit(to_json(rep, !suite_no_timing), suite_out);
      print_summary(rep, suite_out.empty() ? std::cerr : std::cout);
      return rep.pass ? kPass : kFail;
    }
    if (*comp) {
      emit(compute(op, read_json(input)), comp_out);
      return kPass;
    }
    if (*expl) {
      if (topic.empty()) {
        for (const auto& c : check_names()) std::cout << explain_check(c) << '\n';
        return kPass;
      }
      std::cout << explain_check(topic);
      return is_check(topic) ? kPass : kConfig;
    }
  } catch (const ConfigError& e) {
    std::cerr << "configuration error:\n";
    for (const auto& pr : e.problems()) std::cerr << "  " << pr << '\n';
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfig;
  }
  return kConfig;
}
