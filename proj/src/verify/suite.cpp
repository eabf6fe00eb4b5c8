#include "ups/verify/suite.hpp"

#include "ups/intertwine.hpp"
#include "ups/quadrature.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <chrono>
#include <future>
#include <set>

namespace ups::verify {

namespace {

const std::set<std::string> kTopKeys = {"seed", "runs", "tolerances", "k_max", "samples", "truncation", "negative_controls"};

template <class T>
void read(const json& j, const char* key, T& out, std::vector<std::string>& problems,
          bool (json::*is)() const noexcept, const char* type) {
  if (!j.contains(key)) return;
  if (!(j[key].*is)()) {
    problems.push_back(std::string("'") + key + "' must be " + type);
    return;
  }
  out = j[key].get<T>();
}

CheckReport failed_report(const std::string& check, const RunSpec& run, const std::string& why) {
  CheckReport r;
  r.check = check;
  r.field = run.field;
  r.n = run.n;
  r.pass = false;
  r.note = "error: " + why;
  return r;
}

}  // namespace

SuiteConfig default_suite_config() {
  SuiteConfig cfg;
  cfg.runs.push_back({FieldDescriptor::real(), 1, {}});
  cfg.runs.push_back({FieldDescriptor::padic(2), 1, {}});
  cfg.runs.push_back({FieldDescriptor::padic(3), 1, {}});
  return cfg;
}

SuiteConfig parse_suite_config(const json& j) {
  std::vector<std::string> problems;
  if (!j.is_object()) throw ConfigError({"config must be a JSON object"});
  SuiteConfig cfg = default_suite_config();
  CheckOptions& o = cfg.options;
  for (const auto& [k, v] : j.items()) {
    if (!kTopKeys.count(k)) problems.push_back("unknown key '" + k + "'");
  }
  if (j.contains("seed")) {
    if (j["seed"].is_number_unsigned() || j["seed"].is_number_integer()) o.seed = j["seed"].get<std::uint64_t>();
    else problems.push_back("'seed' must be a nonnegative integer");
  }
  read(j, "k_max", o.k_max, problems, &json::is_number_integer, "an integer");
  read(j, "samples", o.samples, problems, &json::is_number_integer, "an integer");
  if (o.k_max < 1) problems.push_back("'k_max' must be positive");
  if (o.samples < 0) problems.push_back("'samples' must be nonnegative");
  if (j.contains("tolerances")) {
    const json& t = j["tolerances"];
    if (!t.is_object()) {
      problems.push_back("'tolerances' must be an object");
    } else {
      if (t.contains("quad")) {
        if (!t["quad"].is_number() || t["quad"].get<double>() <= 0) problems.push_back("'tolerances.quad' must be positive");
        else o.quad_tol = t["quad"].get<double>();
      }
      if (t.contains("check") && !t["check"].is_null()) {
        if (!t["check"].is_number() || t["check"].get<double>() <= 0) problems.push_back("'tolerances.check' must be positive");
        else o.tol = t["check"].get<double>();
      }
    }
  }
  if (j.contains("truncation")) {
    const json& t = j["truncation"];
    read(t, "m_max", o.truncation_m, problems, &json::is_number_integer, "an integer");
    if (t.contains("schedule")) {
      const std::string s = t["schedule"].is_string() ? t["schedule"].get<std::string>() : "";
      if (s == "quadratic") o.schedule = CutoffSchedule::quadratic;
      else if (s == "linear") o.schedule = CutoffSchedule::linear;
      else problems.push_back("'truncation.schedule' must be \"quadratic\" or \"linear\"");
    }
  }
  if (j.contains("negative_controls")) {
    const json& nc = j["negative_controls"];
    try {
      if (nc.contains("gamma_shift")) o.gamma_shift = rational_from_json(nc["gamma_shift"]);
      if (nc.contains("fiber_factor")) o.fiber_factor = rational_from_json(nc["fiber_factor"]);
    } catch (const ConfigError& e) {
      problems.insert(problems.end(), e.problems().begin(), e.problems().end());
    }
    if (nc.contains("eq_sign")) {
      if (!nc["eq_sign"].is_number_integer() || std::abs(nc["eq_sign"].get<int>()) != 1) problems.push_back("'eq_sign' must be 1 or -1");
      else o.eq_sign = nc["eq_sign"].get<int>();
    }
    if (o.fiber_factor <= 0) problems.push_back("'fiber_factor' must be positive");
  }
  if (j.contains("runs")) {
    cfg.runs.clear();
    if (!j["runs"].is_array()) problems.push_back("'runs' must be an array");
    else {
      for (std::size_t i = 0; i < j["runs"].size(); ++i) {
        const json& r = j["runs"][i];
        const std::string where = "runs[" + std::to_string(i) + "]";
        if (!r.is_object() || !r.contains("field") || !r["field"].is_string()) {
          problems.push_back(where + " needs a string 'field'");
          continue;
        }
        RunSpec run;
        try {
          run.field = parse_field(r["field"].get<std::string>(), r.value("p", 2L));
        } catch (const ConfigError& e) {
          problems.push_back(where + ": " + e.what());
          continue;
        }
        if (r.contains("n") && !r["n"].is_number_integer()) problems.push_back(where + ".n must be an integer");
        run.n = r.value("n", 1);
        if (run.n < 1 || run.n > 4) problems.push_back(where + ".n must be in 1..4");
        if (r.contains("checks")) {
          for (const json& c : r["checks"]) {
            const std::string name = c.is_string() ? c.get<std::string>() : c.dump();
            std::string why;
            if (!applicable(name, run.field, run.n, &why)) problems.push_back(where + ": " + why);
            run.checks.push_back(name);
          }
        }
        cfg.runs.push_back(std::move(run));
      }
    }
  }
  if (!problems.empty()) throw ConfigError(problems);
  return cfg;
}

SuiteReport run_suite(const SuiteConfig& cfg, unsigned threads) {
  const auto start = std::chrono::steady_clock::now();
  if (threads == 0) threads = static_cast<unsigned>(quadrature_threads());
  threads = std::max(1u, threads);

  struct Task {
    std::string check;
    const RunSpec* run;
  };
  std::vector<Task> tasks;
  for (const RunSpec& run : cfg.runs) {
    const std::vector<std::string>& names = run.checks.empty() ? check_names() : run.checks;
    for (const std::string& c : names) {
      if (run.checks.empty() && !applicable(c, run.field, run.n)) continue;
      tasks.push_back({c, &run});
    }
  }

  SuiteReport rep;
  rep.seed = cfg.options.seed;
  rep.checks.resize(tasks.size());
  std::vector<std::future<void>> running;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (running.size() >= threads) {
      running.front().get();
      running.erase(running.begin());
    }
    running.push_back(std::async(std::launch::async, [&, i] {
      CheckOptions o = cfg.options;
      o.field = tasks[i].run->field;
      o.n = tasks[i].run->n;
      try {
        rep.checks[i] = run_check(tasks[i].check, o);
      } catch (const std::exception& e) {
        rep.checks[i] = failed_report(tasks[i].check, *tasks[i].run, e.what());
      }
    }));
  }
  for (auto& f : running) f.get();

  std::stable_sort(rep.checks.begin(), rep.checks.end(), [](const CheckReport& a, const CheckReport& b) {
    if (a.check != b.check) return a.check < b.check;
    if (a.field.name() != b.field.name()) return a.field.name() < b.field.name();
    return a.n < b.n;
  });
  rep.pass = !rep.checks.empty() &&
             std::all_of(rep.checks.begin(), rep.checks.end(), [](const CheckReport& c) { return c.pass; });
  rep.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

json to_json(const SuiteReport& r, bool include_timing) {
  json checks = json::array();
  json overview = json::array();
  for (const CheckReport& c : r.checks) {
    checks.push_back(to_json(c, include_timing));
    overview.push_back({{"check", c.check}, {"field", c.field.name()}, {"n", c.n}, {"pass", c.pass}});
  }
  json j = {{"pass", r.pass},
            {"seed", r.seed},
            {"versions",
             {{"ups", "0.1.0"},
              {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                            std::to_string(EIGEN_MINOR_VERSION)}}},
            {"overview", overview},
            {"checks", checks}};
  if (include_timing) j["runtime_seconds"] = r.runtime_seconds;
  return j;
}

}  // namespace ups::verify
