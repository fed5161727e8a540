#include "refineguard/report_json.hpp"

#include <fmt/format.h>

namespace refineguard {

namespace {

using nlohmann::json;

json args_object(const std::vector<std::pair<std::string, std::string>>& args) {
  json obj = json::object();
  for (const auto& [name, rendered] : args) obj[name] = rendered;
  return obj;
}

std::vector<std::pair<std::string, std::string>> args_from(const json& obj) {
  std::vector<std::pair<std::string, std::string>> out;
  for (auto it = obj.begin(); it != obj.end(); ++it)
    out.emplace_back(it.key(), it.value().get<std::string>());
  return out;
}

const char* kind_token(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::ArgumentType:
      return "ArgumentType";
    case ViolationKind::ReturnType:
      return "ReturnType";
    case ViolationKind::EntryCondition:
      return "EntryCondition";
    case ViolationKind::ExitCondition:
      return "ExitCondition";
  }
  return "ContractMalformed";
}

}  // namespace

json report_to_json(const TestReport& report, const std::string& suite) {
  json doc;
  doc["schema"] = 1;
  doc["suite"] = suite;
  doc["seed"] = report.plan.seed;
  doc["plan"] = {{"max_cases", report.plan.max_cases},
                 {"timeout_secs", report.plan.timeout_secs},
                 {"seed", report.plan.seed},
                 {"force_checking", report.plan.force_checking}};

  json functions = json::array();
  std::size_t passed = 0, failed = 0, timed_out = 0, untestable = 0;
  for (const FunctionTestResult& r : report.results) {
    json f;
    f["name"] = r.function;
    f["outcome"] = test_outcome_name(r.outcome);
    f["cases"] = r.cases_run;
    f["reservoir_capacity"] = r.reservoir_capacity;
    switch (r.outcome) {
      case TestOutcome::Passed:
        ++passed;
        break;
      case TestOutcome::Failed:
        ++failed;
        f["violation"] = r.violation_kind ? kind_token(*r.violation_kind) : "ContractMalformed";
        f["detail"] = r.failure;
        f["args"] = args_object(r.failing_args);
        if (!r.shrunk_args.empty()) f["shrunk_args"] = args_object(r.shrunk_args);
        if (r.hyperproperty) f["hyperproperty"] = true;
        break;
      case TestOutcome::TimedOut:
        ++timed_out;
        f["cases_timed_out"] = r.cases_timed_out;
        break;
      case TestOutcome::Untestable:
        ++untestable;
        f["reason"] = r.untestable_reason;
        f["detail"] = r.untestable_detail;
        break;
    }
    functions.push_back(std::move(f));
  }
  doc["functions"] = std::move(functions);
  doc["totals"] = {{"passed", passed},
                   {"failed", failed},
                   {"timed_out", timed_out},
                   {"untestable", untestable}};
  return doc;
}

TestReport report_from_json(const json& doc) {
  TestReport report;
  const json& plan = doc.at("plan");
  report.plan.max_cases = plan.at("max_cases").get<std::size_t>();
  report.plan.timeout_secs = plan.at("timeout_secs").get<double>();
  report.plan.seed = plan.at("seed").get<std::uint64_t>();
  report.plan.force_checking = plan.at("force_checking").get<bool>();

  for (const json& f : doc.at("functions")) {
    FunctionTestResult r;
    r.function = f.at("name").get<std::string>();
    r.cases_run = f.at("cases").get<std::size_t>();
    r.reservoir_capacity = f.at("reservoir_capacity").get<std::size_t>();
    std::string outcome = f.at("outcome").get<std::string>();
    if (outcome == "passed") {
      r.outcome = TestOutcome::Passed;
    } else if (outcome == "failed") {
      r.outcome = TestOutcome::Failed;
      std::string kind = f.at("violation").get<std::string>();
      for (ViolationKind k : {ViolationKind::ArgumentType, ViolationKind::ReturnType,
                              ViolationKind::EntryCondition, ViolationKind::ExitCondition})
        if (kind == kind_token(k)) r.violation_kind = k;
      r.failure = f.at("detail").get<std::string>();
      r.failing_args = args_from(f.at("args"));
      if (f.contains("shrunk_args")) r.shrunk_args = args_from(f.at("shrunk_args"));
      r.hyperproperty = f.value("hyperproperty", false);
    } else if (outcome == "timed-out") {
      r.outcome = TestOutcome::TimedOut;
      r.cases_timed_out = f.at("cases_timed_out").get<std::size_t>();
    } else {
      r.outcome = TestOutcome::Untestable;
      r.untestable_reason = f.at("reason").get<std::string>();
      r.untestable_detail = f.at("detail").get<std::string>();
    }
    report.results.push_back(std::move(r));
  }
  return report;
}

std::string report_to_text(const TestReport& report, const std::string& suite) {
  std::string out = fmt::format("suite {}: max_cases={} timeout={}s seed={}{}\n", suite,
                                report.plan.max_cases, report.plan.timeout_secs, report.plan.seed,
                                report.plan.force_checking ? "" : " (checking disabled)");
  std::size_t passed = 0, failed = 0, timed_out = 0, untestable = 0;
  std::vector<const FunctionTestResult*> skipped;
  for (const FunctionTestResult& r : report.results) {
    switch (r.outcome) {
      case TestOutcome::Passed:
        ++passed;
        out += fmt::format("  [pass] {:<24} cases={}\n", r.function, r.cases_run);
        break;
      case TestOutcome::Failed: {
        ++failed;
        std::string failure = r.failure;
        for (std::size_t at = failure.find('\n'); at != std::string::npos;
             at = failure.find('\n', at + 1))
          failure.replace(at, 1, "\n         ");
        out += fmt::format("  [FAIL] {:<24} {}\n", r.function, failure);
        auto one_line = [](const std::vector<std::pair<std::string, std::string>>& args) {
          std::string s;
          for (const auto& [k, v] : args) s += fmt::format("{}{}={}", s.empty() ? "" : ", ", k, v);
          return s;
        };
        out += fmt::format("         args: {}\n", one_line(r.failing_args));
        if (!r.shrunk_args.empty())
          out += fmt::format("         shrunk: {}\n", one_line(r.shrunk_args));
        break;
      }
      case TestOutcome::TimedOut:
        ++timed_out;
        out += fmt::format("  [time] {:<24} completed={} killed={}\n", r.function, r.cases_run,
                           r.cases_timed_out);
        break;
      case TestOutcome::Untestable:
        ++untestable;
        skipped.push_back(&r);
        out += fmt::format("  [skip] {:<24} untestable: {}\n", r.function, r.untestable_reason);
        break;
    }
  }
  if (!skipped.empty()) {
    out += "untestable functions (candidates for hand-written tests):\n";
    for (const FunctionTestResult* r : skipped)
      out += fmt::format("  {} — {}: {}\n", r->function, r->untestable_reason,
                         r->untestable_detail);
  }
  out += fmt::format("totals: {} passed, {} failed, {} timed-out, {} untestable\n", passed, failed,
                     timed_out, untestable);
  return out;
}

json bench_to_json(const BenchResult& result) {
  json doc;
  doc["schema"] = 1;
  doc["command"] = "bench";
  doc["seed"] = result.seed;
  doc["runs"] = result.runs;
  json workloads = json::array();
  for (const WorkloadTiming& w : result.workloads) {
    json arm_checked = {{"mean_secs", w.checked.mean}, {"sem_secs", w.checked.sem}};
    json arm_unchecked = {{"mean_secs", w.unchecked.mean}, {"sem_secs", w.unchecked.sem}};
    json arm_bare = {{"mean_secs", w.bare.mean}, {"sem_secs", w.bare.sem}};
    workloads.push_back({{"name", w.workload},
                         {"calls", w.calls},
                         {"checked", arm_checked},
                         {"unchecked", arm_unchecked},
                         {"bare", arm_bare},
                         {"slowdown", w.slowdown},
                         {"wrapper_overhead", w.wrapper_overhead}});
  }
  doc["workloads"] = std::move(workloads);
  return doc;
}

std::string bench_to_text(const BenchResult& result) {
  std::string out = fmt::format("benchmark: {} runs per arm, seed {}\n", result.runs, result.seed);
  for (const WorkloadTiming& w : result.workloads) {
    out += fmt::format("  {} ({} calls/run)\n", w.workload, w.calls);
    out += fmt::format("    checked:   {:.6f} ± {:.6f} s\n", w.checked.mean, w.checked.sem);
    out += fmt::format("    unchecked: {:.6f} ± {:.6f} s\n", w.unchecked.mean, w.unchecked.sem);
    out += fmt::format("    bare:      {:.6f} ± {:.6f} s\n", w.bare.mean, w.bare.sem);
    out += fmt::format("    slowdown (checked/unchecked): {:.2f}x\n", w.slowdown);
    out += fmt::format("    wrapper overhead (unchecked/bare): {:.2f}x\n", w.wrapper_overhead);
  }
  return out;
}

}  // namespace refineguard
