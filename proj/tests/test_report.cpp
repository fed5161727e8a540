#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <json.hpp>
#include <string>

#include "refineguard/bench.hpp"
#include "refineguard/fixtures.hpp"
#include "refineguard/report_json.hpp"

using namespace refineguard;
using nlohmann::json;

namespace {

// One result per outcome, with every serialized field populated.
TestReport sample_report() {
  TestReport report;
  report.plan.max_cases = 50;
  report.plan.timeout_secs = 1.5;
  report.plan.seed = 42;
  report.plan.force_checking = true;

  FunctionTestResult pass;
  pass.function = "steady";
  pass.outcome = TestOutcome::Passed;
  pass.cases_run = 50;
  pass.reservoir_capacity = 10;
  report.results.push_back(pass);

  FunctionTestResult fail;
  fail.function = "wobbly";
  fail.outcome = TestOutcome::Failed;
  fail.cases_run = 3;
  fail.reservoir_capacity = 10;
  fail.violation_kind = ViolationKind::ExitCondition;
  fail.hyperproperty = true;
  fail.failure = "exit condition violation in wobbly: condition evaluated to False";
  fail.failing_args = {{"a", "2"}, {"b", "'text'"}};
  fail.shrunk_args = {{"a", "0"}, {"b", "''"}};
  report.results.push_back(fail);

  FunctionTestResult slow;
  slow.function = "molasses";
  slow.outcome = TestOutcome::TimedOut;
  slow.cases_run = 4;
  slow.cases_timed_out = 6;
  slow.reservoir_capacity = 10;
  report.results.push_back(slow);

  FunctionTestResult skip;
  skip.function = "opaque";
  skip.outcome = TestOutcome::Untestable;
  skip.reservoir_capacity = 10;
  skip.untestable_reason = "unspecified-types";
  skip.untestable_detail = "no type declared for argument x";
  report.results.push_back(skip);

  return report;
}

}  // namespace

TEST_CASE("a report serializes with schema, plan, functions, and totals") {
  json doc = report_to_json(sample_report(), "demo");
  CHECK(doc.at("schema") == 1);
  CHECK(doc.at("suite") == "demo");
  CHECK(doc.at("seed") == 42);
  CHECK(doc.at("plan").at("max_cases") == 50);
  CHECK(doc.at("plan").at("timeout_secs") == 1.5);
  CHECK(doc.at("plan").at("seed") == 42);
  CHECK(doc.at("plan").at("force_checking") == true);

  const json& fns = doc.at("functions");
  REQUIRE(fns.size() == 4);
  CHECK(fns[0].at("name") == "steady");
  CHECK(fns[0].at("outcome") == "passed");
  CHECK(fns[0].at("cases") == 50);
  CHECK(fns[0].at("reservoir_capacity") == 10);
  CHECK_FALSE(fns[0].contains("violation"));

  CHECK(fns[1].at("outcome") == "failed");
  CHECK(fns[1].at("violation") == "ExitCondition");
  CHECK(fns[1].at("hyperproperty") == true);
  CHECK(fns[1].at("args").at("a") == "2");
  CHECK(fns[1].at("args").at("b") == "'text'");
  CHECK(fns[1].at("shrunk_args").at("a") == "0");

  CHECK(fns[2].at("outcome") == "timed-out");
  CHECK(fns[2].at("cases_timed_out") == 6);

  CHECK(fns[3].at("outcome") == "untestable");
  CHECK(fns[3].at("reason") == "unspecified-types");
  CHECK(fns[3].at("detail") == "no type declared for argument x");

  CHECK(doc.at("totals").at("passed") == 1);
  CHECK(doc.at("totals").at("failed") == 1);
  CHECK(doc.at("totals").at("timed_out") == 1);
  CHECK(doc.at("totals").at("untestable") == 1);
}

TEST_CASE("serialization round-trips: to_json after from_json is the identity") {
  json first = report_to_json(sample_report(), "demo");
  json second = report_to_json(report_from_json(first), "demo");
  CHECK(first == second);
}

TEST_CASE("every violation token maps both ways, including the malformed bucket") {
  const std::pair<ViolationKind, const char*> kinds[] = {
      {ViolationKind::ArgumentType, "ArgumentType"},
      {ViolationKind::ReturnType, "ReturnType"},
      {ViolationKind::EntryCondition, "EntryCondition"},
      {ViolationKind::ExitCondition, "ExitCondition"},
  };
  for (const auto& [kind, token] : kinds) {
    TestReport report;
    FunctionTestResult r;
    r.function = "f";
    r.outcome = TestOutcome::Failed;
    r.violation_kind = kind;
    report.results.push_back(r);
    json doc = report_to_json(report, "s");
    CHECK(doc.at("functions")[0].at("violation") == token);
    TestReport back = report_from_json(doc);
    REQUIRE(back.results[0].violation_kind.has_value());
    CHECK(*back.results[0].violation_kind == kind);
  }

  // A broken contract has no ViolationKind; it serializes as its own token
  // and deserializes back to "no kind".
  TestReport report;
  FunctionTestResult r;
  r.function = "f";
  r.outcome = TestOutcome::Failed;
  r.failure = "broken contract: f: entry condition \"x[0] > 0\" failed to evaluate";
  report.results.push_back(r);
  json doc = report_to_json(report, "s");
  CHECK(doc.at("functions")[0].at("violation") == "ContractMalformed");
  CHECK_FALSE(report_from_json(doc).results[0].violation_kind.has_value());
}

TEST_CASE("a real autotest run survives the JSON round trip") {
  Engine engine;
  fixtures::register_seeded_bugs(engine);
  TestPlan plan;
  plan.max_cases = 40;
  TestReport report = run_autotests(engine, engine.function_names(), plan);

  json doc = report_to_json(report, "seeded-bugs");
  CHECK(doc.at("totals").at("failed") == 3);
  CHECK(report_to_json(report_from_json(doc), "seeded-bugs") == doc);
}

TEST_CASE("the text report marks outcomes and sums the totals line") {
  std::string text = report_to_text(sample_report(), "demo");
  CHECK(text.find("suite demo: max_cases=50 timeout=1.5s seed=42\n") == 0);
  CHECK(text.find("[pass] steady") != std::string::npos);
  CHECK(text.find("[FAIL] wobbly") != std::string::npos);
  CHECK(text.find("args: a=2, b='text'") != std::string::npos);
  CHECK(text.find("shrunk: a=0, b=''") != std::string::npos);
  CHECK(text.find("[time] molasses") != std::string::npos);
  CHECK(text.find("completed=4 killed=6") != std::string::npos);
  CHECK(text.find("[skip] opaque") != std::string::npos);
  CHECK(text.find("untestable functions (candidates for hand-written tests):") !=
        std::string::npos);
  CHECK(text.find("opaque — unspecified-types: no type declared for argument x") !=
        std::string::npos);
  CHECK(text.find("totals: 1 passed, 1 failed, 1 timed-out, 1 untestable\n") !=
        std::string::npos);
}

TEST_CASE("the text report flags a plan that ran with checking off") {
  TestReport report = sample_report();
  report.plan.force_checking = false;
  std::string text = report_to_text(report, "demo");
  CHECK(text.find("seed=42 (checking disabled)\n") != std::string::npos);
}

TEST_CASE("multi-line failures stay aligned under their function row") {
  TestReport report;
  FunctionTestResult r;
  r.function = "f";
  r.outcome = TestOutcome::Failed;
  r.failure = "first line\n  condition: x > 0";
  report.results.push_back(r);
  std::string text = report_to_text(report, "s");
  CHECK(text.find("first line\n           condition: x > 0") != std::string::npos);
}

TEST_CASE("bench results serialize to JSON and text with both ratios") {
  BenchResult result;
  result.seed = 3;
  result.runs = 2;
  WorkloadTiming w;
  w.workload = "scalar";
  w.runs = 2;
  w.calls = 100;
  w.checked = {{0.010, 0.012}, 0.011, 0.001};
  w.unchecked = {{0.0010, 0.0012}, 0.0011, 0.0001};
  w.bare = {{0.0009, 0.0011}, 0.0010, 0.0001};
  w.slowdown = 10.0;
  w.wrapper_overhead = 1.1;
  result.workloads.push_back(w);

  json doc = bench_to_json(result);
  CHECK(doc.at("schema") == 1);
  CHECK(doc.at("command") == "bench");
  CHECK(doc.at("seed") == 3);
  CHECK(doc.at("runs") == 2);
  const json& row = doc.at("workloads")[0];
  CHECK(row.at("name") == "scalar");
  CHECK(row.at("calls") == 100);
  CHECK(row.at("checked").at("mean_secs") == 0.011);
  CHECK(row.at("checked").at("sem_secs") == 0.001);
  CHECK(row.at("unchecked").at("mean_secs") == 0.0011);
  CHECK(row.at("bare").at("mean_secs") == 0.0010);
  CHECK(row.at("slowdown") == 10.0);
  CHECK(row.at("wrapper_overhead") == 1.1);

  std::string text = bench_to_text(result);
  CHECK(text.find("benchmark: 2 runs per arm, seed 3") == 0);
  CHECK(text.find("scalar (100 calls/run)") != std::string::npos);
  CHECK(text.find("slowdown (checked/unchecked): 10.00x") != std::string::npos);
  CHECK(text.find("wrapper overhead (unchecked/bare): 1.10x") != std::string::npos);
}

TEST_CASE("a real benchmark produces finite stats and restores engine mode") {
  Engine engine;
  fixtures::register_bench_suite(engine);
  engine.set_checking(true);

  Workload tiny;
  tiny.name = "tiny";
  tiny.function = "bench_poly";
  tiny.calls = 200;
  tiny.args_for = [](std::uint64_t, std::size_t i) {
    return std::map<std::string, Value>{
        {"x", Value::real(static_cast<double>(i % 100) - 50.0)}};
  };
  tiny.bare = [](const std::map<std::string, Value>& args) {
    double x = args.at("x").numeric_as_double();
    return Value::real(x * x + 1.0);
  };

  BenchResult result = run_benchmarks(engine, {tiny}, 3, 17);
  CHECK(engine.checking());  // restored
  REQUIRE(result.workloads.size() == 1);
  const WorkloadTiming& w = result.workloads[0];
  CHECK(w.checked.run_seconds.size() == 3);
  CHECK(w.unchecked.run_seconds.size() == 3);
  CHECK(w.bare.run_seconds.size() == 3);
  CHECK(w.checked.mean > 0.0);
  CHECK(w.slowdown > 0.0);
  CHECK(w.wrapper_overhead > 0.0);
  CHECK(std::isfinite(w.checked.sem));
  CHECK(w.checksum != 0.0);

  CHECK_THROWS_AS(run_benchmarks(engine, {tiny}, 1, 0), std::invalid_argument);
}
