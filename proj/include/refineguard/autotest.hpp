#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "refineguard/contract.hpp"

namespace refineguard {

struct TestPlan {
  std::size_t max_cases = 100;
  double timeout_secs = 2.0;
  std::uint64_t seed = 0;
  // Normally each function is checked during its run regardless of engine
  // state; clear this to honor a globally disabled engine (runs become
  // pass-throughs).
  bool force_checking = true;
};

enum class TestOutcome { Passed, Failed, TimedOut, Untestable };

const char* test_outcome_name(TestOutcome outcome);

struct FunctionTestResult {
  std::string function;
  TestOutcome outcome = TestOutcome::Passed;
  std::size_t cases_run = 0;        // checked calls that completed
  std::size_t cases_timed_out = 0;  // abandoned calls (result never seen)
  std::size_t reservoir_capacity = 0;

  // Untestable: which rule fired ("unspecified-types",
  // "ungeneratable-arg-type", "no-candidate-passed-requires") and the
  // argument/type it names.
  std::string untestable_reason;
  std::string untestable_detail;

  // Failed: the violation (or error) text, the inputs that produced it, and
  // the smaller inputs greedy shrinking settled on (depth-0 failures only).
  std::string failure;
  std::optional<ViolationKind> violation_kind;
  bool hyperproperty = false;  // the witness spans past executions
  std::vector<std::pair<std::string, std::string>> failing_args;
  std::vector<std::pair<std::string, std::string>> shrunk_args;
  // The same inputs as live Values, so a caller can replay the failure.
  std::map<std::string, Value> failing_values;
  std::map<std::string, Value> shrunk_values;
};

struct TestReport {
  TestPlan plan;
  std::vector<FunctionTestResult> results;

  bool all_passed() const {
    for (const auto& r : results)
      if (r.outcome == TestOutcome::Failed) return false;
    return true;
  }
};

// Generates and runs checked calls for each named function: boundary values
// first, then seeded pseudo-random ones; candidates failing entry conditions
// are filtered out (within a 20x budget); each case runs under the plan's
// timeout; the first violation stops that function and is shrunk greedily.
// Functions are isolated from production history via a fresh reservoir.
TestReport run_autotests(Engine& engine, const std::vector<std::string>& functions,
                         const TestPlan& plan, std::size_t jobs = 1);

}  // namespace refineguard
