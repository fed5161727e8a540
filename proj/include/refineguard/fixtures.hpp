#pragma once

#include <map>
#include <string>
#include <vector>

#include "refineguard/autotest.hpp"
#include "refineguard/bench.hpp"
#include "refineguard/contract.hpp"

namespace refineguard::fixtures {

// A named, linked-in registration routine plus the plan it should run under
// by default. The CLI resolves --suite against suites().
struct SuiteManifest {
  std::string name;
  void (*registrar)(Engine&);
  std::string description;
  TestPlan default_plan;
};

// Contracts that hold for every generatable input: the DNA complement, a
// guarded Fisher z-transform, a monotone cube, square root, and a
// precondition-guarded logarithm.
void register_clean_suite(Engine& engine);

// Three deliberately planted bugs, each modeled on a failure class from
// numerical practice: a return-type bug (shift below zero), a distribution
// that misses sum-to-1, and a probability split that emits a value slightly
// below zero at one endpoint.
void register_seeded_bugs(Engine& engine);

// The walkthrough fixtures for `refineguard demo`: the DNA complement, the
// Fisher transform under its exact textbook contract (closed interval, so
// double application is rejected) plus an unguarded variant whose NaN output
// is caught by the return type, and the monotone cube next to a planted
// non-monotone square.
void register_demo_fixtures(Engine& engine);

// Benchmark targets: a scalar polynomial and a vectorized transform.
void register_bench_suite(Engine& engine);

const std::map<std::string, SuiteManifest>& suites();

// Benchmark loops over the bench-suite functions.
const std::vector<Workload>& workloads();

}  // namespace refineguard::fixtures
