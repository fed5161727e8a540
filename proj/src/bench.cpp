#include "refineguard/bench.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace refineguard {

namespace {

void finish_arm(ArmTiming& arm) {
  double total = 0.0;
  for (double s : arm.run_seconds) total += s;
  arm.mean = total / static_cast<double>(arm.run_seconds.size());
  double ss = 0.0;
  for (double s : arm.run_seconds) ss += (s - arm.mean) * (s - arm.mean);
  std::size_t n = arm.run_seconds.size();
  arm.sem = std::sqrt(ss / static_cast<double>(n - 1)) / std::sqrt(static_cast<double>(n));
}

// Folds a result into a double so the optimizer cannot discard the loop body.
double sink(const Value& v) {
  switch (v.tag()) {
    case ValueTag::Float:
      return v.as_float();
    case ValueTag::Int:
      return bigint_to_double(v.as_int());
    case ValueTag::NdArray:
      return v.array().elems.empty() ? 0.5 : v.array().elems.front();
    default:
      return 1.0;
  }
}

template <typename Call>
double timed_loop(const std::vector<std::map<std::string, Value>>& cases, Call&& call,
                  double& checksum) {
  auto start = std::chrono::steady_clock::now();
  double acc = 0.0;
  for (const auto& args : cases) acc += sink(call(args));
  auto stop = std::chrono::steady_clock::now();
  checksum += acc;
  return std::chrono::duration<double>(stop - start).count();
}

}  // namespace

BenchResult run_benchmarks(Engine& engine, const std::vector<Workload>& workloads,
                           std::size_t runs, std::uint64_t seed) {
  if (runs < 2) throw std::invalid_argument("benchmark needs at least 2 runs for the sem");

  BenchResult result;
  result.seed = seed;
  result.runs = runs;

  bool engine_mode = engine.checking();
  for (const Workload& w : workloads) {
    ContractedFunction& fn = engine.at(w.function);

    std::vector<std::map<std::string, Value>> cases;
    cases.reserve(w.calls);
    for (std::size_t i = 0; i < w.calls; ++i) cases.push_back(w.args_for(seed, i));

    WorkloadTiming timing;
    timing.workload = w.name;
    timing.runs = runs;
    timing.calls = w.calls;

    auto checked_call = [&](const std::map<std::string, Value>& args) { return fn.call(args); };
    auto bare_call = [&](const std::map<std::string, Value>& args) { return w.bare(args); };

    // One unmeasured pass per arm warms caches and the allocator.
    double scratch = 0.0;
    engine.set_checking(true);
    timed_loop(cases, checked_call, scratch);
    engine.set_checking(false);
    timed_loop(cases, checked_call, scratch);
    timed_loop(cases, bare_call, scratch);

    for (std::size_t r = 0; r < runs; ++r) {
      engine.set_checking(true);
      timing.checked.run_seconds.push_back(timed_loop(cases, checked_call, timing.checksum));
      engine.set_checking(false);
      timing.unchecked.run_seconds.push_back(timed_loop(cases, checked_call, timing.checksum));
      timing.bare.run_seconds.push_back(timed_loop(cases, bare_call, timing.checksum));
    }
    finish_arm(timing.checked);
    finish_arm(timing.unchecked);
    finish_arm(timing.bare);
    timing.slowdown = timing.checked.mean / timing.unchecked.mean;
    timing.wrapper_overhead = timing.unchecked.mean / timing.bare.mean;
    result.workloads.push_back(std::move(timing));
  }
  engine.set_checking(engine_mode);
  return result;
}

}  // namespace refineguard
