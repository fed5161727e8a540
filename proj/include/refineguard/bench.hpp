#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "refineguard/contract.hpp"

namespace refineguard {

// One named benchmark loop: `calls` invocations of a registered function with
// arguments precomputed from (seed, call index), so every arm replays the
// identical input stream.
struct Workload {
  std::string name;
  std::string function;
  std::size_t calls = 10000;
  std::function<std::map<std::string, Value>(std::uint64_t seed, std::size_t index)> args_for;
  HostFn bare;  // the unwrapped body, for the no-wrapper baseline
};

struct ArmTiming {
  std::vector<double> run_seconds;
  double mean = 0.0;
  double sem = 0.0;  // sample stddev / sqrt(runs)
};

struct WorkloadTiming {
  std::string workload;
  std::size_t runs = 0;
  std::size_t calls = 0;
  ArmTiming checked;    // full contract enforcement
  ArmTiming unchecked;  // wrapper in place, checking disabled
  ArmTiming bare;       // direct call, no wrapper at all
  double slowdown = 0.0;          // checked.mean / unchecked.mean
  double wrapper_overhead = 0.0;  // unchecked.mean / bare.mean
  double checksum = 0.0;          // folded results, keeps the loops honest
};

struct BenchResult {
  std::uint64_t seed = 0;
  std::size_t runs = 0;
  std::vector<WorkloadTiming> workloads;
};

// Times each workload `runs` times per arm, one (checked, unchecked, bare)
// cycle per run so machine drift hits every arm alike. Requires runs >= 2
// (the sem is undefined below that). Restores the engine's checking mode.
BenchResult run_benchmarks(Engine& engine, const std::vector<Workload>& workloads,
                           std::size_t runs, std::uint64_t seed);

}  // namespace refineguard
