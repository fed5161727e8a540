#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace refineguard::cli {

// Flags for `refineguard test`. Unset optionals fall back to the suite's
// default plan.
struct TestOptions {
  std::string suite = "clean";
  std::optional<std::size_t> max_cases;
  std::optional<double> timeout_secs;
  std::optional<std::uint64_t> seed;
  std::string only;  // glob over function names; empty selects all
  std::string report = "text";
  bool no_checks = false;
  std::size_t jobs = 1;
  std::string out;  // write the report here instead of the stream
};

struct BenchOptions {
  std::vector<std::string> workloads;  // empty selects all
  std::size_t runs = 10;
  std::uint64_t seed = 0;
  std::string report = "text";
  std::string out;
};

// Exit codes across all commands: 0 success, 1 contract failure observed
// (or a demo's expected outcome missing), 2 usage/manifest errors.
int cmd_test(const TestOptions& options, std::ostream& os, std::ostream& err);
int cmd_bench(const BenchOptions& options, std::ostream& os, std::ostream& err);
int cmd_demo(const std::string& fixture, std::ostream& os, std::ostream& err);

// Shell-style match: `*` spans any run, `?` one character.
bool glob_match(const std::string& pattern, const std::string& text);

}  // namespace refineguard::cli
