#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "refineguard/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"refinement-type contracts: runtime checking, generated tests, benchmarks"};
  app.require_subcommand(1);

  refineguard::cli::TestOptions test_options;
  std::size_t max_cases = 100;
  double timeout_secs = 2.0;
  std::uint64_t test_seed = 0;
  CLI::App* test = app.add_subcommand("test", "generate and run checked calls for a suite");
  test->add_option("--suite", test_options.suite, "fixture suite to load")->capture_default_str();
  CLI::Option* max_cases_opt =
      test->add_option("--max-cases", max_cases, "generated cases per function");
  CLI::Option* timeout_opt =
      test->add_option("--timeout-secs", timeout_secs, "per-case timeout in seconds");
  CLI::Option* seed_opt = test->add_option("--seed", test_seed, "generation seed");
  test->add_option("--only", test_options.only, "glob over function names");
  test->add_option("--report", test_options.report, "report format: text or json")
      ->capture_default_str();
  test->add_flag("--no-checks", test_options.no_checks,
                 "invoke cases without contract enforcement (mirrors REFINEGUARD_DISABLE=1)");
  test->add_option("--jobs", test_options.jobs, "worker threads across functions")
      ->capture_default_str();
  test->add_option("--out", test_options.out, "write the report to this file");

  refineguard::cli::BenchOptions bench_options;
  CLI::App* bench = app.add_subcommand("bench", "time checked vs unchecked calls");
  bench->add_option("--workload", bench_options.workloads,
                    "workload name (repeatable; default: all)");
  bench->add_option("--runs", bench_options.runs, "timed runs per arm")->capture_default_str();
  bench->add_option("--seed", bench_options.seed, "input-stream seed")->capture_default_str();
  bench->add_option("--report", bench_options.report, "report format: text or json")
      ->capture_default_str();
  bench->add_option("--out", bench_options.out, "write the report to this file");

  std::string fixture;
  CLI::App* demo = app.add_subcommand("demo", "walk through a contract-catch fixture");
  demo->add_option("fixture", fixture, "one of: dna, fisher, cube")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;  // usage problems exit 2; --help exits 0
  }

  if (*test) {
    if (max_cases_opt->count() > 0) test_options.max_cases = max_cases;
    if (timeout_opt->count() > 0) test_options.timeout_secs = timeout_secs;
    if (seed_opt->count() > 0) test_options.seed = test_seed;
    return refineguard::cli::cmd_test(test_options, std::cout, std::cerr);
  }
  if (*bench) return refineguard::cli::cmd_bench(bench_options, std::cout, std::cerr);
  return refineguard::cli::cmd_demo(fixture, std::cout, std::cerr);
}
