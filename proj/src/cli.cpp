#include "refineguard/cli.hpp"

#include <fstream>
#include <random>
#include <sstream>

#include <fmt/format.h>

#include "refineguard/fixtures.hpp"
#include "refineguard/report_json.hpp"

namespace refineguard::cli {

namespace {

// Routes a finished report either to the stream or to --out FILE.
int emit(const std::string& text, const std::string& out_path, std::ostream& os,
         std::ostream& err) {
  if (out_path.empty()) {
    os << text;
    return 0;
  }
  std::ofstream file(out_path);
  if (!file) {
    err << fmt::format("error: cannot write report to {}\n", out_path);
    return 2;
  }
  file << text;
  return 0;
}

std::string indent(const std::string& block) {
  std::string out;
  std::istringstream lines(block);
  for (std::string line; std::getline(lines, line);) out += "    " + line + "\n";
  return out;
}

Value strand(std::initializer_list<const char*> bases) {
  std::vector<Value> items;
  for (const char* b : bases) items.push_back(Value::text(b));
  return Value::seq(std::move(items));
}

int demo_dna(std::ostream& os) {
  Engine engine;
  fixtures::register_demo_fixtures(engine);
  ContractedFunction& fn = engine.at("complement_sequence");
  bool ok = true;

  Value dna = strand({"A", "T", "C"});
  Value got = fn.call({{"seq", dna}});
  os << fmt::format("complement_sequence({}) = {}\n", render(dna), render(got));
  if (!value_eq(got, strand({"G", "A", "T"}))) {
    os << "expected ['G', 'A', 'T']\n";
    ok = false;
  }

  Value rna = strand({"U", "C", "G"});
  try {
    fn.call({{"seq", rna}});
    os << fmt::format("complement_sequence({}) was accepted — expected a rejection\n",
                      render(rna));
    ok = false;
  } catch (const ViolationError& e) {
    os << fmt::format("complement_sequence({}) rejected:\n{}", render(rna),
                      indent(e.report().to_string()));
    if (e.report().kind != ViolationKind::ArgumentType) {
      os << "expected an argument-type violation\n";
      ok = false;
    }
  }
  return ok ? 0 : 1;
}

int demo_fisher(std::ostream& os) {
  Engine engine;
  fixtures::register_demo_fixtures(engine);
  ContractedFunction& fn = engine.at("fisher_transform");
  bool ok = true;

  Value corr = Value::ndarray({4}, {0.1, 0.5, -0.62, 0.9});
  Value z = fn.call({{"corr_values", corr}});
  os << fmt::format("fisher_transform({}) = {}\n", render(corr), render(z));

  try {
    fn.call({{"corr_values", z}});
    os << "second application was accepted — expected a rejection\n";
    ok = false;
  } catch (const ViolationError& e) {
    os << fmt::format("fisher_transform applied to its own output rejected:\n{}",
                      indent(e.report().to_string()));
    if (e.report().kind != ViolationKind::ArgumentType) {
      os << "expected an argument-type violation\n";
      ok = false;
    }
  }

  // Without the entry guard the mistake slips through to the output, where
  // the NaN falls outside the declared return type.
  ContractedFunction& unguarded = engine.at("fisher_transform_unguarded");
  try {
    unguarded.call({{"corr_values", z}});
    os << "unguarded variant returned — expected a return-type violation\n";
    ok = false;
  } catch (const ViolationError& e) {
    os << fmt::format("unguarded variant caught at the return instead:\n{}",
                      indent(e.report().to_string()));
    if (e.report().kind != ViolationKind::ReturnType) {
      os << "expected a return-type violation\n";
      ok = false;
    }
  }
  return ok ? 0 : 1;
}

int demo_cube(std::ostream& os) {
  Engine engine;
  fixtures::register_demo_fixtures(engine);
  bool ok = true;

  ContractedFunction& cube = engine.at("cube");
  std::mt19937_64 rng(2026);
  std::uniform_real_distribution<double> dist(-3.0, 3.0);
  try {
    for (int i = 0; i < 24; ++i) {
      double t = dist(rng);
      Value arg = (i % 3 == 2) ? Value::integer(static_cast<long long>(t * 100))
                               : Value::real(t);
      cube.call({{"t", arg}});
    }
    os << "cube: 24 calls checked against sampled history, all monotone\n";
  } catch (const ViolationError& e) {
    os << fmt::format("cube unexpectedly violated its contract:\n{}",
                      indent(e.report().to_string()));
    ok = false;
  }

  ContractedFunction& square = engine.at("square_nonmono");
  try {
    square.call({{"t", Value::real(-2.0)}});
    square.call({{"t", Value::real(1.0)}});
    os << "square_nonmono passed — expected a monotonicity violation\n";
    ok = false;
  } catch (const ViolationError& e) {
    os << fmt::format("square_nonmono caught (1 >= -2 but 1 < 4):\n{}",
                      indent(e.report().to_string()));
    if (e.report().kind != ViolationKind::ExitCondition) {
      os << "expected an exit-condition violation\n";
      ok = false;
    }
  }
  return ok ? 0 : 1;
}

}  // namespace

bool glob_match(const std::string& pattern, const std::string& text) {
  std::size_t p = 0, t = 0;
  std::size_t star = std::string::npos, mark = 0;
  while (t < text.size()) {
    if (p < pattern.size() && (pattern[p] == '?' || pattern[p] == text[t])) {
      ++p, ++t;
    } else if (p < pattern.size() && pattern[p] == '*') {
      star = p++;
      mark = t;
    } else if (star != std::string::npos) {
      p = star + 1;
      t = ++mark;
    } else {
      return false;
    }
  }
  while (p < pattern.size() && pattern[p] == '*') ++p;
  return p == pattern.size();
}

int cmd_test(const TestOptions& options, std::ostream& os, std::ostream& err) {
  const auto& all = fixtures::suites();
  auto it = all.find(options.suite);
  if (it == all.end()) {
    std::string known;
    for (const auto& [name, manifest] : all) known += (known.empty() ? "" : ", ") + name;
    err << fmt::format("error: unknown suite \"{}\" (available: {})\n", options.suite, known);
    return 2;
  }
  if (options.report != "text" && options.report != "json") {
    err << fmt::format("error: unknown report format \"{}\" (use text or json)\n", options.report);
    return 2;
  }

  TestPlan plan = it->second.default_plan;
  if (options.max_cases) plan.max_cases = *options.max_cases;
  if (options.timeout_secs) plan.timeout_secs = *options.timeout_secs;
  if (options.seed) plan.seed = *options.seed;

  Engine engine(plan.seed);
  it->second.registrar(engine);
  if (options.no_checks) engine.set_checking(false);
  // A disabled engine (flag or REFINEGUARD_DISABLE) turns test calls into
  // pass-throughs rather than silently re-enabling checks.
  plan.force_checking = engine.checking();

  std::vector<std::string> names;
  for (const std::string& name : engine.function_names())
    if (options.only.empty() || glob_match(options.only, name)) names.push_back(name);

  TestReport report = run_autotests(engine, names, plan, std::max<std::size_t>(options.jobs, 1));

  std::string text = options.report == "json" ? report_to_json(report, options.suite).dump(2) + "\n"
                                              : report_to_text(report, options.suite);
  int emitted = emit(text, options.out, os, err);
  if (emitted != 0) return emitted;
  return report.all_passed() ? 0 : 1;
}

int cmd_bench(const BenchOptions& options, std::ostream& os, std::ostream& err) {
  if (options.runs < 2) {
    err << "error: --runs must be at least 2 (the sem needs two samples)\n";
    return 2;
  }
  if (options.report != "text" && options.report != "json") {
    err << fmt::format("error: unknown report format \"{}\" (use text or json)\n", options.report);
    return 2;
  }

  std::vector<Workload> selected;
  for (const Workload& w : fixtures::workloads()) {
    if (options.workloads.empty()) {
      selected.push_back(w);
      continue;
    }
    for (const std::string& wanted : options.workloads)
      if (w.name == wanted) {
        selected.push_back(w);
        break;
      }
  }
  for (const std::string& wanted : options.workloads) {
    bool known = false;
    for (const Workload& w : fixtures::workloads()) known = known || w.name == wanted;
    if (!known) {
      err << fmt::format("error: unknown workload \"{}\"\n", wanted);
      return 2;
    }
  }

  Engine engine(options.seed);
  fixtures::register_bench_suite(engine);
  BenchResult result = run_benchmarks(engine, selected, options.runs, options.seed);

  std::string text = options.report == "json" ? bench_to_json(result).dump(2) + "\n"
                                              : bench_to_text(result);
  return emit(text, options.out, os, err);
}

int cmd_demo(const std::string& fixture, std::ostream& os, std::ostream& err) {
  if (fixture == "dna") return demo_dna(os);
  if (fixture == "fisher") return demo_fisher(os);
  if (fixture == "cube") return demo_cube(os);
  err << fmt::format("error: unknown fixture \"{}\" (available: dna, fisher, cube)\n", fixture);
  return 2;
}

}  // namespace refineguard::cli
