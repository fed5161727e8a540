#include "refineguard/autotest.hpp"

#include <fmt/format.h>
#include <fmt/ranges.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <future>
#include <thread>

#include "refineguard/errors.hpp"

namespace refineguard {

namespace {

std::uint64_t mix_seed(std::uint64_t seed, const std::string& tag) {
  std::uint64_t h = 14695981039346656037ull ^ seed;
  for (unsigned char c : tag) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

// Monotone size metric used by shrinking: a replacement is tried only when
// strictly smaller under this measure.
double size_of(const Value& v) {
  if (v.is_none()) return 0.0;
  if (v.is_bool()) return 0.5;
  if (v.is_int()) {
    double d = bigint_to_double(abs(v.as_int()));
    return std::isfinite(d) ? d : 1e300;
  }
  if (v.is_float()) {
    double d = std::fabs(v.as_float());
    return std::isfinite(d) ? d : 1e300;
  }
  if (v.is_text()) return 10.0 * static_cast<double>(v.as_text().size());
  if (v.is_seq() || v.is_tuple()) {
    double total = 100.0 * (1.0 + static_cast<double>(v.seq_items().size()));
    for (const Value& item : v.seq_items()) total += size_of(item);
    return total;
  }
  if (v.is_map()) {
    double total = 100.0 * (1.0 + static_cast<double>(v.map_data().entries.size()));
    for (const auto& [k, val] : v.map_data().entries) total += size_of(k) + size_of(val);
    return total;
  }
  if (v.is_ndarray()) {
    double total = 100.0 * (1.0 + static_cast<double>(v.array().count()));
    for (double d : v.array().elems) total += std::isfinite(d) ? std::fabs(d) : 1e300;
    return total;
  }
  return 1e6;  // host handles never shrink
}

// One generated input slot: an argument, or one of the variadic bundles.
struct Slot {
  std::string name;
  std::vector<Value> stream;
};

// Builds the candidate streams. Returns false (filling out the untestable
// fields) when some argument cannot be generated.
bool build_slots(const ContractedFunction& fn, const TestPlan& plan, std::uint64_t fseed,
                 std::vector<Slot>& slots, FunctionTestResult& result) {
  const Contract& c = fn.contract();

  std::vector<std::string> unspecified;
  for (const auto& [arg_name, type] : c.args)
    if (!type) unspecified.push_back(arg_name);
  if (!unspecified.empty()) {
    result.outcome = TestOutcome::Untestable;
    result.untestable_reason = "unspecified-types";
    result.untestable_detail = fmt::format("no type declared for argument{} {}",
                                           unspecified.size() > 1 ? "s" : "",
                                           fmt::join(unspecified, ", "));
    return false;
  }

  // With several arguments the per-stream length is trimmed so the full
  // cartesian space stays near the candidate budget rather than exploding.
  std::size_t n_args = std::max<std::size_t>(c.args.size(), 1);
  std::size_t budget = 20 * std::max<std::size_t>(plan.max_cases, 1);
  std::size_t per_slot = budget;
  if (n_args > 1) {
    double root = std::pow(static_cast<double>(budget), 1.0 / static_cast<double>(n_args));
    per_slot = std::min(per_slot,
                        std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil(root))));
  }
  for (const auto& [arg_name, type] : c.args) {
    Slot slot{arg_name, type->generate(mix_seed(fseed, arg_name), per_slot)};
    if (slot.stream.empty()) {
      result.outcome = TestOutcome::Untestable;
      result.untestable_reason = "ungeneratable-arg-type";
      result.untestable_detail =
          fmt::format("argument {} has type {} with no generator", arg_name, type->name());
      return false;
    }
    slots.push_back(std::move(slot));
  }

  if (c.rest_positional) {
    const auto& [bundle_name, elem] = *c.rest_positional;
    Slot slot{bundle_name, {Value::tuple({})}};
    if (elem) {
      auto elems = elem->generate(mix_seed(fseed, bundle_name), 4);
      if (elems.size() >= 1) slot.stream.push_back(Value::tuple({elems[0]}));
      if (elems.size() >= 2) slot.stream.push_back(Value::tuple({elems[0], elems[1]}));
    }
    slots.push_back(std::move(slot));
  }
  if (c.rest_keywords) {
    const auto& [bundle_name, value_type] = *c.rest_keywords;
    Slot slot{bundle_name, {Value::map({})}};
    if (value_type) {
      auto vals = value_type->generate(mix_seed(fseed, bundle_name), 2);
      for (std::size_t i = 0; i < vals.size(); ++i)
        slot.stream.push_back(
            Value::map({{Value::text(fmt::format("extra{}", i)), vals[i]}}));
    }
    slots.push_back(std::move(slot));
  }
  return true;
}

// Enumerates index tuples shell by shell: every tuple whose largest index
// is r comes before any tuple with a larger one, so boundary members (which
// lead every stream) dominate the early cases. One shell is buffered at a
// time; the candidate budget keeps shells small in practice.
class ShellEnumerator {
 public:
  explicit ShellEnumerator(const std::vector<Slot>& slots) : slots_(slots) {
    for (const Slot& s : slots_) max_radius_ = std::max(max_radius_, s.stream.size() - 1);
  }

  // Fills `args`; returns false when exhausted.
  bool next(std::map<std::string, Value>& args) {
    if (slots_.empty()) {
      if (emitted_empty_) return false;
      emitted_empty_ = true;
      args.clear();
      return true;
    }
    while (buffer_.empty()) {
      if (radius_ > max_radius_) return false;
      std::vector<std::size_t> tuple(slots_.size(), 0);
      fill_shell(tuple, 0, false);
      std::reverse(buffer_.begin(), buffer_.end());  // pull in build order
      ++radius_;
    }
    const std::vector<std::size_t>& idx = buffer_.back();
    args.clear();
    for (std::size_t i = 0; i < slots_.size(); ++i)
      args.emplace(slots_[i].name, slots_[i].stream[idx[i]]);
    buffer_.pop_back();
    return true;
  }

 private:
  // Collects lexicographically every tuple with max index == radius_;
  // `hit` tracks whether some earlier coordinate already reached it.
  void fill_shell(std::vector<std::size_t>& tuple, std::size_t pos, bool hit) {
    if (pos == slots_.size()) {
      if (hit) buffer_.push_back(tuple);
      return;
    }
    std::size_t limit = std::min(radius_, slots_[pos].stream.size() - 1);
    bool rest_can_hit = false;
    for (std::size_t j = pos + 1; j < slots_.size() && !rest_can_hit; ++j)
      rest_can_hit = slots_[j].stream.size() - 1 >= radius_;
    for (std::size_t v = 0; v <= limit; ++v) {
      bool now_hit = hit || v == radius_;
      if (!now_hit && !rest_can_hit) continue;  // shell unreachable down this branch
      tuple[pos] = v;
      fill_shell(tuple, pos + 1, now_hit);
    }
  }

  const std::vector<Slot>& slots_;
  std::vector<std::vector<std::size_t>> buffer_;
  std::size_t radius_ = 0;
  std::size_t max_radius_ = 0;
  bool emitted_empty_ = false;
};

struct CaseResult {
  enum class Kind { Ok, Violation, Error } kind = Kind::Ok;
  std::string message;
  std::optional<ViolationReport> report;
};

// Runs one checked call, abandoning it (detached thread) past the deadline.
// Returns nullopt on timeout.
std::optional<CaseResult> run_case(ContractedFunction& fn,
                                   const std::map<std::string, Value>& args,
                                   double timeout_secs) {
  auto body = [&fn, args]() {
    CaseResult r;
    try {
      fn.call(args);
    } catch (const ViolationError& e) {
      r.kind = CaseResult::Kind::Violation;
      r.message = e.what();
      r.report = e.report();
    } catch (const std::exception& e) {
      r.kind = CaseResult::Kind::Error;
      r.message = e.what();
    }
    return r;
  };

  if (timeout_secs <= 0.0) return body();

  auto done = std::make_shared<std::promise<CaseResult>>();
  std::future<CaseResult> fut = done->get_future();
  std::thread worker([done, task = std::move(body)]() {
    try {
      done->set_value(task());
    } catch (...) {  // set_value itself cannot throw here; keep the thread quiet
    }
  });
  if (fut.wait_for(std::chrono::duration<double>(timeout_secs)) == std::future_status::ready) {
    worker.join();
    return fut.get();
  }
  worker.detach();  // abandoned: the call may finish later, its result is dropped
  return std::nullopt;
}

bool same_failure(const CaseResult& a, const FunctionTestResult& want) {
  if (a.kind != CaseResult::Kind::Violation || !a.report) return false;
  if (!want.violation_kind) return false;
  return a.report->kind == *want.violation_kind;
}

// Greedy shrink: repeatedly swap one argument for a strictly smaller stream
// member while the same violation kind persists. Hyperproperty failures are
// not shrunk (replaying them would need the exact history).
void shrink_failure(ContractedFunction& fn, const std::vector<Slot>& slots,
                    std::map<std::string, Value> current, double timeout_secs,
                    FunctionTestResult& result) {
  bool improved = true;
  int rounds = 0;
  while (improved && rounds++ < 32) {
    improved = false;
    for (const Slot& slot : slots) {
      double current_size = size_of(current.at(slot.name));
      const Value* best = nullptr;
      double best_size = current_size;
      for (const Value& candidate : slot.stream) {
        double s = size_of(candidate);
        if (s < best_size) {
          std::map<std::string, Value> trial = current;
          trial[slot.name] = candidate;
          if (!fn.admissible(trial)) continue;
          auto r = run_case(fn, trial, timeout_secs);
          if (r && same_failure(*r, result)) {
            best = &candidate;
            best_size = s;
          }
        }
      }
      if (best) {
        current[slot.name] = *best;
        improved = true;
      }
    }
  }
  for (const auto& [k, v] : current) result.shrunk_args.emplace_back(k, render(v));
  result.shrunk_values = std::move(current);
}

FunctionTestResult test_one_function(Engine& engine, const std::string& name,
                                     const TestPlan& plan) {
  FunctionTestResult result;
  result.function = name;
  ContractedFunction& fn = engine.at(name);
  result.reservoir_capacity = fn.contract().reservoir_capacity;
  std::uint64_t fseed = mix_seed(plan.seed, name);

  std::vector<Slot> slots;
  if (!build_slots(fn, plan, fseed, slots, result)) return result;

  // Isolate from production history and (normally) force checking on.
  ReservoirSampler<RecordPtr> fresh(fn.contract().reservoir_capacity, mix_seed(fseed, "res"));
  ReservoirSampler<RecordPtr> saved = fn.swap_reservoir(std::move(fresh));
  std::optional<bool> saved_override = fn.checking_override();
  if (plan.force_checking) fn.set_checking(true);

  std::size_t budget = 20 * std::max<std::size_t>(plan.max_cases, 1);
  std::size_t tried = 0;
  bool any_admissible = false;

  ShellEnumerator shells(slots);
  std::map<std::string, Value> args;
  try {
    while (result.cases_run < plan.max_cases && tried < budget && shells.next(args)) {
      ++tried;
      if (!fn.admissible(args)) continue;
      any_admissible = true;
      auto r = run_case(fn, args, plan.timeout_secs);
      if (!r) {
        ++result.cases_timed_out;
        continue;
      }
      ++result.cases_run;
      if (r->kind == CaseResult::Kind::Ok) continue;

      result.outcome = TestOutcome::Failed;
      result.failure = r->message;
      if (r->report) {
        result.violation_kind = r->report->kind;
        result.hyperproperty = r->report->witnesses.size() > 1;
      }
      for (const auto& [k, v] : args) result.failing_args.emplace_back(k, render(v));
      result.failing_values = args;
      if (r->report && !result.hyperproperty)
        shrink_failure(fn, slots, args, plan.timeout_secs, result);
      break;
    }
  } catch (const ContractMalformedError& e) {
    result.outcome = TestOutcome::Failed;
    result.failure = fmt::format("broken contract: {}", e.what());
    for (const auto& [k, v] : args) result.failing_args.emplace_back(k, render(v));
    result.failing_values = args;
  }

  fn.set_checking(saved_override);
  fn.swap_reservoir(std::move(saved));

  if (result.outcome == TestOutcome::Passed) {
    if (plan.max_cases == 0) {
      // nothing asked for, nothing run: vacuous pass
    } else if (!any_admissible) {
      result.outcome = TestOutcome::Untestable;
      result.untestable_reason = "no-candidate-passed-requires";
      result.untestable_detail =
          fmt::format("none of {} generated candidates satisfied the entry conditions", tried);
    } else if (result.cases_timed_out > 0) {
      result.outcome = TestOutcome::TimedOut;
    }
  }
  return result;
}

}  // namespace

const char* test_outcome_name(TestOutcome outcome) {
  switch (outcome) {
    case TestOutcome::Passed: return "passed";
    case TestOutcome::Failed: return "failed";
    case TestOutcome::TimedOut: return "timed-out";
    case TestOutcome::Untestable: return "untestable";
  }
  return "unknown";
}

TestReport run_autotests(Engine& engine, const std::vector<std::string>& functions,
                         const TestPlan& plan, std::size_t jobs) {
  TestReport report;
  report.plan = plan;
  report.results.resize(functions.size());

  if (jobs <= 1 || functions.size() <= 1) {
    for (std::size_t i = 0; i < functions.size(); ++i)
      report.results[i] = test_one_function(engine, functions[i], plan);
    return report;
  }

  std::atomic<std::size_t> cursor{0};
  std::vector<std::thread> pool;
  std::size_t n_workers = std::min(jobs, functions.size());
  for (std::size_t w = 0; w < n_workers; ++w) {
    pool.emplace_back([&]() {
      while (true) {
        std::size_t i = cursor.fetch_add(1);
        if (i >= functions.size()) return;
        report.results[i] = test_one_function(engine, functions[i], plan);
      }
    });
  }
  for (std::thread& t : pool) t.join();
  return report;
}

}  // namespace refineguard
