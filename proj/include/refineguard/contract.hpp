#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "refineguard/ast.hpp"
#include "refineguard/eval.hpp"
#include "refineguard/reservoir.hpp"
#include "refineguard/types.hpp"
#include "refineguard/value.hpp"

namespace refineguard {

// A host function under contract. Arguments always arrive by name.
using HostFn = std::function<Value(const std::map<std::string, Value>&)>;

enum class ViolationKind { ArgumentType, ReturnType, EntryCondition, ExitCondition };

const char* violation_kind_name(ViolationKind kind);

// A rendered execution bound to one backtick depth of a failing condition.
struct WitnessFrame {
  int depth = 0;  // 0 = the call being checked, k = the k-primed execution
  std::uint64_t seq_no = 0;
  std::vector<std::pair<std::string, std::string>> args;  // name -> rendered value
  std::optional<std::string> ret;
};

struct ViolationReport {
  ViolationKind kind;
  std::string function;
  std::string detail;     // what failed, e.g. which argument or member test
  std::string condition;  // source text when a condition failed
  std::vector<WitnessFrame> witnesses;

  std::string to_string() const;
};

class ViolationError : public std::runtime_error {
 public:
  explicit ViolationError(ViolationReport report);
  const ViolationReport& report() const { return report_; }

 private:
  ViolationReport report_;
};

// Declarative contract attached at registration. Null types mean the slot
// is unchecked (and reported untestable by the test generator).
struct Contract {
  std::vector<std::pair<std::string, TypePtr>> args;
  TypePtr return_type;
  std::vector<std::string> requires_src;
  std::vector<std::string> ensures_src;
  std::optional<std::pair<std::string, TypePtr>> rest_positional;
  std::optional<std::pair<std::string, TypePtr>> rest_keywords;
  std::size_t reservoir_capacity = 10;

  Contract& arg(std::string name, TypePtr type = nullptr) {
    args.emplace_back(std::move(name), std::move(type));
    return *this;
  }
  Contract& returns(TypePtr type) {
    return_type = std::move(type);
    return *this;
  }
  Contract& requires_(std::string source) {
    requires_src.push_back(std::move(source));
    return *this;
  }
  Contract& ensures(std::string source) {
    ensures_src.push_back(std::move(source));
    return *this;
  }
  // Extra positional values arrive bundled as a Tuple under `name`; each
  // element must be a member of `elem` when given.
  Contract& rest_args(std::string name, TypePtr elem = nullptr) {
    rest_positional = {std::move(name), std::move(elem)};
    return *this;
  }
  // Undeclared keyword arguments are folded into a Map under `name`.
  Contract& rest_kwargs(std::string name, TypePtr value = nullptr) {
    rest_keywords = {std::move(name), std::move(value)};
    return *this;
  }
  Contract& reservoir(std::size_t capacity) {
    reservoir_capacity = capacity;
    return *this;
  }
};

struct ParsedCondition {
  std::string source;
  lang::ExprPtr expr;
  int depth = 0;  // max backtick depth
};

// Past executions that make a depth-d exit condition fail, in role order:
// tuple[k-1] is bound at depth k. For depth-1 conditions the pair is also
// tried with roles swapped; `swapped` marks that case.
struct HyperWitness {
  std::vector<RecordPtr> tuple;
  bool swapped = false;
};

// Evaluates one depth-d condition against every ordered d-tuple of distinct
// history records. Returns the first falsifying assignment, nullopt when all
// pass (vacuously when history holds fewer than d records).
std::optional<HyperWitness> check_hyperproperty(
    const ParsedCondition& condition, const std::map<std::string, Value>& current_args,
    const Value& current_ret, const std::vector<RecordPtr>& history,
    const std::map<std::string, lang::HelperFn>* helpers,
    const std::map<std::string, lang::AccessorFn>* accessors);

class Engine;

class ContractedFunction {
 public:
  ContractedFunction(Engine* engine, std::string name, HostFn fn, Contract contract,
                     std::uint64_t reservoir_seed);

  const std::string& name() const { return name_; }
  const Contract& contract() const { return contract_; }
  const std::vector<ParsedCondition>& entry_conditions() const { return requires_; }
  const std::vector<ParsedCondition>& exit_conditions() const { return ensures_; }
  int max_condition_depth() const { return max_depth_; }

  // Full checked call: argument types, entry conditions, the host call,
  // return type, exit conditions (hyperproperties against sampled history),
  // then — only if everything passed and the record is deep — a history
  // offer. With checking off this is a bare pass-through; the fast path
  // lives here so a disabled wrapper costs one branch, not a call frame.
  Value call(const std::map<std::string, Value>& args) {
    if (!checking_now()) return fn_(args);
    return call_checked(args);
  }

  // Argument types plus entry conditions only, no host call. Used to filter
  // generated candidates.
  bool admissible(const std::map<std::string, Value>& args) const;

  // Reservoir introspection: a copy of the resident records / total offers.
  std::vector<RecordPtr> history() const;
  std::uint64_t offers_seen() const;

  // Swaps in a different sampler (the test generator isolates itself this
  // way) and invalidates offers from calls still in flight.
  ReservoirSampler<RecordPtr> swap_reservoir(ReservoirSampler<RecordPtr> fresh);

  void set_checking(std::optional<bool> enabled) { override_ = enabled; }
  std::optional<bool> checking_override() const { return override_; }
  bool checking_now() const;  // inline below Engine

 private:
  Value call_checked(const std::map<std::string, Value>& args);
  std::map<std::string, Value> normalize_args(const std::map<std::string, Value>& args) const;
  void check_arg_types(const std::map<std::string, Value>& args, std::uint64_t seq) const;
  // Returns the snapshot map; sets `shallow` when any value kept a live
  // reference because it cannot be snapshotted.
  std::map<std::string, Value> snapshot_args(const std::map<std::string, Value>& args,
                                             bool& shallow) const;
  void check_entry(const std::map<std::string, Value>& snap_args, std::uint64_t seq) const;
  [[noreturn]] void raise_condition_violation(const ParsedCondition& cond, ViolationKind kind,
                                              std::uint64_t seq,
                                              const std::map<std::string, Value>& args,
                                              const Value* ret,
                                              const HyperWitness* hyper) const;

  Engine* engine_;
  std::string name_;
  HostFn fn_;
  Contract contract_;
  std::vector<ParsedCondition> requires_;
  std::vector<ParsedCondition> ensures_;
  int max_depth_ = 0;

  mutable std::mutex mutex_;
  ReservoirSampler<RecordPtr> reservoir_;
  std::uint64_t next_seq_ = 1;
  std::uint64_t generation_ = 0;
  std::optional<bool> override_;
};

// Registry of contracted functions plus the names conditions may call
// (helpers) or dereference (attribute accessors).
class Engine {
 public:
  // Honors REFINEGUARD_DISABLE=1 in the environment: checking starts off.
  explicit Engine(std::uint64_t seed = 0);

  // Validates the contract (parse errors, unknown names, primed entry
  // conditions, name collisions) and wires the function in. Throws
  // ContractMalformedError on any defect.
  ContractedFunction& register_function(std::string name, HostFn fn, Contract contract);

  ContractedFunction* find(const std::string& name);
  ContractedFunction& at(const std::string& name);  // throws UnknownFunctionError
  std::vector<std::string> function_names() const;

  // Helpers become callable in conditions; accessors back attribute access.
  // Both must be registered before a contract that mentions them.
  void register_helper(std::string name, lang::HelperFn fn);
  void register_accessor(std::string name, lang::AccessorFn fn);

  const std::map<std::string, lang::HelperFn>& helpers() const { return helpers_; }
  const std::map<std::string, lang::AccessorFn>& accessors() const { return accessors_; }

  void set_checking(bool enabled) { checking_.store(enabled); }
  bool checking() const { return checking_.load(); }

  std::uint64_t seed() const { return seed_; }

 private:
  mutable std::mutex mutex_;
  std::map<std::string, std::shared_ptr<ContractedFunction>> functions_;
  std::map<std::string, lang::HelperFn> helpers_;
  std::map<std::string, lang::AccessorFn> accessors_;
  std::atomic<bool> checking_;
  std::uint64_t seed_;
};

inline bool ContractedFunction::checking_now() const {
  return override_ ? *override_ : engine_->checking();
}

}  // namespace refineguard
