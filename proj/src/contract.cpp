#include "refineguard/contract.hpp"

#include <fmt/format.h>

#include <cctype>
#include <cstdlib>
#include <set>
#include <utility>

#include "refineguard/errors.hpp"
#include "refineguard/parse.hpp"

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

bool is_identifier_name(const std::string& s) {
  if (s.empty()) return false;
  if (!(s[0] == '_' || std::isalpha(static_cast<unsigned char>(s[0])))) return false;
  for (char c : s)
    if (!(c == '_' || std::isalnum(static_cast<unsigned char>(c)))) return false;
  return true;
}

bool is_reserved_word(const std::string& s) {
  static const std::set<std::string> kReserved = {"and", "or",   "not",   "all",  "any", "for",
                                                  "in",  "True", "False", "None", "return"};
  return kReserved.count(s) > 0;
}

WitnessFrame frame_from(int depth, std::uint64_t seq, const std::map<std::string, Value>& args,
                        const Value* ret) {
  WitnessFrame f;
  f.depth = depth;
  f.seq_no = seq;
  for (const auto& [k, v] : args) f.args.emplace_back(k, render(v));
  if (ret) f.ret = render(*ret);
  return f;
}

WitnessFrame frame_from_record(int depth, const ExecutionRecord& rec) {
  return frame_from(depth, rec.seq_no, rec.args, &rec.ret);
}

}  // namespace

const char* violation_kind_name(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::ArgumentType: return "argument type violation";
    case ViolationKind::ReturnType: return "return type violation";
    case ViolationKind::EntryCondition: return "entry condition violation";
    case ViolationKind::ExitCondition: return "exit condition violation";
  }
  return "violation";
}

std::string ViolationReport::to_string() const {
  std::string out = fmt::format("{} in {}: {}", violation_kind_name(kind), function, detail);
  if (!condition.empty()) out += fmt::format("\n  condition: {}", condition);
  for (const WitnessFrame& w : witnesses) {
    std::string binding;
    for (const auto& [k, v] : w.args) {
      if (!binding.empty()) binding += ", ";
      binding += fmt::format("{} = {}", k, v);
    }
    if (w.ret) binding += fmt::format("{}return = {}", binding.empty() ? "" : ", ", *w.ret);
    std::string role = w.depth == 0 ? "" : fmt::format(" ({} back)", std::string(w.depth, '`'));
    out += fmt::format("\n  call #{}{}: {}", w.seq_no, role, binding);
  }
  return out;
}

ViolationError::ViolationError(ViolationReport report)
    : std::runtime_error(report.to_string()), report_(std::move(report)) {}

std::optional<HyperWitness> check_hyperproperty(
    const ParsedCondition& condition, const std::map<std::string, Value>& current_args,
    const Value& current_ret, const std::vector<RecordPtr>& history,
    const std::map<std::string, lang::HelperFn>* helpers,
    const std::map<std::string, lang::AccessorFn>* accessors) {
  int d = condition.depth;
  if (d < 1) throw ContractMalformedError("check_hyperproperty needs a primed condition");
  if (history.size() < static_cast<std::size_t>(d)) return std::nullopt;  // vacuous

  lang::EvalEnv env;
  env.helpers = helpers;
  env.accessors = accessors;
  env.frames.resize(static_cast<std::size_t>(d) + 1);
  lang::Frame current{&current_args, &current_ret};

  std::vector<RecordPtr> tuple(static_cast<std::size_t>(d));
  std::vector<bool> used(history.size(), false);

  // Every ordered d-tuple of distinct resident records.
  std::function<std::optional<HyperWitness>(int)> assign =
      [&](int slot) -> std::optional<HyperWitness> {
    if (slot == d) {
      env.frames[0] = current;
      for (int k = 1; k <= d; ++k)
        env.frames[static_cast<std::size_t>(k)] = {&tuple[k - 1]->args, &tuple[k - 1]->ret};
      if (!lang::evaluate_condition(condition.expr, env)) return HyperWitness{tuple, false};
      return std::nullopt;
    }
    for (std::size_t i = 0; i < history.size(); ++i) {
      if (used[i]) continue;
      used[i] = true;
      tuple[static_cast<std::size_t>(slot)] = history[i];
      auto bad = assign(slot + 1);
      used[i] = false;
      if (bad) return bad;
    }
    return std::nullopt;
  };
  if (auto bad = assign(0)) return bad;

  // Depth-1 conditions are also checked with the new call in the primed
  // slot, so an asymmetric relation is exercised in both directions no
  // matter which execution the sampler kept.
  if (d == 1) {
    for (const RecordPtr& rec : history) {
      env.frames[0] = {&rec->args, &rec->ret};
      env.frames[1] = current;
      if (!lang::evaluate_condition(condition.expr, env)) return HyperWitness{{rec}, true};
    }
  }
  return std::nullopt;
}

ContractedFunction::ContractedFunction(Engine* engine, std::string name, HostFn fn,
                                       Contract contract, std::uint64_t reservoir_seed)
    : engine_(engine),
      name_(std::move(name)),
      fn_(std::move(fn)),
      contract_(std::move(contract)),
      reservoir_(contract_.reservoir_capacity, reservoir_seed) {
  if (name_.empty()) throw ContractMalformedError("function name must be non-empty");
  if (!fn_) throw ContractMalformedError(fmt::format("{}: no host function given", name_));

  std::set<std::string> declared;
  auto declare = [&](const std::string& arg_name) {
    if (!is_identifier_name(arg_name) || is_reserved_word(arg_name))
      throw ContractMalformedError(
          fmt::format("{}: '{}' is not a usable argument name", name_, arg_name));
    if (!declared.insert(arg_name).second)
      throw ContractMalformedError(fmt::format("{}: duplicate argument '{}'", name_, arg_name));
  };
  for (const auto& [arg_name, type] : contract_.args) declare(arg_name);
  if (contract_.rest_positional) declare(contract_.rest_positional->first);
  if (contract_.rest_keywords) declare(contract_.rest_keywords->first);

  auto compile = [&](const std::string& source, bool is_exit) {
    ParsedCondition cond;
    cond.source = source;
    try {
      cond.expr = lang::parse_condition(source);
    } catch (const lang::ParseError& e) {
      throw ContractMalformedError(
          fmt::format("{}: cannot parse condition \"{}\": {}", name_, source, e.what()));
    }
    lang::ExprInfo info = lang::analyze(cond.expr);
    cond.depth = info.max_depth;
    for (const auto& [ref_name, depth] : info.names) {
      if (ref_name == "return") {
        if (!is_exit)
          throw ContractMalformedError(fmt::format(
              "{}: entry condition \"{}\" cannot use 'return'", name_, source));
        continue;
      }
      if (!declared.count(ref_name))
        throw ContractMalformedError(fmt::format(
            "{}: condition \"{}\" references unknown name '{}'", name_, source, ref_name));
      (void)depth;
    }
    if (!is_exit && info.max_depth > 0)
      throw ContractMalformedError(fmt::format(
          "{}: entry condition \"{}\" cannot reference past executions", name_, source));
    for (const std::string& callee : info.callees)
      if (!lang::is_builtin_callable(callee) && !engine_->helpers().count(callee))
        throw ContractMalformedError(
            fmt::format("{}: condition \"{}\" calls unknown function '{}'", name_, source,
                        callee));
    for (const std::string& attr : info.attrs)
      if (!lang::is_builtin_attr(attr) && !engine_->accessors().count(attr))
        throw ContractMalformedError(fmt::format(
            "{}: condition \"{}\" uses unknown attribute '{}'", name_, source, attr));
    return cond;
  };

  for (const std::string& src : contract_.requires_src) requires_.push_back(compile(src, false));
  for (const std::string& src : contract_.ensures_src) {
    ensures_.push_back(compile(src, true));
    max_depth_ = std::max(max_depth_, ensures_.back().depth);
  }
}


std::map<std::string, Value> ContractedFunction::normalize_args(
    const std::map<std::string, Value>& args) const {
  std::set<std::string> declared;
  for (const auto& [arg_name, type] : contract_.args) declared.insert(arg_name);
  const std::string* pos_bundle =
      contract_.rest_positional ? &contract_.rest_positional->first : nullptr;
  const std::string* kw_bundle =
      contract_.rest_keywords ? &contract_.rest_keywords->first : nullptr;

  std::map<std::string, Value> out;
  std::vector<std::pair<Value, Value>> folded;
  for (const auto& [k, v] : args) {
    if (declared.count(k) || (pos_bundle && k == *pos_bundle) || (kw_bundle && k == *kw_bundle)) {
      out.emplace(k, v);
    } else if (kw_bundle) {
      folded.emplace_back(Value::text(k), v);
    } else {
      throw ContractMalformedError(
          fmt::format("{}: call passed unknown argument '{}'", name_, k));
    }
  }
  for (const std::string& want : declared)
    if (!out.count(want))
      throw ContractMalformedError(fmt::format("{}: call is missing argument '{}'", name_, want));

  if (pos_bundle && !out.count(*pos_bundle)) out.emplace(*pos_bundle, Value::tuple({}));
  if (kw_bundle) {
    Value bundle = Value::map({});
    auto it = out.find(*kw_bundle);
    if (it != out.end() && it->second.is_map()) bundle = deep_snapshot(it->second);
    for (auto& [k, v] : folded) bundle.map_data_mut().set(k, v);
    out.erase(*kw_bundle);
    out.emplace(*kw_bundle, std::move(bundle));
  }
  return out;
}

void ContractedFunction::check_arg_types(const std::map<std::string, Value>& args,
                                          std::uint64_t seq) const {
  auto blame = [&](const std::string& arg_name, const Value& v, const std::string& type_name) {
    ViolationReport report;
    report.kind = ViolationKind::ArgumentType;
    report.function = name_;
    report.detail = fmt::format("argument {}: {} is not a member of {}", arg_name, render(v),
                                type_name);
    report.witnesses.push_back(frame_from(0, seq, args, nullptr));
    throw ViolationError(std::move(report));
  };

  for (const auto& [arg_name, type] : contract_.args) {
    if (!type) continue;
    const Value& v = args.at(arg_name);
    if (!type->check(v)) blame(arg_name, v, type->name());
  }
  if (contract_.rest_positional) {
    const auto& [bundle_name, elem] = *contract_.rest_positional;
    const Value& bundle = args.at(bundle_name);
    if (!bundle.is_tuple()) blame(bundle_name, bundle, "Tuple (extra positional bundle)");
    if (elem)
      for (const Value& item : bundle.seq_items())
        if (!elem->check(item))
          blame(bundle_name, item, fmt::format("{} (element of extra positional bundle)",
                                               elem->name()));
  }
  if (contract_.rest_keywords) {
    const auto& [bundle_name, value_type] = *contract_.rest_keywords;
    const Value& bundle = args.at(bundle_name);
    if (!bundle.is_map()) blame(bundle_name, bundle, "Map (extra keyword bundle)");
    for (const auto& [k, v] : bundle.map_data().entries) {
      if (!k.is_text()) blame(bundle_name, k, "String (extra keyword name)");
      if (value_type && !value_type->check(v))
        blame(bundle_name, v,
              fmt::format("{} (element of extra keyword bundle)", value_type->name()));
    }
  }
}

std::map<std::string, Value> ContractedFunction::snapshot_args(
    const std::map<std::string, Value>& args, bool& shallow) const {
  std::map<std::string, Value> snap;
  for (const auto& [k, v] : args) {
    try {
      snap.emplace(k, deep_snapshot(v));
    } catch (const SnapshotUnsupported&) {
      shallow = true;
      snap.emplace(k, v);  // fall back to the live reference
    }
  }
  return snap;
}

void ContractedFunction::raise_condition_violation(const ParsedCondition& cond,
                                                   ViolationKind kind, std::uint64_t seq,
                                                   const std::map<std::string, Value>& args,
                                                   const Value* ret,
                                                   const HyperWitness* hyper) const {
  ViolationReport report;
  report.kind = kind;
  report.function = name_;
  report.condition = cond.source;
  if (hyper && hyper->swapped) {
    report.detail =
        "condition is false with the new call in the primed slot and the sampled call current";
    report.witnesses.push_back(frame_from_record(0, *hyper->tuple[0]));
    report.witnesses.push_back(frame_from(1, seq, args, ret));
  } else {
    report.detail = hyper ? "condition is false against sampled past executions"
                          : "condition evaluated to False";
    report.witnesses.push_back(frame_from(0, seq, args, ret));
    if (hyper)
      for (std::size_t k = 0; k < hyper->tuple.size(); ++k)
        report.witnesses.push_back(frame_from_record(static_cast<int>(k) + 1, *hyper->tuple[k]));
  }
  throw ViolationError(std::move(report));
}

void ContractedFunction::check_entry(const std::map<std::string, Value>& snap_args,
                                     std::uint64_t seq) const {
  for (const ParsedCondition& cond : requires_) {
    lang::EvalEnv env;
    env.helpers = &engine_->helpers();
    env.accessors = &engine_->accessors();
    env.frames = {lang::Frame{&snap_args, nullptr}};
    bool ok;
    try {
      ok = lang::evaluate_condition(cond.expr, env);
    } catch (const lang::EvalError& e) {
      throw ContractMalformedError(fmt::format("{}: entry condition \"{}\" failed to evaluate: {}",
                                               name_, cond.source, e.what()));
    }
    if (!ok)
      raise_condition_violation(cond, ViolationKind::EntryCondition, seq, snap_args, nullptr,
                                nullptr);
  }
}

Value ContractedFunction::call_checked(const std::map<std::string, Value>& args) {
  std::map<std::string, Value> live = normalize_args(args);
  std::uint64_t seq, gen;
  {
    std::lock_guard<std::mutex> lock(mutex_);
    seq = next_seq_++;
    gen = generation_;
  }
  check_arg_types(live, seq);
  bool shallow = false;
  std::map<std::string, Value> snap = snapshot_args(live, shallow);
  check_entry(snap, seq);

  Value live_ret = fn_(live);

  if (contract_.return_type && !contract_.return_type->check(live_ret)) {
    ViolationReport report;
    report.kind = ViolationKind::ReturnType;
    report.function = name_;
    report.detail = fmt::format("return value {} is not a member of {}", render(live_ret),
                                contract_.return_type->name());
    report.witnesses.push_back(frame_from(0, seq, snap, &live_ret));
    throw ViolationError(std::move(report));
  }

  Value snap_ret;
  try {
    snap_ret = deep_snapshot(live_ret);
  } catch (const SnapshotUnsupported&) {
    shallow = true;
    snap_ret = live_ret;
  }

  std::vector<RecordPtr> past = history();
  for (const ParsedCondition& cond : ensures_) {
    try {
      if (cond.depth == 0) {
        lang::EvalEnv env;
        env.helpers = &engine_->helpers();
        env.accessors = &engine_->accessors();
        env.frames = {lang::Frame{&snap, &snap_ret}};
        if (!lang::evaluate_condition(cond.expr, env))
          raise_condition_violation(cond, ViolationKind::ExitCondition, seq, snap, &snap_ret,
                                    nullptr);
      } else {
        auto bad = check_hyperproperty(cond, snap, snap_ret, past, &engine_->helpers(),
                                       &engine_->accessors());
        if (bad)
          raise_condition_violation(cond, ViolationKind::ExitCondition, seq, snap, &snap_ret,
                                    &*bad);
      }
    } catch (const lang::EvalError& e) {
      throw ContractMalformedError(fmt::format("{}: exit condition \"{}\" failed to evaluate: {}",
                                               name_, cond.source, e.what()));
    }
  }

  // History only exists to serve primed conditions; depth-0 contracts keep
  // none. Shallow records (unsnapshottable handles) are never stored.
  if (max_depth_ >= 1 && !shallow) {
    auto record = std::make_shared<const ExecutionRecord>(
        ExecutionRecord{std::move(snap), std::move(snap_ret), seq, false});
    std::lock_guard<std::mutex> lock(mutex_);
    if (generation_ == gen) reservoir_.offer(std::move(record));
  }
  return live_ret;
}

bool ContractedFunction::admissible(const std::map<std::string, Value>& args) const {
  try {
    std::map<std::string, Value> live = normalize_args(args);
    check_arg_types(live, 0);
    bool shallow = false;
    std::map<std::string, Value> snap = snapshot_args(live, shallow);
    check_entry(snap, 0);
    return true;
  } catch (const ViolationError&) {
    return false;
  }
}

std::vector<RecordPtr> ContractedFunction::history() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return reservoir_.slots();
}

std::uint64_t ContractedFunction::offers_seen() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return reservoir_.seen();
}

ReservoirSampler<RecordPtr> ContractedFunction::swap_reservoir(
    ReservoirSampler<RecordPtr> fresh) {
  std::lock_guard<std::mutex> lock(mutex_);
  ++generation_;  // calls that started against the old sampler must not offer
  std::swap(reservoir_, fresh);
  return fresh;
}

Engine::Engine(std::uint64_t seed) : seed_(seed) {
  const char* disable = std::getenv("REFINEGUARD_DISABLE");
  checking_.store(!(disable && std::string(disable) == "1"));
}

ContractedFunction& Engine::register_function(std::string name, HostFn fn, Contract contract) {
  auto fresh = std::make_shared<ContractedFunction>(this, name, std::move(fn),
                                                    std::move(contract), mix_seed(seed_, name));
  std::lock_guard<std::mutex> lock(mutex_);
  auto [it, inserted] = functions_.emplace(std::move(name), std::move(fresh));
  if (!inserted)
    throw ContractMalformedError(fmt::format("function '{}' is already registered", it->first));
  return *it->second;
}

ContractedFunction* Engine::find(const std::string& name) {
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = functions_.find(name);
  return it == functions_.end() ? nullptr : it->second.get();
}

ContractedFunction& Engine::at(const std::string& name) {
  if (ContractedFunction* f = find(name)) return *f;
  throw UnknownFunctionError(fmt::format("no function named '{}' is registered", name));
}

std::vector<std::string> Engine::function_names() const {
  std::lock_guard<std::mutex> lock(mutex_);
  std::vector<std::string> names;
  names.reserve(functions_.size());
  for (const auto& [name, fn] : functions_) names.push_back(name);
  return names;
}

void Engine::register_helper(std::string name, lang::HelperFn fn) {
  if (!is_identifier_name(name) || is_reserved_word(name) || lang::is_builtin_callable(name))
    throw ContractMalformedError(fmt::format("'{}' is not a usable helper name", name));
  std::lock_guard<std::mutex> lock(mutex_);
  if (!helpers_.emplace(std::move(name), std::move(fn)).second)
    throw ContractMalformedError("helper is already registered");
}

void Engine::register_accessor(std::string name, lang::AccessorFn fn) {
  if (!is_identifier_name(name) || is_reserved_word(name) || lang::is_builtin_attr(name))
    throw ContractMalformedError(fmt::format("'{}' is not a usable attribute name", name));
  std::lock_guard<std::mutex> lock(mutex_);
  if (!accessors_.emplace(std::move(name), std::move(fn)).second)
    throw ContractMalformedError("attribute accessor is already registered");
}

}  // namespace refineguard
