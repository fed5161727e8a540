#pragma once

#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "refineguard/ast.hpp"
#include "refineguard/value.hpp"

namespace refineguard::lang {

// Evaluation failure inside a condition. At check time this blames the
// contract, not the checked value.
class EvalError : public std::runtime_error {
 public:
  enum class Kind { NameUnbound, Type, Index };

  EvalError(Kind kind, std::string message) : std::runtime_error(std::move(message)), kind_(kind) {}

  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

using HelperFn = std::function<Value(const std::vector<Value>&)>;
using AccessorFn = std::function<Value(const Value&)>;

// One execution's bindings: argument values plus the return value when the
// condition runs at exit. frames[0] is the current execution; frames[k]
// backs names primed with k backticks.
struct Frame {
  const std::map<std::string, Value>* args = nullptr;
  const Value* ret = nullptr;
};

struct EvalEnv {
  std::vector<Frame> frames;
  const std::map<std::string, HelperFn>* helpers = nullptr;
  const std::map<std::string, AccessorFn>* accessors = nullptr;
};

// True for names the evaluator resolves itself (len, abs, ...).
bool is_builtin_callable(const std::string& name);

// True for attributes with built-in meaning (shape on an n-d array).
bool is_builtin_attr(const std::string& name);

Value evaluate(const ExprPtr& e, const EvalEnv& env);

// Evaluates and insists on a Bool; a non-Bool result is an EvalError of
// kind Type.
bool evaluate_condition(const ExprPtr& e, const EvalEnv& env);

}  // namespace refineguard::lang
