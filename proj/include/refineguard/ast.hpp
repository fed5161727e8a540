#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "refineguard/value.hpp"

namespace refineguard::lang {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

enum class UnaryOp { Neg, Pos, Not };

enum class BinaryOp {
  Add, Sub, Mul, Div, Mod, Pow,
  Lt, Le, Gt, Ge, Eq, Ne,
  And, Or, Implies, Iff,
};

struct Literal {
  Value value;
};

// A name with a backtick suffix: depth 0 is the current execution, depth k
// the k-th primed past execution. "return" is an ordinary name here; only
// registration rules restrict where it may appear.
struct NameRef {
  std::string name;
  int depth = 0;
};

struct Unary {
  UnaryOp op;
  ExprPtr operand;
};

struct Binary {
  BinaryOp op;
  ExprPtr lhs;
  ExprPtr rhs;
};

struct Index {
  ExprPtr object;
  ExprPtr subscript;
};

struct SliceExpr {
  ExprPtr object;
  ExprPtr start;  // any of these may be null for an omitted part
  ExprPtr stop;
  ExprPtr step;
};

struct Attr {
  ExprPtr object;
  std::string attr;
};

struct CallExpr {
  std::string callee;
  std::vector<ExprPtr> args;
};

// all(body for var in iterable) / any(...): the only binding form.
struct Quantifier {
  bool is_all;
  std::string var;
  ExprPtr iterable;
  ExprPtr body;
};

struct Expr {
  std::variant<Literal, NameRef, Unary, Binary, Index, SliceExpr, Attr, CallExpr, Quantifier>
      node;
};

ExprPtr make_expr(Expr e);

// Static facts about an expression, used to validate a condition when a
// contract is registered.
struct ExprInfo {
  std::map<std::string, int> names;  // free name -> max backtick depth seen
  int max_depth = 0;
  std::set<std::string> callees;
  std::set<std::string> attrs;
};

ExprInfo analyze(const ExprPtr& e);

// Round-trippable source form with minimal parentheses.
std::string unparse(const ExprPtr& e);

}  // namespace refineguard::lang
