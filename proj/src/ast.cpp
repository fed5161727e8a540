#include "refineguard/ast.hpp"

#include <fmt/format.h>

#include <algorithm>

namespace refineguard::lang {

ExprPtr make_expr(Expr e) { return std::make_shared<const Expr>(std::move(e)); }

namespace {

void walk(const ExprPtr& e, ExprInfo& info, std::vector<std::string>& bound) {
  std::visit(
      [&](const auto& node) {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, Literal>) {
          // nothing
        } else if constexpr (std::is_same_v<T, NameRef>) {
          // A quantifier variable shadows only unprimed uses; a primed name
          // always refers to a past execution's argument.
          bool shadowed = node.depth == 0 &&
                          std::find(bound.begin(), bound.end(), node.name) != bound.end();
          if (!shadowed) {
            auto [it, inserted] = info.names.emplace(node.name, node.depth);
            if (!inserted) it->second = std::max(it->second, node.depth);
            info.max_depth = std::max(info.max_depth, node.depth);
          }
        } else if constexpr (std::is_same_v<T, Unary>) {
          walk(node.operand, info, bound);
        } else if constexpr (std::is_same_v<T, Binary>) {
          walk(node.lhs, info, bound);
          walk(node.rhs, info, bound);
        } else if constexpr (std::is_same_v<T, Index>) {
          walk(node.object, info, bound);
          walk(node.subscript, info, bound);
        } else if constexpr (std::is_same_v<T, SliceExpr>) {
          walk(node.object, info, bound);
          if (node.start) walk(node.start, info, bound);
          if (node.stop) walk(node.stop, info, bound);
          if (node.step) walk(node.step, info, bound);
        } else if constexpr (std::is_same_v<T, Attr>) {
          walk(node.object, info, bound);
          info.attrs.insert(node.attr);
        } else if constexpr (std::is_same_v<T, CallExpr>) {
          info.callees.insert(node.callee);
          for (const ExprPtr& a : node.args) walk(a, info, bound);
        } else if constexpr (std::is_same_v<T, Quantifier>) {
          walk(node.iterable, info, bound);
          bound.push_back(node.var);
          walk(node.body, info, bound);
          bound.pop_back();
        }
      },
      e->node);
}

// Binding levels, loose to tight. Postfix forms and atoms never need parens.
enum Level {
  kIff = 0,
  kImplies = 1,
  kOr = 2,
  kAnd = 3,
  kNot = 4,
  kCmp = 5,
  kAdd = 6,
  kMul = 7,
  kUnary = 8,
  kPow = 9,
  kPostfix = 10,
};

int binary_level(BinaryOp op) {
  switch (op) {
    case BinaryOp::Iff: return kIff;
    case BinaryOp::Implies: return kImplies;
    case BinaryOp::Or: return kOr;
    case BinaryOp::And: return kAnd;
    case BinaryOp::Lt:
    case BinaryOp::Le:
    case BinaryOp::Gt:
    case BinaryOp::Ge:
    case BinaryOp::Eq:
    case BinaryOp::Ne: return kCmp;
    case BinaryOp::Add:
    case BinaryOp::Sub: return kAdd;
    case BinaryOp::Mul:
    case BinaryOp::Div:
    case BinaryOp::Mod: return kMul;
    case BinaryOp::Pow: return kPow;
  }
  return kPostfix;
}

const char* binary_token(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Div: return "/";
    case BinaryOp::Mod: return "%";
    case BinaryOp::Pow: return "**";
    case BinaryOp::Lt: return "<";
    case BinaryOp::Le: return "<=";
    case BinaryOp::Gt: return ">";
    case BinaryOp::Ge: return ">=";
    case BinaryOp::Eq: return "==";
    case BinaryOp::Ne: return "!=";
    case BinaryOp::And: return "and";
    case BinaryOp::Or: return "or";
    case BinaryOp::Implies: return "-->";
    case BinaryOp::Iff: return "<-->";
  }
  return "?";
}

int node_level(const ExprPtr& e);

std::string render_at(const ExprPtr& e, int required) {
  std::string body = std::visit(
      [&](const auto& node) -> std::string {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, Literal>) {
          return render(node.value);
        } else if constexpr (std::is_same_v<T, NameRef>) {
          return node.name + std::string(node.depth, '`');
        } else if constexpr (std::is_same_v<T, Unary>) {
          if (node.op == UnaryOp::Not) return "not " + render_at(node.operand, kNot);
          const char* tok = node.op == UnaryOp::Neg ? "-" : "+";
          return tok + render_at(node.operand, kUnary);
        } else if constexpr (std::is_same_v<T, Binary>) {
          if (node.op == BinaryOp::Pow) {
            // Base must be a postfix form; the exponent slot admits a
            // unary sign (2 ** -3) and chains right-associatively.
            return fmt::format("{} ** {}", render_at(node.lhs, kPostfix),
                               render_at(node.rhs, kUnary));
          }
          int level = binary_level(node.op);
          bool right_assoc = node.op == BinaryOp::Implies;
          // Comparisons do not chain, so both sides must bind strictly tighter.
          bool non_assoc = level == kCmp;
          int left_req = (right_assoc || non_assoc) ? level + 1 : level;
          int right_req = (right_assoc && !non_assoc) ? level : level + 1;
          return fmt::format("{} {} {}", render_at(node.lhs, left_req),
                             binary_token(node.op), render_at(node.rhs, right_req));
        } else if constexpr (std::is_same_v<T, Index>) {
          return fmt::format("{}[{}]", render_at(node.object, kPostfix),
                             render_at(node.subscript, 0));
        } else if constexpr (std::is_same_v<T, SliceExpr>) {
          std::string inner;
          if (node.start) inner += render_at(node.start, 0);
          inner += ":";
          if (node.stop) inner += render_at(node.stop, 0);
          if (node.step) inner += ":" + render_at(node.step, 0);
          return fmt::format("{}[{}]", render_at(node.object, kPostfix), inner);
        } else if constexpr (std::is_same_v<T, Attr>) {
          return fmt::format("{}.{}", render_at(node.object, kPostfix), node.attr);
        } else if constexpr (std::is_same_v<T, CallExpr>) {
          std::string args;
          for (const ExprPtr& a : node.args) {
            if (!args.empty()) args += ", ";
            args += render_at(a, 0);
          }
          return fmt::format("{}({})", node.callee, args);
        } else if constexpr (std::is_same_v<T, Quantifier>) {
          return fmt::format("{}({} for {} in {})", node.is_all ? "all" : "any",
                             render_at(node.body, 0), node.var, render_at(node.iterable, 0));
        }
      },
      e->node);
  if (node_level(e) < required) return "(" + body + ")";
  return body;
}

int node_level(const ExprPtr& e) {
  return std::visit(
      [](const auto& node) -> int {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, Unary>) {
          return node.op == UnaryOp::Not ? kNot : kUnary;
        } else if constexpr (std::is_same_v<T, Binary>) {
          return binary_level(node.op);
        } else {
          return kPostfix;  // atoms and postfix forms
        }
      },
      e->node);
}

}  // namespace

ExprInfo analyze(const ExprPtr& e) {
  ExprInfo info;
  std::vector<std::string> bound;
  walk(e, info, bound);
  return info;
}

std::string unparse(const ExprPtr& e) { return render_at(e, 0); }

}  // namespace refineguard::lang
