#include "refineguard/eval.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

#include "refineguard/errors.hpp"

namespace refineguard::lang {

namespace {

[[noreturn]] void type_error(std::string message) {
  throw EvalError(EvalError::Kind::Type, std::move(message));
}

[[noreturn]] void index_error(std::string message) {
  throw EvalError(EvalError::Kind::Index, std::move(message));
}

[[noreturn]] void unbound_error(std::string message) {
  throw EvalError(EvalError::Kind::NameUnbound, std::move(message));
}

const char* tag_name(const Value& v) {
  if (v.is_none()) return "None";
  if (v.is_bool()) return "Bool";
  if (v.is_int()) return "Int";
  if (v.is_float()) return "Float";
  if (v.is_text()) return "Text";
  if (v.is_seq()) return "Seq";
  if (v.is_tuple()) return "Tuple";
  if (v.is_map()) return "Map";
  if (v.is_ndarray()) return "NdArray";
  return "HostHandle";
}

bool as_strict_bool(const Value& v, const char* where) {
  if (!v.is_bool()) type_error(fmt::format("{} must be Bool, got {}", where, render(v)));
  return v.as_bool();
}

// UTF-8 code points as byte substrings; malformed tails degrade to single
// bytes rather than failing.
std::vector<std::string> text_chars(const std::string& s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    std::size_t len = 1;
    if ((c & 0xE0) == 0xC0) len = 2;
    else if ((c & 0xF0) == 0xE0) len = 3;
    else if ((c & 0xF8) == 0xF0) len = 4;
    len = std::min(len, s.size() - i);
    out.push_back(s.substr(i, len));
    i += len;
  }
  return out;
}

// Clamps an Int to a host index; anything beyond +/-2^62 behaves like an
// index far outside any real container.
long long to_index(const Value& v, const char* what) {
  if (!v.is_int()) type_error(fmt::format("{} must be Int, got {}", what, render(v)));
  const BigInt& n = v.as_int();
  static const BigInt kCap = BigInt(1) << 62;
  if (n > kCap) return 1ll << 62;
  if (n < -kCap) return -(1ll << 62);
  return static_cast<long long>(n);
}

struct SliceBounds {
  long long start, stop, step;
};

// The standard extended-slice index adjustment: negative indices count from
// the end, out-of-bounds values clamp, and omitted parts take direction-
// dependent defaults.
SliceBounds resolve_slice(std::optional<long long> start, std::optional<long long> stop,
                          std::optional<long long> step_opt, long long length) {
  long long step = step_opt.value_or(1);
  if (step == 0) type_error("slice step cannot be zero");
  auto adjust = [&](long long v, bool is_stop) {
    if (v < 0) {
      v += length;
      if (v < 0) v = step < 0 ? -1 : 0;
    } else if (v >= length) {
      v = step < 0 ? length - 1 : length;
    }
    (void)is_stop;
    return v;
  };
  long long lo = start ? adjust(*start, false) : (step < 0 ? length - 1 : 0);
  long long hi = stop ? adjust(*stop, true) : (step < 0 ? -1 : length);
  return {lo, hi, step};
}

template <typename Take>
void for_slice(const SliceBounds& b, Take take) {
  if (b.step > 0) {
    for (long long i = b.start; i < b.stop; i += b.step) take(static_cast<std::size_t>(i));
  } else {
    for (long long i = b.start; i > b.stop; i += b.step) take(static_cast<std::size_t>(i));
  }
}

Value numeric_add(const Value& a, const Value& b) {
  if (a.is_int() && b.is_int()) return Value::integer(a.as_int() + b.as_int());
  return Value::real(a.numeric_as_double() + b.numeric_as_double());
}

Value arith_binary(BinaryOp op, const Value& a, const Value& b) {
  const char* tok = op == BinaryOp::Add   ? "+"
                    : op == BinaryOp::Sub ? "-"
                    : op == BinaryOp::Mul ? "*"
                    : op == BinaryOp::Div ? "/"
                    : op == BinaryOp::Mod ? "%"
                                          : "**";
  if (op == BinaryOp::Add) {
    if (a.is_text() && b.is_text()) return Value::text(a.as_text() + b.as_text());
    if (a.is_seq() && b.is_seq()) {
      std::vector<Value> items = a.seq_items();
      items.insert(items.end(), b.seq_items().begin(), b.seq_items().end());
      return Value::seq(std::move(items));
    }
    if (a.is_tuple() && b.is_tuple()) {
      std::vector<Value> items = a.seq_items();
      items.insert(items.end(), b.seq_items().begin(), b.seq_items().end());
      return Value::tuple(std::move(items));
    }
  }
  if (!a.is_numeric() || !b.is_numeric())
    type_error(fmt::format("'{}' not supported between {} and {}", tok, tag_name(a), tag_name(b)));

  switch (op) {
    case BinaryOp::Add:
      return numeric_add(a, b);
    case BinaryOp::Sub:
      if (a.is_int() && b.is_int()) return Value::integer(a.as_int() - b.as_int());
      return Value::real(a.numeric_as_double() - b.numeric_as_double());
    case BinaryOp::Mul:
      if (a.is_int() && b.is_int()) return Value::integer(a.as_int() * b.as_int());
      return Value::real(a.numeric_as_double() * b.numeric_as_double());
    case BinaryOp::Div:
      // True division, IEEE all the way: x/0 is +/-inf, 0/0 is NaN.
      return Value::real(a.numeric_as_double() / b.numeric_as_double());
    case BinaryOp::Mod: {
      if (a.is_int() && b.is_int()) {
        if (b.as_int() == 0) return Value::real(std::nan(""));
        BigInt r = a.as_int() % b.as_int();  // truncated; shift to floored
        if (r != 0 && ((r < 0) != (b.as_int() < 0))) r += b.as_int();
        return Value::integer(r);
      }
      double x = a.numeric_as_double(), y = b.numeric_as_double();
      double r = std::fmod(x, y);
      if (r != 0.0 && !std::isnan(r) && ((r < 0.0) != (y < 0.0))) r += y;
      return Value::real(r);
    }
    case BinaryOp::Pow: {
      if (a.is_int() && b.is_int() && b.as_int() >= 0) {
        const BigInt& base = a.as_int();
        const BigInt& exp = b.as_int();
        // Exact only while the result stays modest; msb(|base|)*exp bounds
        // the bit length.
        BigInt mag = abs(base);
        bool small_result =
            mag <= 1 || exp == 0 || BigInt(msb(mag) + 1) * exp <= 65536;
        if (small_result) {
          if (mag <= 1) {
            BigInt r = mag == 0 ? BigInt(exp == 0 ? 1 : 0) : BigInt(1);
            if (base < 0 && (exp & 1) == 1) r = -r;
            return Value::integer(r);
          }
          return Value::integer(pow(base, static_cast<unsigned>(exp)));
        }
      }
      return Value::real(std::pow(a.numeric_as_double(), b.numeric_as_double()));
    }
    default:
      type_error("unreachable arithmetic operator");
  }
}

Value compare_binary(BinaryOp op, const Value& a, const Value& b) {
  if (op == BinaryOp::Eq) return Value::boolean(value_eq(a, b));
  if (op == BinaryOp::Ne) return Value::boolean(!value_eq(a, b));
  CompareResult r = value_compare(a, b);
  if (r == CompareResult::Incomparable) {
    const char* tok = op == BinaryOp::Lt   ? "<"
                      : op == BinaryOp::Le ? "<="
                      : op == BinaryOp::Gt ? ">"
                                           : ">=";
    type_error(fmt::format("'{}' not supported between {} and {}", tok, tag_name(a), tag_name(b)));
  }
  if (r == CompareResult::Unordered) return Value::boolean(false);  // NaN never orders
  switch (op) {
    case BinaryOp::Lt: return Value::boolean(r == CompareResult::Less);
    case BinaryOp::Le: return Value::boolean(r != CompareResult::Greater);
    case BinaryOp::Gt: return Value::boolean(r == CompareResult::Greater);
    default: return Value::boolean(r != CompareResult::Less);
  }
}

class Evaluator {
 public:
  explicit Evaluator(const EvalEnv& env) : env_(env) {}

  Value eval(const ExprPtr& e) {
    return std::visit([&](const auto& node) { return dispatch(node); }, e->node);
  }

 private:
  Value dispatch(const Literal& node) { return node.value; }

  Value dispatch(const NameRef& node) {
    if (node.depth == 0) {
      for (auto it = locals_.rbegin(); it != locals_.rend(); ++it)
        if (it->first == node.name) return it->second;
    }
    if (static_cast<std::size_t>(node.depth) >= env_.frames.size())
      unbound_error(fmt::format("'{}{}' refers to a past execution that is not bound here",
                                node.name, std::string(node.depth, '`')));
    const Frame& frame = env_.frames[node.depth];
    if (node.name == "return") {
      if (!frame.ret) unbound_error("'return' is only bound in an exit condition");
      return *frame.ret;
    }
    if (frame.args) {
      auto it = frame.args->find(node.name);
      if (it != frame.args->end()) return it->second;
    }
    unbound_error(fmt::format("unbound name '{}'", node.name));
  }

  Value dispatch(const Unary& node) {
    Value v = eval(node.operand);
    switch (node.op) {
      case UnaryOp::Not:
        return Value::boolean(!as_strict_bool(v, "operand of 'not'"));
      case UnaryOp::Neg:
        if (v.is_int()) return Value::integer(-v.as_int());
        if (v.is_float()) return Value::real(-v.as_float());
        type_error(fmt::format("unary '-' needs a number, got {}", tag_name(v)));
      case UnaryOp::Pos:
        if (v.is_numeric()) return v;
        type_error(fmt::format("unary '+' needs a number, got {}", tag_name(v)));
    }
    type_error("unreachable unary operator");
  }

  Value dispatch(const Binary& node) {
    switch (node.op) {
      case BinaryOp::And: {
        if (!as_strict_bool(eval(node.lhs), "operand of 'and'")) return Value::boolean(false);
        return Value::boolean(as_strict_bool(eval(node.rhs), "operand of 'and'"));
      }
      case BinaryOp::Or: {
        if (as_strict_bool(eval(node.lhs), "operand of 'or'")) return Value::boolean(true);
        return Value::boolean(as_strict_bool(eval(node.rhs), "operand of 'or'"));
      }
      case BinaryOp::Implies: {
        if (!as_strict_bool(eval(node.lhs), "operand of '-->'")) return Value::boolean(true);
        return Value::boolean(as_strict_bool(eval(node.rhs), "operand of '-->'"));
      }
      case BinaryOp::Iff: {
        bool l = as_strict_bool(eval(node.lhs), "operand of '<-->'");
        bool r = as_strict_bool(eval(node.rhs), "operand of '<-->'");
        return Value::boolean(l == r);
      }
      case BinaryOp::Eq:
      case BinaryOp::Ne:
      case BinaryOp::Lt:
      case BinaryOp::Le:
      case BinaryOp::Gt:
      case BinaryOp::Ge:
        return compare_binary(node.op, eval(node.lhs), eval(node.rhs));
      default:
        return arith_binary(node.op, eval(node.lhs), eval(node.rhs));
    }
  }

  Value dispatch(const Index& node) {
    Value obj = eval(node.object);
    Value sub = eval(node.subscript);
    if (obj.is_seq() || obj.is_tuple()) {
      const auto& items = obj.seq_items();
      return items[checked_index(sub, items.size())];
    }
    if (obj.is_text()) {
      auto chars = text_chars(obj.as_text());
      return Value::text(chars[checked_index(sub, chars.size())]);
    }
    if (obj.is_ndarray()) {
      const NdArrayData& a = obj.array();
      if (a.shape.empty()) index_error("cannot index a rank-0 array");
      std::size_t i = checked_index(sub, a.shape[0]);
      if (a.shape.size() == 1) return Value::real(a.elems[i]);
      std::vector<std::size_t> sub_shape(a.shape.begin() + 1, a.shape.end());
      std::size_t stride = 1;
      for (std::size_t extent : sub_shape) stride *= extent;
      std::vector<double> elems(a.elems.begin() + i * stride, a.elems.begin() + (i + 1) * stride);
      return Value::ndarray(sub_shape, elems);
    }
    if (obj.is_map()) {
      if (!sub.is_hashable()) type_error(fmt::format("unhashable key: {}", render(sub)));
      if (const Value* v = obj.map_data().find(sub)) return *v;
      index_error(fmt::format("key not found: {}", render(sub)));
    }
    type_error(fmt::format("{} is not indexable", tag_name(obj)));
  }

  std::size_t checked_index(const Value& sub, std::size_t length) {
    long long i = to_index(sub, "index");
    long long n = static_cast<long long>(length);
    if (i < 0) i += n;
    if (i < 0 || i >= n)
      index_error(fmt::format("index {} out of range for length {}", render(sub), length));
    return static_cast<std::size_t>(i);
  }

  Value dispatch(const SliceExpr& node) {
    Value obj = eval(node.object);
    auto part = [&](const ExprPtr& e) -> std::optional<long long> {
      if (!e) return std::nullopt;
      return to_index(eval(e), "slice bound");
    };
    std::optional<long long> start = part(node.start), stop = part(node.stop),
                             step = part(node.step);

    if (obj.is_seq() || obj.is_tuple()) {
      const auto& items = obj.seq_items();
      SliceBounds b = resolve_slice(start, stop, step, static_cast<long long>(items.size()));
      std::vector<Value> out;
      for_slice(b, [&](std::size_t i) { out.push_back(items[i]); });
      return obj.is_seq() ? Value::seq(std::move(out)) : Value::tuple(std::move(out));
    }
    if (obj.is_text()) {
      auto chars = text_chars(obj.as_text());
      SliceBounds b = resolve_slice(start, stop, step, static_cast<long long>(chars.size()));
      std::string out;
      for_slice(b, [&](std::size_t i) { out += chars[i]; });
      return Value::text(out);
    }
    if (obj.is_ndarray() && obj.array().shape.size() == 1) {
      const NdArrayData& a = obj.array();
      SliceBounds b = resolve_slice(start, stop, step, static_cast<long long>(a.shape[0]));
      std::vector<double> out;
      for_slice(b, [&](std::size_t i) { out.push_back(a.elems[i]); });
      return Value::ndarray({out.size()}, out);
    }
    type_error(fmt::format("{} does not support slicing", tag_name(obj)));
  }

  Value dispatch(const Attr& node) {
    Value obj = eval(node.object);
    if (node.attr == "shape" && obj.is_ndarray()) {
      std::vector<Value> extents;
      for (std::size_t e : obj.array().shape)
        extents.push_back(Value::integer(static_cast<long long>(e)));
      return Value::tuple(std::move(extents));
    }
    if (env_.accessors) {
      auto it = env_.accessors->find(node.attr);
      if (it != env_.accessors->end()) {
        try {
          return it->second(obj);
        } catch (const EvalError&) {
          throw;
        } catch (const std::exception& e) {
          type_error(fmt::format("attribute '{}' raised: {}", node.attr, e.what()));
        }
      }
    }
    type_error(fmt::format("unknown attribute '{}' on {}", node.attr, tag_name(obj)));
  }

  Value dispatch(const CallExpr& node) {
    std::vector<Value> args;
    args.reserve(node.args.size());
    for (const ExprPtr& a : node.args) args.push_back(eval(a));
    if (is_builtin_callable(node.callee)) return builtin(node.callee, args);
    if (env_.helpers) {
      auto it = env_.helpers->find(node.callee);
      if (it != env_.helpers->end()) {
        try {
          return it->second(args);
        } catch (const EvalError&) {
          throw;
        } catch (const std::exception& e) {
          type_error(fmt::format("helper '{}' raised: {}", node.callee, e.what()));
        }
      }
    }
    unbound_error(fmt::format("unknown function '{}'", node.callee));
  }

  Value dispatch(const Quantifier& node) {
    std::vector<Value> items = iterate(eval(node.iterable));
    for (const Value& item : items) {
      locals_.emplace_back(node.var, item);
      bool ok;
      try {
        ok = as_strict_bool(eval(node.body), "quantifier body");
      } catch (...) {
        locals_.pop_back();
        throw;
      }
      locals_.pop_back();
      if (node.is_all && !ok) return Value::boolean(false);
      if (!node.is_all && ok) return Value::boolean(true);
    }
    return Value::boolean(node.is_all);
  }

  std::vector<Value> iterate(const Value& v) {
    if (v.is_seq() || v.is_tuple()) return v.seq_items();
    if (v.is_text()) {
      std::vector<Value> out;
      for (std::string& c : text_chars(v.as_text())) out.push_back(Value::text(std::move(c)));
      return out;
    }
    if (v.is_map()) {
      std::vector<Value> keys;
      for (const auto& entry : v.map_data().entries) keys.push_back(entry.first);
      return keys;
    }
    if (v.is_ndarray()) {
      std::vector<Value> out;
      for (double d : v.array().elems) out.push_back(Value::real(d));
      return out;
    }
    type_error(fmt::format("{} is not iterable", tag_name(v)));
  }

  Value builtin(const std::string& name, const std::vector<Value>& args) {
    auto arity = [&](std::size_t lo, std::size_t hi) {
      if (args.size() < lo || args.size() > hi)
        type_error(fmt::format("{}() takes {} to {} arguments, got {}", name, lo, hi,
                               args.size()));
    };
    if (name == "len") {
      arity(1, 1);
      const Value& v = args[0];
      if (v.is_text()) return Value::integer(static_cast<long long>(text_chars(v.as_text()).size()));
      if (v.is_seq() || v.is_tuple())
        return Value::integer(static_cast<long long>(v.seq_items().size()));
      if (v.is_map()) return Value::integer(static_cast<long long>(v.map_data().entries.size()));
      if (v.is_ndarray()) {
        if (v.array().shape.empty()) type_error("len() of a rank-0 array");
        return Value::integer(static_cast<long long>(v.array().shape[0]));
      }
      type_error(fmt::format("len() of {}", tag_name(v)));
    }
    if (name == "abs") {
      arity(1, 1);
      const Value& v = args[0];
      if (v.is_int()) return Value::integer(abs(v.as_int()));
      if (v.is_float()) return Value::real(std::fabs(v.as_float()));
      type_error(fmt::format("abs() needs a number, got {}", tag_name(v)));
    }
    if (name == "min" || name == "max") {
      std::vector<Value> pool = args.size() == 1 ? iterate(args[0]) : args;
      if (pool.empty()) type_error(fmt::format("{}() of an empty iterable", name));
      Value best = pool[0];
      for (std::size_t i = 1; i < pool.size(); ++i) {
        CompareResult r = value_compare(pool[i], best);
        if (r == CompareResult::Incomparable)
          type_error(fmt::format("{}() got incomparable values {} and {}", name,
                                 render(pool[i]), render(best)));
        if (name == "min" ? r == CompareResult::Less : r == CompareResult::Greater)
          best = pool[i];
      }
      return best;
    }
    if (name == "sum") {
      arity(1, 1);
      BigInt exact = 0;
      double approx = 0.0;
      bool is_float = false;
      for (const Value& v : iterate(args[0])) {
        if (v.is_int()) {
          if (is_float)
            approx += v.numeric_as_double();
          else
            exact += v.as_int();
        } else if (v.is_float()) {
          if (!is_float) {
            is_float = true;
            approx = bigint_to_double(exact);
          }
          approx += v.as_float();
        } else {
          type_error(fmt::format("sum() needs numbers, got {}", tag_name(v)));
        }
      }
      return is_float ? Value::real(approx) : Value::integer(exact);
    }
    if (name == "range") {
      arity(1, 3);
      BigInt start = 0, stop, step = 1;
      if (args.size() == 1) {
        stop = to_index(args[0], "range bound");
      } else {
        start = to_index(args[0], "range bound");
        stop = to_index(args[1], "range bound");
        if (args.size() == 3) step = to_index(args[2], "range step");
      }
      if (step == 0) type_error("range() step cannot be zero");
      BigInt span = step > 0 ? stop - start : start - stop;
      BigInt magnitude = abs(step);
      BigInt count = 0;
      if (span > 0) count = (span + magnitude - 1) / magnitude;
      if (count > 1000000) type_error("range() result too large");
      std::vector<Value> out;
      BigInt v = start;
      for (BigInt i = 0; i < count; ++i, v += step) out.push_back(Value::integer(v));
      return Value::seq(std::move(out));
    }
    type_error(fmt::format("unreachable builtin {}", name));
  }

  const EvalEnv& env_;
  std::vector<std::pair<std::string, Value>> locals_;
};

}  // namespace

bool is_builtin_callable(const std::string& name) {
  return name == "len" || name == "abs" || name == "min" || name == "max" || name == "sum" ||
         name == "range";
}

bool is_builtin_attr(const std::string& name) { return name == "shape"; }

Value evaluate(const ExprPtr& e, const EvalEnv& env) {
  Evaluator ev(env);
  return ev.eval(e);
}

bool evaluate_condition(const ExprPtr& e, const EvalEnv& env) {
  Evaluator ev(env);
  Value v = ev.eval(e);
  if (!v.is_bool())
    throw EvalError(EvalError::Kind::Type,
                    fmt::format("condition evaluated to {}, expected True or False", render(v)));
  return v.as_bool();
}

}  // namespace refineguard::lang
