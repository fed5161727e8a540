#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "refineguard/eval.hpp"
#include "refineguard/parse.hpp"
#include "refineguard/value.hpp"

using namespace refineguard;
using namespace refineguard::lang;

namespace {

Value run(const std::string& src, const std::map<std::string, Value>& args = {},
          const Value* ret = nullptr) {
  EvalEnv env;
  env.frames.push_back(Frame{&args, ret});
  return evaluate(parse_condition(src), env);
}

bool run_bool(const std::string& src, const std::map<std::string, Value>& args = {},
              const Value* ret = nullptr) {
  Value v = run(src, args, ret);
  REQUIRE(v.is_bool());
  return v.as_bool();
}

std::optional<EvalError::Kind> kind_of(const std::string& src,
                                       const std::map<std::string, Value>& args = {}) {
  try {
    run(src, args);
  } catch (const EvalError& e) {
    return e.kind();
  }
  return std::nullopt;
}

}  // namespace

TEST_CASE("logical operators: exhaustive truth tables over strict Bools") {
  struct Row {
    const char* src;
    bool expect;
  };
  const Row rows[] = {
      {"False and False", false}, {"False and True", false},
      {"True and False", false},  {"True and True", true},
      {"False or False", false},  {"False or True", true},
      {"True or False", true},    {"True or True", true},
      {"not False", true},        {"not True", false},
      {"False --> False", true},  {"False --> True", true},
      {"True --> False", false},  {"True --> True", true},
      {"False <--> False", true}, {"False <--> True", false},
      {"True <--> False", false}, {"True <--> True", true},
  };
  for (const Row& r : rows) {
    CAPTURE(r.src);
    CHECK(run_bool(r.src) == r.expect);
  }
}

TEST_CASE("logical operators are strict about Bool operands but short-circuit") {
  CHECK(kind_of("1 and True") == EvalError::Kind::Type);
  CHECK(kind_of("True and 1") == EvalError::Kind::Type);
  CHECK(kind_of("0.5 or True") == EvalError::Kind::Type);
  CHECK(kind_of("not 1") == EvalError::Kind::Type);
  CHECK(kind_of("True --> 1") == EvalError::Kind::Type);
  CHECK(kind_of("True <--> 1") == EvalError::Kind::Type);

  // Short-circuiting skips the bad right operand entirely.
  CHECK(run_bool("False and 1") == false);
  CHECK(run_bool("True or 1") == true);
  CHECK(run_bool("False --> 1") == true);

  // A division by zero on the skipped side is likewise never evaluated,
  // and on the taken side it is IEEE, not an error.
  CHECK(run_bool("False and 1 / 0 > 0") == false);
  CHECK(run_bool("True and 1 / 0 > 0") == true);
}

TEST_CASE("comparisons: NaN never orders, foreign tags refuse to order") {
  std::map<std::string, Value> args = {{"nan", Value::real(std::nan(""))}};
  for (const char* op : {"<", "<=", ">", ">="}) {
    CAPTURE(op);
    CHECK(run_bool(fmt::format("nan {} 1", op), args) == false);
    CHECK(run_bool(fmt::format("1 {} nan", op), args) == false);
    CHECK(run_bool(fmt::format("nan {} nan", op), args) == false);
  }
  CHECK(run_bool("nan == nan", args) == false);
  CHECK(run_bool("nan != nan", args) == true);

  // Equality across tags is simply false; ordering is a type error.
  CHECK(run_bool("1 == 'a'") == false);
  CHECK(run_bool("1 != 'a'") == true);
  CHECK(kind_of("1 < 'a'") == EvalError::Kind::Type);
  CHECK(kind_of("None <= None") == std::nullopt);
  CHECK(run_bool("None <= None"));
  CHECK(run_bool("False < True"));
  CHECK(run_bool("'ab' < 'b'"));

  // Int and Float merge numerically, exactly, even past double precision.
  CHECK(run_bool("2 == 2.0"));
  CHECK(run_bool("9007199254740993 > 9007199254740992.0"));
  CHECK(run_bool("1000000000000000000000000000000 != 1e30"));

  std::map<std::string, Value> seqs = {
      {"xs", Value::seq({Value::integer(1), Value::integer(2)})},
      {"ys", Value::seq({Value::integer(1), Value::integer(3)})},
      {"t", Value::tuple({Value::integer(1), Value::integer(2)})},
      {"m", Value::map({})},
  };
  CHECK(run_bool("xs < ys", seqs));
  CHECK(run_bool("xs != t", seqs));          // Seq and Tuple never equal
  CHECK(kind_of("xs < t", seqs) == EvalError::Kind::Type);
  CHECK(kind_of("m < m", seqs) == EvalError::Kind::Type);
}

TEST_CASE("integer arithmetic is exact; division is always real") {
  // 18446744073709551616 is 2^64: past the widest machine integer.
  Value v = run("18446744073709551616 + 1");
  REQUIRE(v.is_int());
  CHECK(v.as_int() == BigInt("18446744073709551617"));
  v = run("123456789123456789 * 987654321987654321");
  CHECK(v.as_int() == BigInt("121932631356500531347203169112635269"));
  v = run("0 - 18446744073709551616");
  CHECK(v.as_int() == BigInt("-18446744073709551616"));

  v = run("4 / 2");
  REQUIRE(v.is_float());
  CHECK(v.as_float() == 2.0);

  // IEEE division semantics.
  CHECK(run("1 / 0").as_float() == HUGE_VAL);
  CHECK(run("-1 / 0").as_float() == -HUGE_VAL);
  CHECK(std::isnan(run("0 / 0").as_float()));
  CHECK(std::isnan(run("5 % 0").as_float()));
  CHECK(std::isnan(run("5.0 % 0").as_float()));

  // Mixed Int/Float falls into the double lane.
  v = run("1 + 0.5");
  REQUIRE(v.is_float());
  CHECK(v.as_float() == 1.5);
}

namespace {

struct ArithRow {
  long long a, b, mod;
  double div;
};
const ArithRow kArithRows[] = {
#include "golden/int_arith.inc"
};

struct FModRow {
  double a, b, mod;
};
const FModRow kFModRows[] = {
#include "golden/float_mod.inc"
};

struct PowRow {
  long long base, exp;
  const char* expect;
};
const PowRow kPowRows[] = {
#include "golden/int_pow.inc"
};

struct SliceRow {
  int len;
  int has_start;
  long long start;
  int has_stop;
  long long stop;
  long long step;
  const char* expect;
};
const SliceRow kSliceRows[] = {
#include "golden/slice_oracle.inc"
};

}  // namespace

TEST_CASE("floored modulo and true division agree with the frozen oracle") {
  ExprPtr mod_e = parse_condition("a % b");
  ExprPtr div_e = parse_condition("a / b");
  for (const ArithRow& row : kArithRows) {
    CAPTURE(row.a);
    CAPTURE(row.b);
    std::map<std::string, Value> args = {{"a", Value::integer(row.a)},
                                         {"b", Value::integer(row.b)}};
    EvalEnv env;
    env.frames.push_back(Frame{&args, nullptr});
    Value m = evaluate(mod_e, env);
    REQUIRE(m.is_int());
    CHECK(m.as_int() == BigInt(row.mod));
    Value d = evaluate(div_e, env);
    REQUIRE(d.is_float());
    CHECK(d.as_float() == row.div);
  }
}

TEST_CASE("float modulo agrees with the frozen oracle") {
  ExprPtr mod_e = parse_condition("a % b");
  for (const FModRow& row : kFModRows) {
    CAPTURE(row.a);
    CAPTURE(row.b);
    std::map<std::string, Value> args = {{"a", Value::real(row.a)}, {"b", Value::real(row.b)}};
    EvalEnv env;
    env.frames.push_back(Frame{&args, nullptr});
    Value m = evaluate(mod_e, env);
    REQUIRE(m.is_float());
    CHECK(m.as_float() == row.mod);
  }
}

TEST_CASE("integer exponentiation is exact within its guard, real beyond it") {
  ExprPtr pow_e = parse_condition("a ** b");
  for (const PowRow& row : kPowRows) {
    CAPTURE(row.base);
    CAPTURE(row.exp);
    std::map<std::string, Value> args = {{"a", Value::integer(row.base)},
                                         {"b", Value::integer(row.exp)}};
    EvalEnv env;
    env.frames.push_back(Frame{&args, nullptr});
    Value v = evaluate(pow_e, env);
    REQUIRE(v.is_int());
    CHECK(v.as_int() == BigInt(row.expect));
  }

  // A negative exponent or an overflowing result moves to the double lane.
  Value v = run("2 ** -1");
  REQUIRE(v.is_float());
  CHECK(v.as_float() == 0.5);
  CHECK(run("2 ** 40000").is_float());
  CHECK(run("2 ** 40000").as_float() == HUGE_VAL);
  v = run("2.0 ** 10");
  REQUIRE(v.is_float());
  CHECK(v.as_float() == 1024.0);
}

TEST_CASE("slices agree with the frozen oracle on Text, Seq, and rank-1 arrays") {
  const std::string alphabet = "abcde";
  for (const SliceRow& row : kSliceRows) {
    std::string src = "s[";
    if (row.has_start) src += std::to_string(row.start);
    src += ":";
    if (row.has_stop) src += std::to_string(row.stop);
    src += ":" + std::to_string(row.step) + "]";
    CAPTURE(src);
    CAPTURE(row.len);

    std::string text = alphabet.substr(0, row.len);
    std::vector<Value> chars;
    std::vector<double> nums;
    for (char c : text) {
      chars.push_back(Value::text(std::string(1, c)));
      nums.push_back(static_cast<double>(c - 'a'));
    }
    std::map<std::string, Value> args = {
        {"s", Value::text(text)},
    };
    Value got = run(src, args);
    REQUIRE(got.is_text());
    CHECK(got.as_text() == row.expect);

    args["s"] = Value::seq(chars);
    got = run(src, args);
    REQUIRE(got.is_seq());
    std::string joined;
    for (const Value& c : got.seq_items()) joined += c.as_text();
    CHECK(joined == row.expect);

    args["s"] = Value::ndarray({nums.size()}, nums);
    got = run(src, args);
    REQUIRE(got.is_ndarray());
    REQUIRE(got.array().shape.size() == 1);
    std::string arr_joined;
    for (double d : got.array().elems)
      arr_joined += static_cast<char>('a' + static_cast<int>(d));
    CHECK(arr_joined == row.expect);
  }
}

TEST_CASE("slicing preserves the container kind and rejects a zero step") {
  std::map<std::string, Value> args = {
      {"t", Value::tuple({Value::integer(1), Value::integer(2), Value::integer(3)})},
      {"m", Value::map({})},
  };
  Value v = run("t[::-1]", args);
  REQUIRE(v.is_tuple());
  CHECK(value_eq(v, Value::tuple({Value::integer(3), Value::integer(2), Value::integer(1)})));
  CHECK(kind_of("t[::0]", args) == EvalError::Kind::Type);
  CHECK(kind_of("m[:]", args) == EvalError::Kind::Type);
  CHECK(kind_of("t['a':]", args) == EvalError::Kind::Type);  // slice bounds must be Int
}

TEST_CASE("indexing: negative wraps once, out of range is an Index error") {
  std::map<std::string, Value> args = {
      {"s", Value::text("h\xc3\xa9llo")},  // five code points, six bytes
      {"xs", Value::seq({Value::integer(10), Value::integer(20), Value::integer(30)})},
      {"t", Value::tuple({Value::text("a"), Value::text("b")})},
      {"m", Value::map({{Value::text("k"), Value::integer(7)}})},
      {"arr", Value::ndarray({2, 2}, {1.0, 2.0, 3.0, 4.0})},
      {"vec", Value::ndarray({3}, {5.0, 6.0, 7.0})},
      {"scalar", Value::ndarray({}, {9.0})},
  };
  CHECK(run("s[1]", args).as_text() == "\xc3\xa9");
  CHECK(run("s[-1]", args).as_text() == "o");
  CHECK(run("len(s)", args).as_int() == 5);
  CHECK(run("xs[0]", args).as_int() == 10);
  CHECK(run("xs[-3]", args).as_int() == 10);
  CHECK(run("t[1]", args).as_text() == "b");
  CHECK(kind_of("xs[3]", args) == EvalError::Kind::Index);
  CHECK(kind_of("xs[-4]", args) == EvalError::Kind::Index);
  CHECK(kind_of("xs[0.5]", args) == EvalError::Kind::Type);

  // Maps index by key; a missing key is an Index error, an unhashable key
  // a Type error.
  CHECK(run("m['k']", args).as_int() == 7);
  CHECK(kind_of("m['z']", args) == EvalError::Kind::Index);
  CHECK(kind_of("m[xs]", args) == EvalError::Kind::Type);

  // Arrays index along the leading axis.
  Value sub = run("arr[1]", args);
  REQUIRE(sub.is_ndarray());
  CHECK(value_eq(sub, Value::ndarray({2}, {3.0, 4.0})));
  CHECK(run("arr[1][0]", args).as_float() == 3.0);
  CHECK(run("vec[-1]", args).as_float() == 7.0);
  CHECK(kind_of("scalar[0]", args) == EvalError::Kind::Index);
  CHECK(kind_of("5[0]") == EvalError::Kind::Type);
}

TEST_CASE("concatenation joins like with like") {
  std::map<std::string, Value> args = {
      {"xs", Value::seq({Value::integer(1)})},
      {"ys", Value::seq({Value::integer(2), Value::integer(3)})},
      {"ta", Value::tuple({Value::integer(1)})},
      {"tb", Value::tuple({Value::integer(2)})},
  };
  CHECK(run("'ab' + 'cd'").as_text() == "abcd");
  Value v = run("xs + ys", args);
  REQUIRE(v.is_seq());
  CHECK(value_eq(v, Value::seq({Value::integer(1), Value::integer(2), Value::integer(3)})));
  v = run("ta + tb", args);
  REQUIRE(v.is_tuple());
  CHECK(value_eq(v, Value::tuple({Value::integer(1), Value::integer(2)})));
  CHECK(kind_of("'a' + 1") == EvalError::Kind::Type);
  CHECK(kind_of("xs + ta", args) == EvalError::Kind::Type);
  CHECK(kind_of("xs * 2", args) == EvalError::Kind::Type);
}

TEST_CASE("builtins: len, abs, min, max, sum, range") {
  std::map<std::string, Value> args = {
      {"xs", Value::seq({Value::integer(3), Value::integer(1), Value::integer(2)})},
      {"mixed", Value::seq({Value::integer(1), Value::text("a")})},
      {"empty", Value::seq({})},
      {"m", Value::map({{Value::text("a"), Value::integer(1)},
                        {Value::text("b"), Value::integer(2)}})},
      {"arr", Value::ndarray({2, 3}, {0, 0, 0, 0, 0, 0})},
      {"big", Value::seq({Value::integer(BigInt(1) << 80), Value::integer(BigInt(1) << 80)})},
      {"floats", Value::seq({Value::integer(1), Value::real(0.5)})},
  };

  CHECK(run("len('héllo')").as_int() == 5);
  CHECK(run("len(xs)", args).as_int() == 3);
  CHECK(run("len(m)", args).as_int() == 2);
  CHECK(run("len(arr)", args).as_int() == 2);
  CHECK(kind_of("len(5)") == EvalError::Kind::Type);
  CHECK(kind_of("len()") == EvalError::Kind::Type);
  CHECK(kind_of("len(xs, xs)", args) == EvalError::Kind::Type);

  CHECK(run("abs(-3)").as_int() == 3);
  CHECK(run("abs(-0.5)").as_float() == 0.5);
  CHECK(run("abs(-123456789012345678901234567890)").as_int() ==
        BigInt("123456789012345678901234567890"));
  CHECK(kind_of("abs('a')") == EvalError::Kind::Type);

  CHECK(run("min(xs)", args).as_int() == 1);
  CHECK(run("max(xs)", args).as_int() == 3);
  CHECK(run("min(3, 1, 2)").as_int() == 1);
  CHECK(run("max(0.5, 2)").as_int() == 2);
  CHECK(kind_of("min(empty)", args) == EvalError::Kind::Type);
  CHECK(kind_of("min(mixed)", args) == EvalError::Kind::Type);

  Value s = run("sum(big)", args);
  REQUIRE(s.is_int());
  CHECK(s.as_int() == BigInt(1) << 81);  // exact, no double round-trip
  s = run("sum(floats)", args);
  REQUIRE(s.is_float());
  CHECK(s.as_float() == 1.5);
  CHECK(run("sum(empty)", args).as_int() == 0);
  CHECK(kind_of("sum(mixed)", args) == EvalError::Kind::Type);

  CHECK(value_eq(run("range(3)"),
                 Value::seq({Value::integer(0), Value::integer(1), Value::integer(2)})));
  CHECK(value_eq(run("range(2, 10, 3)"),
                 Value::seq({Value::integer(2), Value::integer(5), Value::integer(8)})));
  CHECK(value_eq(run("range(5, 2, -1)"),
                 Value::seq({Value::integer(5), Value::integer(4), Value::integer(3)})));
  CHECK(run("len(range(5, 2))").as_int() == 0);
  CHECK(run("len(range(0))").as_int() == 0);
  CHECK(kind_of("range(0, 5, 0)") == EvalError::Kind::Type);
  CHECK(kind_of("range(10000000)") == EvalError::Kind::Type);
  CHECK(kind_of("range(1, 2, 3, 4)") == EvalError::Kind::Type);

  // Builtins always win over helpers of the same name.
  std::map<std::string, HelperFn> helpers = {
      {"len", [](const std::vector<Value>&) { return Value::integer(999); }}};
  EvalEnv env;
  std::map<std::string, Value> none;
  env.frames.push_back(Frame{&none, nullptr});
  env.helpers = &helpers;
  CHECK(evaluate(parse_condition("len('ab')"), env).as_int() == 2);
}

TEST_CASE("quantifiers match brute-force evaluation on small domains") {
  ExprPtr all_e = parse_condition("all(x >= 0 for x in xs)");
  ExprPtr any_e = parse_condition("any(x >= 0 for x in xs)");
  const int domain[] = {-2, -1, 0, 1};
  std::vector<std::vector<int>> inputs = {{}};
  for (int len = 1; len <= 4; ++len) {
    std::vector<std::vector<int>> next;
    for (const auto& prefix : inputs)
      if (static_cast<int>(prefix.size()) == len - 1)
        for (int d : domain) {
          auto ext = prefix;
          ext.push_back(d);
          next.push_back(ext);
        }
    inputs.insert(inputs.end(), next.begin(), next.end());
  }
  for (const auto& in : inputs) {
    std::vector<Value> items;
    for (int d : in) items.push_back(Value::integer(d));
    std::map<std::string, Value> args = {{"xs", Value::seq(items)}};
    EvalEnv env;
    env.frames.push_back(Frame{&args, nullptr});
    bool want_all = std::all_of(in.begin(), in.end(), [](int d) { return d >= 0; });
    bool want_any = std::any_of(in.begin(), in.end(), [](int d) { return d >= 0; });
    CHECK(evaluate(all_e, env).as_bool() == want_all);
    CHECK(evaluate(any_e, env).as_bool() == want_any);
  }
}

TEST_CASE("quantifiers: iteration sources, shadowing, and strict bodies") {
  std::map<std::string, Value> args = {
      {"s", Value::text("banana")},
      {"m", Value::map({{Value::text("a"), Value::integer(1)},
                        {Value::text("z"), Value::integer(2)}})},
      {"arr", Value::ndarray({2, 2}, {1.0, 2.0, 3.0, 4.0})},
      {"xs", Value::seq({Value::integer(1)})},
      {"x", Value::integer(-5)},
  };
  CHECK(run_bool("any(c == 'b' for c in s)", args));
  CHECK_FALSE(run_bool("all(c == 'a' for c in s)", args));
  CHECK_FALSE(run_bool("all(k != 'z' for k in m)", args));     // maps iterate keys
  CHECK(run_bool("all(e > 0 for e in arr)", args));            // arrays iterate elements
  CHECK(run_bool("all(q > 100 for q in range(0))"));           // vacuous truth
  CHECK_FALSE(run_bool("any(q > 100 for q in range(0))"));

  // The binder shadows the outer x inside the body only.
  CHECK(run_bool("all(x > 0 for x in xs)", args));
  CHECK(run_bool("x < 0", args));

  // Bodies are strict Bools, and quantifying a non-iterable is an error.
  CHECK(kind_of("all(x for x in xs)", args) == EvalError::Kind::Type);
  CHECK(kind_of("all(x > 0 for x in 5)", args) == EvalError::Kind::Type);

  // Nested quantifiers bind independently: 1.0 in arr is not > 1 but is >= 1.
  CHECK_FALSE(run_bool("all(any(e > x for x in xs) for e in arr)", args));
  CHECK(run_bool("all(any(e >= x for x in xs) for e in arr)", args));
}

TEST_CASE("attributes: shape is built in, accessors extend, the rest fail") {
  std::map<std::string, Value> args = {
      {"arr", Value::ndarray({2, 3}, {0, 0, 0, 0, 0, 0})},
      {"scalar", Value::ndarray({}, {5.0})},
  };
  Value shape = run("arr.shape", args);
  REQUIRE(shape.is_tuple());
  CHECK(value_eq(shape, Value::tuple({Value::integer(2), Value::integer(3)})));
  CHECK(value_eq(run("scalar.shape", args), Value::tuple({})));
  CHECK(run_bool("arr.shape[0] == 2 and arr.shape[1] == 3", args));
  CHECK(kind_of("5 .shape") == EvalError::Kind::Type);

  std::map<std::string, HelperFn> helpers;
  std::map<std::string, AccessorFn> accessors = {
      {"first", [](const Value& v) { return v.seq_items().at(0); }},
      {"angry", [](const Value&) -> Value { throw std::runtime_error("no"); }},
  };
  std::map<std::string, Value> xs = {{"xs", Value::seq({Value::integer(9)})}};
  EvalEnv env;
  env.frames.push_back(Frame{&xs, nullptr});
  env.accessors = &accessors;
  CHECK(evaluate(parse_condition("xs.first"), env).as_int() == 9);
  try {
    evaluate(parse_condition("xs.angry"), env);
    FAIL("expected an EvalError");
  } catch (const EvalError& e) {
    CHECK(e.kind() == EvalError::Kind::Type);
    CHECK(std::string(e.what()).find("attribute 'angry' raised") != std::string::npos);
  }
  CHECK(is_builtin_attr("shape"));
  CHECK_FALSE(is_builtin_attr("first"));
}

TEST_CASE("helpers: called by name, errors blamed on the helper") {
  std::map<std::string, HelperFn> helpers = {
      {"double_it", [](const std::vector<Value>& a) {
         return Value::integer(a.at(0).as_int() * 2);
       }},
      {"angry", [](const std::vector<Value>&) -> Value { throw std::runtime_error("no"); }},
  };
  std::map<std::string, Value> args = {{"x", Value::integer(21)}};
  EvalEnv env;
  env.frames.push_back(Frame{&args, nullptr});
  env.helpers = &helpers;
  CHECK(evaluate(parse_condition("double_it(x)"), env).as_int() == 42);
  try {
    evaluate(parse_condition("angry()"), env);
    FAIL("expected an EvalError");
  } catch (const EvalError& e) {
    CHECK(e.kind() == EvalError::Kind::Type);
    CHECK(std::string(e.what()).find("helper 'angry' raised") != std::string::npos);
  }
  try {
    evaluate(parse_condition("mystery()"), env);
    FAIL("expected an EvalError");
  } catch (const EvalError& e) {
    CHECK(e.kind() == EvalError::Kind::NameUnbound);
  }
  CHECK(is_builtin_callable("len"));
  CHECK_FALSE(is_builtin_callable("double_it"));
}

TEST_CASE("name resolution across frames and the return slot") {
  std::map<std::string, Value> now = {{"x", Value::integer(1)}};
  std::map<std::string, Value> past = {{"x", Value::integer(2)}};
  Value now_ret = Value::integer(10);
  Value past_ret = Value::integer(20);

  EvalEnv env;
  env.frames.push_back(Frame{&now, &now_ret});
  env.frames.push_back(Frame{&past, &past_ret});

  CHECK(evaluate(parse_condition("x"), env).as_int() == 1);
  CHECK(evaluate(parse_condition("x`"), env).as_int() == 2);
  CHECK(evaluate(parse_condition("return"), env).as_int() == 10);
  CHECK(evaluate(parse_condition("return`"), env).as_int() == 20);
  CHECK(evaluate(parse_condition("x + x` + return + return`"), env).as_int() == 33);

  // One more backtick than there are frames.
  try {
    evaluate(parse_condition("x``"), env);
    FAIL("expected an EvalError");
  } catch (const EvalError& e) {
    CHECK(e.kind() == EvalError::Kind::NameUnbound);
    CHECK(std::string(e.what()).find("past execution") != std::string::npos);
  }

  // Entry conditions have no return slot.
  EvalEnv entry;
  entry.frames.push_back(Frame{&now, nullptr});
  try {
    evaluate(parse_condition("return"), entry);
    FAIL("expected an EvalError");
  } catch (const EvalError& e) {
    CHECK(e.kind() == EvalError::Kind::NameUnbound);
    CHECK(std::string(e.what()) == "'return' is only bound in an exit condition");
  }
  try {
    evaluate(parse_condition("q"), entry);
    FAIL("expected an EvalError");
  } catch (const EvalError& e) {
    CHECK(e.kind() == EvalError::Kind::NameUnbound);
    CHECK(std::string(e.what()) == "unbound name 'q'");
  }
}

TEST_CASE("evaluate_condition insists on a Bool verdict") {
  std::map<std::string, Value> args = {{"x", Value::integer(5)}};
  EvalEnv env;
  env.frames.push_back(Frame{&args, nullptr});
  CHECK(evaluate_condition(parse_condition("x > 0"), env));
  CHECK_FALSE(evaluate_condition(parse_condition("x < 0"), env));
  try {
    evaluate_condition(parse_condition("x + 1"), env);
    FAIL("expected an EvalError");
  } catch (const EvalError& e) {
    CHECK(e.kind() == EvalError::Kind::Type);
    CHECK(std::string(e.what()) == "condition evaluated to 6, expected True or False");
  }
}

TEST_CASE("unary operators") {
  CHECK(run("-(3)").as_int() == -3);
  CHECK(run("-0.5").as_float() == -0.5);
  CHECK(run("+7").as_int() == 7);
  CHECK(run("--7").as_int() == 7);
  CHECK(kind_of("-'a'") == EvalError::Kind::Type);
  CHECK(kind_of("+'a'") == EvalError::Kind::Type);
  CHECK(kind_of("-None") == EvalError::Kind::Type);
}
