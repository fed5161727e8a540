#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "refineguard/types.hpp"
#include "refineguard/value.hpp"

using namespace refineguard;

namespace {

Value big(const char* decimal) { return Value::integer(BigInt(decimal)); }

}  // namespace

TEST_CASE("tags and accessors") {
  CHECK(Value::none().is_none());
  CHECK(Value::boolean(true).as_bool());
  CHECK(Value::integer(7).as_int() == 7);
  CHECK(Value::real(0.5).as_float() == 0.5);
  CHECK(Value::text("hi").as_text() == "hi");
  CHECK(Value::seq({Value::integer(1)}).seq_items().size() == 1);
  CHECK(Value::tuple({Value::integer(1), Value::integer(2)}).seq_items().size() == 2);
  CHECK(Value::map({{Value::text("k"), Value::integer(1)}}).map_data().entries.size() == 1);
  CHECK(Value::ndarray({2, 2}, {1, 0, 0, 1}).array().count() == 4);

  CHECK(Value::integer(1).is_numeric());
  CHECK(Value::real(1.0).is_numeric());
  CHECK_FALSE(Value::boolean(true).is_numeric());
  CHECK_FALSE(Value::text("1").is_numeric());

  // Wrong-tag access is internal misuse, not a contract violation.
  CHECK_THROWS_AS((void)Value::integer(1).as_text(), ValueModelError);
  CHECK_THROWS_AS((void)Value::text("x").as_int(), ValueModelError);
  CHECK_THROWS_AS((void)Value::seq({}).as_bool(), ValueModelError);

  // Element count must match the shape product.
  CHECK_THROWS_AS(Value::ndarray({2, 2}, {1.0}), ValueModelError);
}

TEST_CASE("numeric equality merges Int and Float exactly") {
  CHECK(value_eq(Value::integer(2), Value::real(2.0)));
  CHECK(value_eq(Value::real(2.0), Value::integer(2)));
  CHECK_FALSE(value_eq(Value::integer(2), Value::real(2.5)));

  // 1e30 is not 10^30: the nearest double is ...019884624838656. The
  // comparison must be exact, not a lossy double round-trip.
  CHECK_FALSE(value_eq(big("1000000000000000000000000000000"), Value::real(1e30)));
  CHECK(value_eq(big("1000000000000000019884624838656"), Value::real(1e30)));

  // 2^53 + 1 has no double representation.
  CHECK_FALSE(value_eq(big("9007199254740993"), Value::real(9007199254740992.0)));
  CHECK(value_eq(big("9007199254740992"), Value::real(9007199254740992.0)));
}

TEST_CASE("NaN, containers, and handles under value_eq") {
  double nan = std::nan("");
  CHECK_FALSE(value_eq(Value::real(nan), Value::real(nan)));
  CHECK_FALSE(value_eq(Value::real(nan), Value::integer(0)));

  CHECK(value_eq(Value::seq({Value::integer(1)}), Value::seq({Value::real(1.0)})));
  CHECK_FALSE(value_eq(Value::seq({Value::integer(1)}), Value::tuple({Value::integer(1)})));
  CHECK_FALSE(value_eq(Value::seq({}), Value::seq({Value::none()})));

  // An embedded NaN poisons container equality too.
  Value poisoned = Value::seq({Value::real(nan)});
  CHECK_FALSE(value_eq(poisoned, poisoned));

  // Map equality ignores insertion order (entries are kept sorted).
  Value m1 = Value::map({{Value::text("a"), Value::integer(1)},
                         {Value::text("b"), Value::integer(2)}});
  Value m2 = Value::map({{Value::text("b"), Value::integer(2)},
                         {Value::text("a"), Value::integer(1)}});
  CHECK(value_eq(m1, m2));

  CHECK(value_eq(Value::ndarray({2}, {1, 2}), Value::ndarray({2}, {1, 2})));
  CHECK_FALSE(value_eq(Value::ndarray({2}, {1, 2}), Value::ndarray({1, 2}, {1, 2})));

  // Handles compare by payload identity, not structure.
  auto payload = std::make_shared<int>(5);
  HostHandle h1{"Thing", {}, false, payload, nullptr, nullptr};
  HostHandle h2{"Thing", {}, false, payload, nullptr, nullptr};
  HostHandle h3{"Thing", {}, false, std::make_shared<int>(5), nullptr, nullptr};
  CHECK(value_eq(Value::handle(h1), Value::handle(h2)));
  CHECK_FALSE(value_eq(Value::handle(h1), Value::handle(h3)));
}

TEST_CASE("value_eq is an equivalence relation on the NaN-free fragment") {
  // Pool drawn from generators that cannot emit NaN, plus handcrafted
  // cross-representation pairs.
  std::vector<Value> pool;
  for (const auto& t : {types::number(), types::integer(), types::string_type(),
                        types::list_of(types::number())}) {
    for (Value& v : t->generate(3, 25)) pool.push_back(std::move(v));
  }
  pool.push_back(Value::integer(2));
  pool.push_back(Value::real(2.0));
  pool.push_back(Value::none());
  pool.push_back(Value::boolean(false));

  for (const Value& a : pool) CHECK(value_eq(a, a));  // reflexive
  for (const Value& a : pool)
    for (const Value& b : pool) CHECK(value_eq(a, b) == value_eq(b, a));  // symmetric
  for (const Value& a : pool)
    for (const Value& b : pool) {
      if (!value_eq(a, b)) continue;
      for (const Value& c : pool)
        if (value_eq(b, c)) CHECK(value_eq(a, c));  // transitive
    }
}

TEST_CASE("value_compare orders, unorders, and refuses") {
  CHECK(value_compare(Value::integer(1), Value::integer(2)) == CompareResult::Less);
  CHECK(value_compare(Value::real(2.5), Value::integer(2)) == CompareResult::Greater);
  CHECK(value_compare(Value::integer(2), Value::real(2.0)) == CompareResult::Equal);

  double nan = std::nan("");
  CHECK(value_compare(Value::real(nan), Value::real(1.0)) == CompareResult::Unordered);
  CHECK(value_compare(Value::integer(1), Value::real(nan)) == CompareResult::Unordered);

  CHECK(value_compare(Value::integer(1), Value::text("1")) == CompareResult::Incomparable);
  CHECK(value_compare(Value::none(), Value::boolean(false)) == CompareResult::Incomparable);
  CHECK(value_compare(Value::map({}), Value::map({})) == CompareResult::Incomparable);

  CHECK(value_compare(Value::text("abc"), Value::text("abd")) == CompareResult::Less);
  CHECK(value_compare(Value::seq({Value::integer(1)}),
                      Value::seq({Value::integer(1), Value::integer(0)})) ==
        CompareResult::Less);
  CHECK(value_compare(Value::seq({Value::integer(2)}),
                      Value::seq({Value::integer(1), Value::integer(9)})) ==
        CompareResult::Greater);
}

TEST_CASE("int_float_compare is exact at the double lattice") {
  CHECK(int_float_compare(BigInt("9007199254740993"), 9007199254740992.0) ==
        CompareResult::Greater);
  CHECK(int_float_compare(BigInt("9007199254740992"), 9007199254740992.0) ==
        CompareResult::Equal);
  CHECK(int_float_compare(BigInt(0), 0.5) == CompareResult::Less);
  CHECK(int_float_compare(BigInt(1), 0.5) == CompareResult::Greater);
  CHECK(int_float_compare(BigInt(-3), -2.5) == CompareResult::Less);
  CHECK(int_float_compare(BigInt(5), std::nan("")) == CompareResult::Unordered);
  CHECK(int_float_compare(BigInt(5), HUGE_VAL) == CompareResult::Less);
  CHECK(int_float_compare(BigInt(5), -HUGE_VAL) == CompareResult::Greater);
}

TEST_CASE("render produces the documented repr forms") {
  CHECK(render(Value::integer(5)) == "5");
  CHECK(render(big("-123456789012345678901234567890")) == "-123456789012345678901234567890");
  CHECK(render(Value::real(0.5)) == "0.5");
  CHECK(render(Value::real(1.0)) == "1");
  CHECK(render(Value::real(std::nan(""))) == "nan");
  CHECK(render(Value::real(HUGE_VAL)) == "inf");
  CHECK(render(Value::real(-HUGE_VAL)) == "-inf");
  CHECK(render(Value::none()) == "None");
  CHECK(render(Value::boolean(true)) == "True");
  CHECK(render(Value::boolean(false)) == "False");
  CHECK(render(Value::text("A")) == "'A'");
  CHECK(render(Value::text("it's\n")) == "'it\\'s\\n'");
  CHECK(render(Value::seq({Value::text("A"), Value::text("T"), Value::text("C")})) ==
        "['A', 'T', 'C']");
  CHECK(render(Value::tuple({Value::integer(1)})) == "(1,)");
  CHECK(render(Value::tuple({Value::integer(1), Value::integer(2)})) == "(1, 2)");
  CHECK(render(Value::map({{Value::text("a"), Value::integer(1)}})) == "{'a': 1}");
  CHECK(render(Value::ndarray({2, 2}, {1, 0, 0, 1})) == "NdArray(2×2)[1, 0, 0, 1]");

  // Long arrays truncate after eight elements.
  std::vector<double> ten(10, 7.0);
  CHECK(render(Value::ndarray({10}, ten)) ==
        "NdArray(10)[7, 7, 7, 7, 7, 7, 7, 7, ...]");

  HostHandle h{"Solver", {}, false, std::make_shared<int>(0), nullptr, nullptr};
  CHECK(render(Value::handle(h)) == "HostHandle(Solver)");
}

TEST_CASE("copies alias container payloads; deep_snapshot does not") {
  Value original = Value::seq({Value::integer(1), Value::integer(2)});
  Value alias = original;
  alias.seq_items_mut().push_back(Value::integer(3));
  CHECK(original.seq_items().size() == 3);  // reference semantics

  Value fresh = Value::seq({Value::integer(1), Value::integer(2)});
  Value snap = deep_snapshot(fresh);
  CHECK(value_eq(snap, fresh));
  fresh.seq_items_mut().push_back(Value::integer(3));
  CHECK(snap.seq_items().size() == 2);  // unaffected by the mutation

  // Nested containers are copied all the way down.
  Value inner = Value::seq({Value::integer(1)});
  Value outer = Value::seq({inner});
  Value outer_snap = deep_snapshot(outer);
  inner.seq_items_mut().push_back(Value::integer(2));
  CHECK(outer.seq_items()[0].seq_items().size() == 2);
  CHECK(outer_snap.seq_items()[0].seq_items().size() == 1);
}

TEST_CASE("deep_snapshot independence holds for generated containers") {
  std::vector<TypePtr> container_types = {
      types::list_of(types::number()),
      types::dict_of(types::string_type(), types::number()),
      types::ndarray(std::nullopt, types::number()),
      types::tuple_of({types::number(), types::string_type()}),
  };
  for (const TypePtr& t : container_types) {
    for (Value& v : t->generate(5, 30)) {
      Value snap = deep_snapshot(v);
      Value witness = deep_snapshot(v);
      // Mutate v in whatever way its tag allows.
      if (v.is_seq())
        v.seq_items_mut().push_back(Value::integer(99));
      else if (v.is_map())
        v.map_data_mut().set(Value::text("__mut__"), Value::integer(99));
      else if (v.is_ndarray() && !v.array().elems.empty())
        v.array_mut().elems[0] += 1000.0;
      else
        continue;  // tuples are immutable through the public surface
      CHECK(value_eq(snap, witness));
    }
  }
}

TEST_CASE("deep_snapshot and host handles") {
  HostHandle opaque{"Blob", {}, false, std::make_shared<int>(1), nullptr, nullptr};
  CHECK_THROWS_AS(deep_snapshot(Value::handle(opaque)), SnapshotUnsupported);
  // ... including one buried inside a container.
  CHECK_THROWS_AS(deep_snapshot(Value::seq({Value::handle(opaque)})), SnapshotUnsupported);

  HostHandle friendly{"Pair", {}, false, std::make_shared<int>(42), nullptr,
                      [](const HostHandle& h) {
                        return Value::integer(*static_cast<int*>(h.payload.get()));
                      }};
  Value snapped = deep_snapshot(Value::handle(friendly));
  CHECK(value_eq(snapped, Value::integer(42)));
}

TEST_CASE("map keys: total order, numeric merge, hashability") {
  Value m = Value::map({});
  m.map_data_mut().set(Value::text("b"), Value::integer(1));
  m.map_data_mut().set(Value::text("a"), Value::integer(2));
  m.map_data_mut().set(Value::integer(5), Value::integer(3));
  // None < Bool < numbers < text; entries iterate in key order.
  REQUIRE(m.map_data().entries.size() == 3);
  CHECK(value_eq(m.map_data().entries[0].first, Value::integer(5)));
  CHECK(m.map_data().entries[1].first.as_text() == "a");
  CHECK(m.map_data().entries[2].first.as_text() == "b");

  // Int 5 and Float 5.0 are the same key.
  m.map_data_mut().set(Value::real(5.0), Value::integer(9));
  CHECK(m.map_data().entries.size() == 3);
  CHECK(value_eq(*m.map_data().find(Value::integer(5)), Value::integer(9)));

  CHECK(Value::integer(1).is_hashable());
  CHECK(Value::tuple({Value::integer(1), Value::text("x")}).is_hashable());
  CHECK_FALSE(Value::seq({}).is_hashable());
  CHECK_FALSE(Value::tuple({Value::seq({})}).is_hashable());
  CHECK_FALSE(Value::real(std::nan("")).is_hashable());
  CHECK_THROWS_AS(Value::map({{Value::seq({}), Value::none()}}), ValueModelError);
}

TEST_CASE("bigint_to_double saturates instead of overflowing") {
  CHECK(bigint_to_double(BigInt(1) << 1100) == HUGE_VAL);
  CHECK(bigint_to_double(-(BigInt(1) << 1100)) == -HUGE_VAL);
  CHECK(bigint_to_double(BigInt(1) << 10) == 1024.0);
  CHECK(bigint_to_double(BigInt(0)) == 0.0);
}
