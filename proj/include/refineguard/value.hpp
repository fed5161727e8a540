#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "refineguard/errors.hpp"

namespace refineguard {

class Value;

using BigInt = boost::multiprecision::cpp_int;

// Opaque host object carried through the value model. The tag chain
// (type_tag plus supertypes) drives nominal checks; hooks are optional.
struct HostHandle {
  std::string type_tag;
  std::vector<std::string> supertypes;
  bool callable = false;
  std::shared_ptr<void> payload;
  std::function<bool(const Value&)> membership;      // custom-membership hook
  std::function<Value(const HostHandle&)> snapshot;  // deep-snapshot hook

  bool has_tag(const std::string& t) const;
};

struct SeqData {
  std::vector<Value> items;
};

struct TupleData {
  std::vector<Value> items;
};

// Entries kept sorted by key_compare; keys are hashable Values.
struct MapData {
  std::vector<std::pair<Value, Value>> entries;

  const Value* find(const Value& key) const;
  void set(const Value& key, const Value& value);
};

struct NdArrayData {
  std::vector<std::size_t> shape;
  std::vector<double> elems;  // row-major

  std::size_t count() const;
};

enum class ValueTag { None, Bool, Int, Float, Text, Seq, Tuple, Map, NdArray, HostHandleTag };

enum class CompareResult { Less, Equal, Greater, Unordered, Incomparable };

// Dynamic tagged value. Copies alias container payloads (reference
// semantics, like the host values contracts inspect); deep_snapshot
// produces an independent copy.
class Value {
 public:
  Value() : rep_(std::monostate{}) {}

  static Value none();
  static Value boolean(bool b);
  static Value integer(BigInt n);
  static Value integer(long long n);
  static Value real(double d);
  static Value text(std::string s);
  static Value seq(std::vector<Value> items);
  static Value tuple(std::vector<Value> items);
  static Value map(std::vector<std::pair<Value, Value>> entries);
  static Value ndarray(std::vector<std::size_t> shape, std::vector<double> elems);
  static Value handle(HostHandle h);

  ValueTag tag() const;
  const char* tag_name() const;

  bool is_none() const { return tag() == ValueTag::None; }
  bool is_bool() const { return tag() == ValueTag::Bool; }
  bool is_int() const { return tag() == ValueTag::Int; }
  bool is_float() const { return tag() == ValueTag::Float; }
  bool is_text() const { return tag() == ValueTag::Text; }
  bool is_seq() const { return tag() == ValueTag::Seq; }
  bool is_tuple() const { return tag() == ValueTag::Tuple; }
  bool is_map() const { return tag() == ValueTag::Map; }
  bool is_ndarray() const { return tag() == ValueTag::NdArray; }
  bool is_handle() const { return tag() == ValueTag::HostHandleTag; }
  bool is_numeric() const { return is_int() || is_float(); }

  bool as_bool() const;
  const BigInt& as_int() const;
  double as_float() const;
  const std::string& as_text() const;
  const std::vector<Value>& seq_items() const;  // Seq or Tuple
  std::vector<Value>& seq_items_mut();          // Seq only; mutates shared payload
  const MapData& map_data() const;
  MapData& map_data_mut();
  const NdArrayData& array() const;
  NdArrayData& array_mut();
  const HostHandle& handle_ref() const;

  // Numeric payload as double; Int converts (saturating to +-inf).
  double numeric_as_double() const;

  bool is_hashable() const;

 private:
  using Rep = std::variant<std::monostate, bool, BigInt, double, std::string,
                           std::shared_ptr<SeqData>, std::shared_ptr<TupleData>,
                           std::shared_ptr<MapData>, std::shared_ptr<NdArrayData>,
                           std::shared_ptr<HostHandle>>;
  explicit Value(Rep rep) : rep_(std::move(rep)) {}
  Rep rep_;
};

// Structural equality. Int and Float compare numerically (2 == 2.0);
// NaN != NaN; Seq and Tuple never equal; handles compare by payload identity.
bool value_eq(const Value& a, const Value& b);

// Ordering used by condition comparisons. Numeric pairs with NaN are
// Unordered; tag mismatches and unorderable tags are Incomparable.
CompareResult value_compare(const Value& a, const Value& b);

// Exact comparison of a BigInt against a double (no precision loss).
CompareResult int_float_compare(const BigInt& n, double d);

double bigint_to_double(const BigInt& n);

// Total order over hashable values (numeric tower merged); used for map keys.
int key_compare(const Value& a, const Value& b);

// Deterministic human-readable rendering (repr style).
std::string render(const Value& v);

std::string render_double(double d);

// Structurally equal copy sharing no mutable substructure with the input.
// Throws SnapshotUnsupported for a HostHandle without a snapshot hook.
Value deep_snapshot(const Value& v);

// Snapshot of argument values at entry plus the return value for one
// completed call.
struct ExecutionRecord {
  std::map<std::string, Value> args;
  Value ret;
  std::uint64_t seq_no = 0;
  bool shallow = false;  // a HostHandle could not be snapshotted
};

using RecordPtr = std::shared_ptr<const ExecutionRecord>;

}  // namespace refineguard
