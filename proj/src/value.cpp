#include "refineguard/value.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <fmt/format.h>

namespace refineguard {

namespace {

[[noreturn]] void bad_access(const char* want, const Value& v) {
  throw ValueModelError(fmt::format("value is {}, not {}", v.tag_name(), want));
}

}  // namespace

bool HostHandle::has_tag(const std::string& t) const {
  if (type_tag == t) return true;
  return std::find(supertypes.begin(), supertypes.end(), t) != supertypes.end();
}

std::size_t NdArrayData::count() const {
  std::size_t n = 1;
  for (auto e : shape) n *= e;
  return n;
}

const Value* MapData::find(const Value& key) const {
  auto it = std::lower_bound(entries.begin(), entries.end(), key,
                             [](const auto& e, const Value& k) { return key_compare(e.first, k) < 0; });
  if (it != entries.end() && key_compare(it->first, key) == 0) return &it->second;
  return nullptr;
}

void MapData::set(const Value& key, const Value& value) {
  if (!key.is_hashable()) throw ValueModelError("unhashable map key: " + render(key));
  auto it = std::lower_bound(entries.begin(), entries.end(), key,
                             [](const auto& e, const Value& k) { return key_compare(e.first, k) < 0; });
  if (it != entries.end() && key_compare(it->first, key) == 0) {
    it->second = value;
  } else {
    entries.insert(it, {key, value});
  }
}

Value Value::none() { return Value(Rep(std::monostate{})); }
Value Value::boolean(bool b) { return Value(Rep(b)); }
Value Value::integer(BigInt n) { return Value(Rep(std::move(n))); }
Value Value::integer(long long n) { return Value(Rep(BigInt(n))); }
Value Value::real(double d) { return Value(Rep(d)); }
Value Value::text(std::string s) { return Value(Rep(std::move(s))); }

Value Value::seq(std::vector<Value> items) {
  return Value(Rep(std::make_shared<SeqData>(SeqData{std::move(items)})));
}

Value Value::tuple(std::vector<Value> items) {
  return Value(Rep(std::make_shared<TupleData>(TupleData{std::move(items)})));
}

Value Value::map(std::vector<std::pair<Value, Value>> entries) {
  auto data = std::make_shared<MapData>();
  for (auto& [k, v] : entries) data->set(k, v);
  return Value(Rep(std::move(data)));
}

Value Value::ndarray(std::vector<std::size_t> shape, std::vector<double> elems) {
  auto data = std::make_shared<NdArrayData>(NdArrayData{std::move(shape), std::move(elems)});
  if (data->count() != data->elems.size()) {
    throw ValueModelError(fmt::format("ndarray element count {} does not match shape product {}",
                                      data->elems.size(), data->count()));
  }
  return Value(Rep(std::move(data)));
}

Value Value::handle(HostHandle h) {
  return Value(Rep(std::make_shared<HostHandle>(std::move(h))));
}

ValueTag Value::tag() const {
  switch (rep_.index()) {
    case 0: return ValueTag::None;
    case 1: return ValueTag::Bool;
    case 2: return ValueTag::Int;
    case 3: return ValueTag::Float;
    case 4: return ValueTag::Text;
    case 5: return ValueTag::Seq;
    case 6: return ValueTag::Tuple;
    case 7: return ValueTag::Map;
    case 8: return ValueTag::NdArray;
    default: return ValueTag::HostHandleTag;
  }
}

const char* Value::tag_name() const {
  switch (tag()) {
    case ValueTag::None: return "None";
    case ValueTag::Bool: return "Bool";
    case ValueTag::Int: return "Int";
    case ValueTag::Float: return "Float";
    case ValueTag::Text: return "Text";
    case ValueTag::Seq: return "Seq";
    case ValueTag::Tuple: return "Tuple";
    case ValueTag::Map: return "Map";
    case ValueTag::NdArray: return "NdArray";
    case ValueTag::HostHandleTag: return "HostHandle";
  }
  return "?";
}

bool Value::as_bool() const {
  if (auto* p = std::get_if<bool>(&rep_)) return *p;
  bad_access("Bool", *this);
}

const BigInt& Value::as_int() const {
  if (auto* p = std::get_if<BigInt>(&rep_)) return *p;
  bad_access("Int", *this);
}

double Value::as_float() const {
  if (auto* p = std::get_if<double>(&rep_)) return *p;
  bad_access("Float", *this);
}

const std::string& Value::as_text() const {
  if (auto* p = std::get_if<std::string>(&rep_)) return *p;
  bad_access("Text", *this);
}

const std::vector<Value>& Value::seq_items() const {
  if (auto* p = std::get_if<std::shared_ptr<SeqData>>(&rep_)) return (*p)->items;
  if (auto* p = std::get_if<std::shared_ptr<TupleData>>(&rep_)) return (*p)->items;
  bad_access("Seq or Tuple", *this);
}

std::vector<Value>& Value::seq_items_mut() {
  if (auto* p = std::get_if<std::shared_ptr<SeqData>>(&rep_)) return (*p)->items;
  bad_access("Seq", *this);
}

const MapData& Value::map_data() const {
  if (auto* p = std::get_if<std::shared_ptr<MapData>>(&rep_)) return **p;
  bad_access("Map", *this);
}

MapData& Value::map_data_mut() {
  if (auto* p = std::get_if<std::shared_ptr<MapData>>(&rep_)) return **p;
  bad_access("Map", *this);
}

const NdArrayData& Value::array() const {
  if (auto* p = std::get_if<std::shared_ptr<NdArrayData>>(&rep_)) return **p;
  bad_access("NdArray", *this);
}

NdArrayData& Value::array_mut() {
  if (auto* p = std::get_if<std::shared_ptr<NdArrayData>>(&rep_)) return **p;
  bad_access("NdArray", *this);
}

const HostHandle& Value::handle_ref() const {
  if (auto* p = std::get_if<std::shared_ptr<HostHandle>>(&rep_)) return **p;
  bad_access("HostHandle", *this);
}

double Value::numeric_as_double() const {
  if (is_float()) return as_float();
  if (is_int()) return bigint_to_double(as_int());
  bad_access("numeric", *this);
}

bool Value::is_hashable() const {
  switch (tag()) {
    case ValueTag::None:
    case ValueTag::Bool:
    case ValueTag::Int:
    case ValueTag::Text:
      return true;
    case ValueTag::Float:
      return !std::isnan(as_float());
    case ValueTag::Tuple: {
      const auto& items = seq_items();
      return std::all_of(items.begin(), items.end(), [](const Value& v) { return v.is_hashable(); });
    }
    default:
      return false;
  }
}

double bigint_to_double(const BigInt& n) {
  if (boost::multiprecision::msb(n == 0 ? BigInt(1) : abs(n)) > 1030) {
    return n > 0 ? HUGE_VAL : -HUGE_VAL;
  }
  return n.convert_to<double>();
}

CompareResult int_float_compare(const BigInt& n, double d) {
  if (std::isnan(d)) return CompareResult::Unordered;
  if (std::isinf(d)) return d > 0 ? CompareResult::Less : CompareResult::Greater;
  const double fl = std::floor(d);
  const BigInt f(fl);
  if (n < f) return CompareResult::Less;
  if (n > f) return CompareResult::Greater;
  return d == fl ? CompareResult::Equal : CompareResult::Less;
}

namespace {

CompareResult numeric_compare(const Value& a, const Value& b) {
  if (a.is_int() && b.is_int()) {
    const auto& x = a.as_int();
    const auto& y = b.as_int();
    if (x < y) return CompareResult::Less;
    if (x > y) return CompareResult::Greater;
    return CompareResult::Equal;
  }
  if (a.is_float() && b.is_float()) {
    const double x = a.as_float();
    const double y = b.as_float();
    if (std::isnan(x) || std::isnan(y)) return CompareResult::Unordered;
    if (x < y) return CompareResult::Less;
    if (x > y) return CompareResult::Greater;
    return CompareResult::Equal;
  }
  if (a.is_int()) return int_float_compare(a.as_int(), b.as_float());
  // b is Int; flip.
  switch (int_float_compare(b.as_int(), a.as_float())) {
    case CompareResult::Less: return CompareResult::Greater;
    case CompareResult::Greater: return CompareResult::Less;
    case CompareResult::Equal: return CompareResult::Equal;
    default: return CompareResult::Unordered;
  }
}

CompareResult lexicographic_compare(const std::vector<Value>& a, const std::vector<Value>& b) {
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    const CompareResult c = value_compare(a[i], b[i]);
    if (c != CompareResult::Equal) return c;
  }
  if (a.size() < b.size()) return CompareResult::Less;
  if (a.size() > b.size()) return CompareResult::Greater;
  return CompareResult::Equal;
}

}  // namespace

bool value_eq(const Value& a, const Value& b) {
  if (a.is_numeric() && b.is_numeric()) {
    return numeric_compare(a, b) == CompareResult::Equal;
  }
  if (a.tag() != b.tag()) return false;
  switch (a.tag()) {
    case ValueTag::None: return true;
    case ValueTag::Bool: return a.as_bool() == b.as_bool();
    case ValueTag::Text: return a.as_text() == b.as_text();
    case ValueTag::Seq:
    case ValueTag::Tuple: {
      const auto& x = a.seq_items();
      const auto& y = b.seq_items();
      if (x.size() != y.size()) return false;
      for (std::size_t i = 0; i < x.size(); ++i) {
        if (!value_eq(x[i], y[i])) return false;
      }
      return true;
    }
    case ValueTag::Map: {
      const auto& x = a.map_data().entries;
      const auto& y = b.map_data().entries;
      if (x.size() != y.size()) return false;
      for (std::size_t i = 0; i < x.size(); ++i) {
        if (!value_eq(x[i].first, y[i].first) || !value_eq(x[i].second, y[i].second)) return false;
      }
      return true;
    }
    case ValueTag::NdArray: {
      const auto& x = a.array();
      const auto& y = b.array();
      return x.shape == y.shape &&
             std::equal(x.elems.begin(), x.elems.end(), y.elems.begin(), y.elems.end());
    }
    case ValueTag::HostHandleTag:
      return a.handle_ref().payload.get() == b.handle_ref().payload.get() &&
             a.handle_ref().type_tag == b.handle_ref().type_tag;
    default: return false;
  }
}

CompareResult value_compare(const Value& a, const Value& b) {
  if (a.is_numeric() && b.is_numeric()) return numeric_compare(a, b);
  if (a.tag() != b.tag()) return CompareResult::Incomparable;
  switch (a.tag()) {
    case ValueTag::None: return CompareResult::Equal;
    case ValueTag::Bool: {
      const int x = a.as_bool() ? 1 : 0;
      const int y = b.as_bool() ? 1 : 0;
      return x < y ? CompareResult::Less : x > y ? CompareResult::Greater : CompareResult::Equal;
    }
    case ValueTag::Text: {
      const int c = a.as_text().compare(b.as_text());
      return c < 0 ? CompareResult::Less : c > 0 ? CompareResult::Greater : CompareResult::Equal;
    }
    case ValueTag::Seq:
    case ValueTag::Tuple:
      return lexicographic_compare(a.seq_items(), b.seq_items());
    default:
      return CompareResult::Incomparable;
  }
}

int key_compare(const Value& a, const Value& b) {
  auto rank = [](const Value& v) {
    switch (v.tag()) {
      case ValueTag::None: return 0;
      case ValueTag::Bool: return 1;
      case ValueTag::Int:
      case ValueTag::Float: return 2;  // numeric tower merges for keys
      case ValueTag::Text: return 3;
      default: return 4;  // Tuple
    }
  };
  const int ra = rank(a);
  const int rb = rank(b);
  if (ra != rb) return ra < rb ? -1 : 1;
  switch (ra) {
    case 0: return 0;
    case 1: return (a.as_bool() ? 1 : 0) - (b.as_bool() ? 1 : 0);
    case 2: {
      switch (numeric_compare(a, b)) {
        case CompareResult::Less: return -1;
        case CompareResult::Greater: return 1;
        default: return 0;
      }
    }
    case 3: {
      const int c = a.as_text().compare(b.as_text());
      return c < 0 ? -1 : c > 0 ? 1 : 0;
    }
    default: {
      const auto& x = a.seq_items();
      const auto& y = b.seq_items();
      const std::size_t n = std::min(x.size(), y.size());
      for (std::size_t i = 0; i < n; ++i) {
        const int c = key_compare(x[i], y[i]);
        if (c != 0) return c;
      }
      if (x.size() != y.size()) return x.size() < y.size() ? -1 : 1;
      return 0;
    }
  }
}

std::string render_double(double d) {
  if (std::isnan(d)) return "nan";
  if (std::isinf(d)) return d > 0 ? "inf" : "-inf";
  return fmt::format("{}", d);
}

namespace {

std::string render_text(const std::string& s) {
  std::string out = "'";
  for (const char c : s) {
    switch (c) {
      case '\'': out += "\\'"; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          out += fmt::format("\\x{:02x}", static_cast<unsigned char>(c));
        } else {
          out += c;
        }
    }
  }
  out += "'";
  return out;
}

std::string render_joined(const std::vector<Value>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += ", ";
    out += render(items[i]);
  }
  return out;
}

constexpr std::size_t kArrayRenderLimit = 8;

}  // namespace

std::string render(const Value& v) {
  switch (v.tag()) {
    case ValueTag::None: return "None";
    case ValueTag::Bool: return v.as_bool() ? "True" : "False";
    case ValueTag::Int: return v.as_int().str();
    case ValueTag::Float: return render_double(v.as_float());
    case ValueTag::Text: return render_text(v.as_text());
    case ValueTag::Seq: return "[" + render_joined(v.seq_items()) + "]";
    case ValueTag::Tuple: {
      const auto& items = v.seq_items();
      if (items.size() == 1) return "(" + render(items[0]) + ",)";
      return "(" + render_joined(items) + ")";
    }
    case ValueTag::Map: {
      std::string out = "{";
      const auto& entries = v.map_data().entries;
      for (std::size_t i = 0; i < entries.size(); ++i) {
        if (i > 0) out += ", ";
        out += render(entries[i].first) + ": " + render(entries[i].second);
      }
      return out + "}";
    }
    case ValueTag::NdArray: {
      const auto& arr = v.array();
      std::string out = "NdArray(";
      for (std::size_t i = 0; i < arr.shape.size(); ++i) {
        if (i > 0) out += "×";
        out += std::to_string(arr.shape[i]);
      }
      out += ")[";
      const std::size_t n = std::min(arr.elems.size(), kArrayRenderLimit);
      for (std::size_t i = 0; i < n; ++i) {
        if (i > 0) out += ", ";
        out += render_double(arr.elems[i]);
      }
      if (arr.elems.size() > kArrayRenderLimit) out += ", ...";
      return out + "]";
    }
    case ValueTag::HostHandleTag:
      return "HostHandle(" + v.handle_ref().type_tag + ")";
  }
  return "?";
}

Value deep_snapshot(const Value& v) {
  switch (v.tag()) {
    case ValueTag::None:
    case ValueTag::Bool:
    case ValueTag::Int:
    case ValueTag::Float:
    case ValueTag::Text:
      return v;  // immutable payloads copied by value
    case ValueTag::Seq:
    case ValueTag::Tuple: {
      std::vector<Value> copy;
      copy.reserve(v.seq_items().size());
      for (const Value& item : v.seq_items()) copy.push_back(deep_snapshot(item));
      return v.is_seq() ? Value::seq(std::move(copy)) : Value::tuple(std::move(copy));
    }
    case ValueTag::Map: {
      std::vector<std::pair<Value, Value>> copy;
      copy.reserve(v.map_data().entries.size());
      for (const auto& [k, val] : v.map_data().entries) {
        copy.emplace_back(deep_snapshot(k), deep_snapshot(val));
      }
      return Value::map(std::move(copy));
    }
    case ValueTag::NdArray:
      return Value::ndarray(v.array().shape, v.array().elems);
    case ValueTag::HostHandleTag: {
      const HostHandle& h = v.handle_ref();
      if (!h.snapshot) {
        throw SnapshotUnsupported("HostHandle(" + h.type_tag + ") has no snapshot hook");
      }
      return h.snapshot(h);
    }
  }
  throw ValueModelError("unreachable tag in deep_snapshot");
}

}  // namespace refineguard
