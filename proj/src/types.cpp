#include "refineguard/types.hpp"

#include <fmt/format.h>

#include <cmath>
#include <cstdint>
#include <utility>

#include "refineguard/errors.hpp"

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

bool is_finite_number(const Value& v) {
  if (v.is_int()) return true;
  return v.is_float() && std::isfinite(v.as_float());
}

double numeric_lane(const Value& v) { return v.numeric_as_double(); }

// Small-magnitude-biased signed integer, occasionally hundreds of bits wide.
BigInt random_bigint(std::mt19937_64& rng) {
  BigInt m = rng() >> (rng() % 64);
  if ((rng() & 7u) == 0) m = m * rng() + rng();
  if (rng() & 1u) m = -m;
  return m;
}

double random_finite_double(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  int exponent = static_cast<int>(rng() % 13) - 6;
  return unit(rng) * std::pow(10.0, exponent);
}

Value random_number(std::mt19937_64& rng) {
  if (rng() & 1u) return Value::integer(random_bigint(rng));
  return Value::real(random_finite_double(rng));
}

std::vector<Value> number_boundary() {
  return {Value::integer(0), Value::integer(1),  Value::integer(-1),
          Value::real(0.0),  Value::real(0.5),   Value::real(-0.5)};
}

class SimpleType;

}  // namespace

RefinementType::RefinementType(std::string name, Pred pred,
                               std::vector<Value> boundary_candidates, RandomFn random)
    : name_(std::move(name)), pred_(std::move(pred)), random_(std::move(random)) {
  for (const Value& c : boundary_candidates) {
    bool member = false;
    try {
      member = pred_(c);
    } catch (...) {
      member = false;  // hostile hooks only surface on an actual check()
    }
    if (!member) continue;
    bool seen = false;
    for (const Value& prev : boundary_)
      if (value_eq(prev, c)) {
        seen = true;
        break;
      }
    if (!seen) boundary_.push_back(c);
  }
}

bool RefinementType::check(const Value& v) const {
  try {
    return pred_(v);
  } catch (const ContractMalformedError&) {
    throw;
  } catch (const std::exception& e) {
    throw ContractMalformedError(
        fmt::format("membership test for type {} raised: {}", name_, e.what()));
  } catch (...) {
    throw ContractMalformedError(
        fmt::format("membership test for type {} raised a non-standard exception", name_));
  }
}

std::vector<Value> RefinementType::generate(std::uint64_t seed, std::size_t max_count) const {
  std::vector<Value> out;
  for (const Value& b : boundary_) {
    if (out.size() >= max_count) return out;
    out.push_back(b);
  }
  if (!random_) return out;
  std::mt19937_64 rng(mix_seed(seed, name_));
  std::size_t dry_spells = 0;
  while (out.size() < max_count && dry_spells < 64) {
    if (auto v = random_(rng)) {
      out.push_back(std::move(*v));
      dry_spells = 0;
    } else {
      ++dry_spells;
    }
  }
  return out;
}

std::optional<Value> RefinementType::sample(std::mt19937_64& rng) const {
  if (random_ && (boundary_.empty() || (rng() & 3u) != 0)) {
    for (int attempt = 0; attempt < 16; ++attempt)
      if (auto v = random_(rng)) return v;
  }
  if (!boundary_.empty()) return boundary_[rng() % boundary_.size()];
  return std::nullopt;
}

namespace {

class SimpleType final : public RefinementType {
 public:
  SimpleType(std::string name, Pred pred, std::vector<Value> boundary, RandomFn random)
      : RefinementType(std::move(name), std::move(pred), std::move(boundary),
                       std::move(random)) {}
};

TypePtr make_type(std::string name, Pred pred, std::vector<Value> boundary = {},
                  RandomFn random = nullptr) {
  return std::make_shared<SimpleType>(std::move(name), std::move(pred), std::move(boundary),
                                      std::move(random));
}

std::string join_names(const std::vector<TypePtr>& parts) {
  std::string out;
  for (const TypePtr& t : parts) {
    if (!out.empty()) out += ", ";
    out += t->name();
  }
  return out;
}

// in_range via exact comparison so that huge Ints near the endpoints are
// classified correctly rather than through a lossy double round-trip.
bool in_range(const Value& v, double lo, double hi, bool incl_lo, bool incl_hi) {
  if (!is_finite_number(v)) return false;
  CompareResult against_lo = v.is_int() ? int_float_compare(v.as_int(), lo)
                                        : (v.as_float() < lo    ? CompareResult::Less
                                           : v.as_float() == lo ? CompareResult::Equal
                                                                : CompareResult::Greater);
  if (against_lo == CompareResult::Less) return false;
  if (against_lo == CompareResult::Equal && !incl_lo) return false;
  CompareResult against_hi = v.is_int() ? int_float_compare(v.as_int(), hi)
                                        : (v.as_float() < hi    ? CompareResult::Less
                                           : v.as_float() == hi ? CompareResult::Equal
                                                                : CompareResult::Greater);
  if (against_hi == CompareResult::Greater) return false;
  if (against_hi == CompareResult::Equal && !incl_hi) return false;
  return true;
}

TypePtr make_range(const std::string& name, double lo, double hi, bool incl_lo, bool incl_hi) {
  if (!(lo < hi))
    throw ContractMalformedError(fmt::format("{}: bottom {} must be below top {}", name,
                                             render_double(lo), render_double(hi)));
  Pred pred = [=](const Value& v) { return in_range(v, lo, hi, incl_lo, incl_hi); };
  std::vector<Value> boundary = {Value::real(lo),
                                 Value::real(hi),
                                 Value::real(lo + (hi - lo) / 2.0),
                                 Value::real(std::nextafter(lo, hi)),
                                 Value::real(std::nextafter(hi, lo)),
                                 Value::real(0.0),
                                 Value::integer(0),
                                 Value::integer(1),
                                 Value::integer(-1)};
  RandomFn random = [=](std::mt19937_64& rng) -> std::optional<Value> {
    Value v = Value::none();
    if ((rng() & 3u) == 0) {
      long long lo_i = static_cast<long long>(std::ceil(lo));
      long long hi_i = static_cast<long long>(std::floor(hi));
      if (lo_i <= hi_i) {
        std::uniform_int_distribution<long long> d(lo_i, hi_i);
        v = Value::integer(d(rng));
      }
    }
    if (v.is_none()) {
      std::uniform_real_distribution<double> d(lo, hi);
      v = Value::real(d(rng));
    }
    if (!in_range(v, lo, hi, incl_lo, incl_hi)) return std::nullopt;  // open endpoint hit
    return v;
  };
  return make_type(fmt::format("{}({}, {})", name, render_double(lo), render_double(hi)),
                   std::move(pred), std::move(boundary), std::move(random));
}

// Draws an element for an NdArray slot: the stored form is always a Float,
// so membership is re-verified on the stored form.
std::optional<double> sample_array_element(const TypePtr& elem, std::mt19937_64& rng) {
  if (!elem) {
    if ((rng() & 3u) == 0) return static_cast<double>(static_cast<int>(rng() % 21) - 10);
    return random_finite_double(rng);
  }
  for (int attempt = 0; attempt < 16; ++attempt) {
    auto v = elem->sample(rng);
    if (!v || !v->is_numeric()) continue;
    double d = numeric_lane(*v);
    if (elem->check(Value::real(d))) return d;
  }
  return std::nullopt;
}

}  // namespace

namespace types {

TypePtr numeric() {
  std::vector<Value> boundary = number_boundary();
  boundary.push_back(Value::real(std::nan("")));
  boundary.push_back(Value::real(HUGE_VAL));
  boundary.push_back(Value::real(-HUGE_VAL));
  return make_type(
      "Numeric", [](const Value& v) { return v.is_numeric(); }, std::move(boundary),
      [](std::mt19937_64& rng) -> std::optional<Value> {
        switch (rng() % 8) {
          case 0:
            return Value::real(std::nan(""));
          case 1:
            return Value::real((rng() & 1u) ? HUGE_VAL : -HUGE_VAL);
          default:
            return random_number(rng);
        }
      });
}

TypePtr extended_real() {
  std::vector<Value> boundary = number_boundary();
  boundary.push_back(Value::real(HUGE_VAL));
  boundary.push_back(Value::real(-HUGE_VAL));
  return make_type(
      "ExtendedReal",
      [](const Value& v) {
        return v.is_int() || (v.is_float() && !std::isnan(v.as_float()));
      },
      std::move(boundary),
      [](std::mt19937_64& rng) -> std::optional<Value> {
        if (rng() % 8 == 0) return Value::real((rng() & 1u) ? HUGE_VAL : -HUGE_VAL);
        return random_number(rng);
      });
}

TypePtr number() {
  return make_type("Number", is_finite_number, number_boundary(),
                   [](std::mt19937_64& rng) -> std::optional<Value> {
                     return random_number(rng);
                   });
}

TypePtr integer() {
  return make_type(
      "Integer", [](const Value& v) { return v.is_int(); },
      {Value::integer(0), Value::integer(1), Value::integer(-1),
       Value::integer(BigInt("1000000000000000000000000000000"))},
      [](std::mt19937_64& rng) -> std::optional<Value> {
        return Value::integer(random_bigint(rng));
      });
}

TypePtr natural0() {
  return make_type(
      "Natural0", [](const Value& v) { return v.is_int() && v.as_int() >= 0; },
      {Value::integer(0), Value::integer(1),
       Value::integer(BigInt("1000000000000000000000000000000"))},
      [](std::mt19937_64& rng) -> std::optional<Value> {
        return Value::integer(abs(random_bigint(rng)));
      });
}

TypePtr natural1() {
  return make_type(
      "Natural1", [](const Value& v) { return v.is_int() && v.as_int() > 0; },
      {Value::integer(1), Value::integer(2),
       Value::integer(BigInt("1000000000000000000000000000000"))},
      [](std::mt19937_64& rng) -> std::optional<Value> {
        return Value::integer(abs(random_bigint(rng)) + 1);
      });
}

TypePtr range(double lo, double hi) { return make_range("Range", lo, hi, true, true); }

TypePtr range_closed_open(double lo, double hi) {
  return make_range("RangeClosedOpen", lo, hi, true, false);
}

TypePtr range_open_closed(double lo, double hi) {
  return make_range("RangeOpenClosed", lo, hi, false, true);
}

TypePtr range_open(double lo, double hi) { return make_range("RangeOpen", lo, hi, false, false); }

TypePtr positive0() {
  return make_type(
      "Positive0",
      [](const Value& v) {
        if (!is_finite_number(v)) return false;
        return v.is_int() ? v.as_int() >= 0 : v.as_float() >= 0.0;
      },
      {Value::integer(0), Value::integer(1), Value::real(0.0), Value::real(0.5)},
      [](std::mt19937_64& rng) -> std::optional<Value> {
        if (rng() & 1u) return Value::integer(abs(random_bigint(rng)));
        return Value::real(std::fabs(random_finite_double(rng)));
      });
}

TypePtr positive() {
  return make_type(
      "Positive",
      [](const Value& v) {
        if (!is_finite_number(v)) return false;
        return v.is_int() ? v.as_int() > 0 : v.as_float() > 0.0;
      },
      {Value::integer(1), Value::real(0.5), Value::real(1e-9)},
      [](std::mt19937_64& rng) -> std::optional<Value> {
        if (rng() & 1u) return Value::integer(abs(random_bigint(rng)) + 1);
        double d = std::fabs(random_finite_double(rng));
        if (d == 0.0) return std::nullopt;
        return Value::real(d);
      });
}

TypePtr ndarray(std::optional<std::size_t> ndim, TypePtr elem) {
  std::string name = "NDArray";
  if (ndim && elem)
    name = fmt::format("NDArray(d={}, t={})", *ndim, elem->name());
  else if (ndim)
    name = fmt::format("NDArray(d={})", *ndim);
  else if (elem)
    name = fmt::format("NDArray(t={})", elem->name());

  Pred pred = [ndim, elem](const Value& v) {
    if (!v.is_ndarray()) return false;
    const NdArrayData& a = v.array();
    if (ndim && a.shape.size() != *ndim) return false;
    if (elem)
      for (double d : a.elems)
        if (!elem->check(Value::real(d))) return false;
    return true;
  };

  std::vector<Value> boundary;
  {
    std::size_t rank = ndim.value_or(1);
    std::vector<std::size_t> empty_shape(rank, 1);
    empty_shape[0] = 0;
    boundary.push_back(Value::ndarray(empty_shape, {}));
    std::mt19937_64 rng(mix_seed(7, name));
    if (auto d0 = sample_array_element(elem, rng)) {
      boundary.push_back(Value::ndarray(std::vector<std::size_t>(rank, 1), {*d0}));
      std::vector<double> grid;
      bool full = true;
      for (int i = 0; i < (1 << rank) && full; ++i) {
        if (auto di = sample_array_element(elem, rng))
          grid.push_back(*di);
        else
          full = false;
      }
      if (full) boundary.push_back(Value::ndarray(std::vector<std::size_t>(rank, 2), grid));
    }
  }

  RandomFn random = [ndim, elem](std::mt19937_64& rng) -> std::optional<Value> {
    std::size_t rank = ndim.value_or(1 + rng() % 3);
    std::vector<std::size_t> shape(rank);
    std::size_t count = 1;
    for (std::size_t& extent : shape) {
      extent = rng() % 5;
      count *= extent;
    }
    std::vector<double> elems;
    elems.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
      auto d = sample_array_element(elem, rng);
      if (!d) {  // element type has no numeric members: only empty arrays exist
        shape.assign(rank, 0);
        return Value::ndarray(shape, {});
      }
      elems.push_back(*d);
    }
    return Value::ndarray(shape, elems);
  };

  return make_type(std::move(name), std::move(pred), std::move(boundary), std::move(random));
}

namespace {

constexpr const char* kTextPool = "abcxyzABC XYZ012_-.%";

TypePtr make_char_class(const std::string& name, std::vector<Value> boundary,
                        std::string random_pool, Pred char_ok) {
  Pred pred = [char_ok](const Value& v) {
    if (!v.is_text() || v.as_text().empty()) return false;
    for (char c : v.as_text())
      if (!char_ok(Value::text(std::string(1, c)))) return false;
    return true;
  };
  RandomFn random = [pool = std::move(random_pool)](std::mt19937_64& rng) -> std::optional<Value> {
    std::size_t len = 1 + rng() % 8;
    std::string s;
    for (std::size_t i = 0; i < len; ++i) s += pool[rng() % pool.size()];
    return Value::text(s);
  };
  return make_type(name, std::move(pred), std::move(boundary), std::move(random));
}

}  // namespace

TypePtr string_type() {
  return make_type(
      "String", [](const Value& v) { return v.is_text(); },
      {Value::text(""), Value::text("a"), Value::text("hello world"), Value::text("h\xc3\xa9llo")},
      [](std::mt19937_64& rng) -> std::optional<Value> {
        std::size_t len = rng() % 7;
        std::string pool = kTextPool;
        std::string s;
        for (std::size_t i = 0; i < len; ++i) s += pool[rng() % pool.size()];
        return Value::text(s);
      });
}

TypePtr identifier() {
  auto ok = [](const Value& ch) {
    char c = ch.as_text()[0];
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
           c == '_' || c == '-';
  };
  return make_char_class(
      "Identifier",
      {Value::text("a"), Value::text("_"), Value::text("-"), Value::text("A0_-")},
      "abcXYZ012_-", ok);
}

TypePtr alphanumeric() {
  auto ok = [](const Value& ch) {
    char c = ch.as_text()[0];
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
  };
  return make_char_class("Alphanumeric",
                         {Value::text("a"), Value::text("A"), Value::text("0"), Value::text("a0")},
                         "abcXYZ012", ok);
}

TypePtr latin() {
  auto ok = [](const Value& ch) {
    char c = ch.as_text()[0];
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
  };
  return make_char_class("Latin", {Value::text("a"), Value::text("A"), Value::text("zz")},
                         "abcXYZ", ok);
}

TypePtr tuple_of(std::vector<TypePtr> elems) {
  std::string name = fmt::format("Tuple({})", join_names(elems));
  Pred pred = [elems](const Value& v) {
    if (!v.is_tuple()) return false;
    const auto& items = v.seq_items();
    if (items.size() != elems.size()) return false;
    for (std::size_t i = 0; i < items.size(); ++i)
      if (!elems[i]->check(items[i])) return false;
    return true;
  };
  std::vector<Value> boundary;
  for (std::uint64_t slot = 0; slot < 2; ++slot) {
    std::vector<Value> items;
    bool full = true;
    for (const TypePtr& t : elems) {
      auto stream = t->generate(slot, slot + 1);
      if (stream.size() <= slot) {
        full = false;
        break;
      }
      items.push_back(stream[slot]);
    }
    if (full) boundary.push_back(Value::tuple(items));
  }
  RandomFn random = [elems](std::mt19937_64& rng) -> std::optional<Value> {
    std::vector<Value> items;
    for (const TypePtr& t : elems) {
      auto v = t->sample(rng);
      if (!v) return std::nullopt;
      items.push_back(std::move(*v));
    }
    return Value::tuple(items);
  };
  return make_type(std::move(name), std::move(pred), std::move(boundary), std::move(random));
}

TypePtr list_of(TypePtr elem) {
  std::string name = fmt::format("List({})", elem->name());
  Pred pred = [elem](const Value& v) {
    if (!v.is_seq()) return false;
    for (const Value& item : v.seq_items())
      if (!elem->check(item)) return false;
    return true;
  };
  std::vector<Value> boundary = {Value::seq({})};
  {
    auto first = elem->generate(11, 1);
    if (!first.empty()) boundary.push_back(Value::seq({first[0]}));
  }
  RandomFn random = [elem](std::mt19937_64& rng) -> std::optional<Value> {
    std::size_t len = rng() % 7;
    std::vector<Value> items;
    for (std::size_t i = 0; i < len; ++i) {
      auto v = elem->sample(rng);
      if (!v) break;  // ungeneratable element type: degrade to what we have
      items.push_back(std::move(*v));
    }
    return Value::seq(items);
  };
  return make_type(std::move(name), std::move(pred), std::move(boundary), std::move(random));
}

TypePtr dict_of(TypePtr key, TypePtr value) {
  std::string name = fmt::format("Dict({}, {})", key->name(), value->name());
  Pred pred = [key, value](const Value& v) {
    if (!v.is_map()) return false;
    for (const auto& entry : v.map_data().entries) {
      if (!key->check(entry.first)) return false;
      if (!value->check(entry.second)) return false;
    }
    return true;
  };
  std::vector<Value> boundary = {Value::map({})};
  {
    auto k0 = key->generate(13, 1);
    auto v0 = value->generate(17, 1);
    if (!k0.empty() && !v0.empty() && k0[0].is_hashable())
      boundary.push_back(Value::map({{k0[0], v0[0]}}));
  }
  RandomFn random = [key, value](std::mt19937_64& rng) -> std::optional<Value> {
    std::size_t len = rng() % 5;
    Value out = Value::map({});
    for (std::size_t i = 0; i < len; ++i) {
      std::optional<Value> k;
      for (int attempt = 0; attempt < 8 && !k; ++attempt) {
        k = key->sample(rng);
        if (k && !k->is_hashable()) k.reset();
      }
      auto v = value->sample(rng);
      if (!k || !v) break;
      out.map_data_mut().set(*k, *v);
    }
    return out;
  };
  return make_type(std::move(name), std::move(pred), std::move(boundary), std::move(random));
}

TypePtr set_of_chars(std::string alphabet) {
  if (alphabet.empty()) throw ContractMalformedError("Set: alphabet must be non-empty");
  std::string name = fmt::format("Set('{}')", alphabet);
  Pred pred = [alphabet](const Value& v) {
    return v.is_text() && v.as_text().size() == 1 &&
           alphabet.find(v.as_text()[0]) != std::string::npos;
  };
  std::vector<Value> boundary;
  for (std::size_t i = 0; i < alphabet.size() && i < 8; ++i)
    boundary.push_back(Value::text(std::string(1, alphabet[i])));
  RandomFn random = [alphabet](std::mt19937_64& rng) -> std::optional<Value> {
    return Value::text(std::string(1, alphabet[rng() % alphabet.size()]));
  };
  return make_type(std::move(name), std::move(pred), std::move(boundary), std::move(random));
}

TypePtr set_of(TypePtr elem) {
  std::string name = fmt::format("Set({})", elem->name());
  Pred pred = [elem](const Value& v) {
    if (!v.is_seq()) return false;
    const auto& items = v.seq_items();
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (!elem->check(items[i])) return false;
      for (std::size_t j = 0; j < i; ++j)
        if (value_eq(items[i], items[j])) return false;
    }
    return true;
  };
  std::vector<Value> boundary = {Value::seq({})};
  {
    auto first = elem->generate(19, 1);
    if (!first.empty()) boundary.push_back(Value::seq({first[0]}));
  }
  RandomFn random = [elem](std::mt19937_64& rng) -> std::optional<Value> {
    std::size_t want = rng() % 5;
    std::vector<Value> items;
    for (std::size_t i = 0; i < want * 3 && items.size() < want; ++i) {
      auto v = elem->sample(rng);
      if (!v) break;
      bool dup = false;
      for (const Value& prev : items)
        if (value_eq(prev, *v)) {
          dup = true;
          break;
        }
      if (!dup) items.push_back(std::move(*v));
    }
    return Value::seq(items);
  };
  return make_type(std::move(name), std::move(pred), std::move(boundary), std::move(random));
}

TypePtr parameters_dict(std::vector<std::pair<std::string, TypePtr>> spec) {
  std::map<std::string, TypePtr> table(spec.begin(), spec.end());
  std::string inner;
  for (const auto& [k, t] : table) {
    if (!inner.empty()) inner += ", ";
    inner += fmt::format("{}={}", k, t->name());
  }
  std::string name = fmt::format("ParametersDict({})", inner);
  Pred pred = [table](const Value& v) {
    if (!v.is_map()) return false;
    for (const auto& entry : v.map_data().entries) {
      if (!entry.first.is_text()) return false;
      auto it = table.find(entry.first.as_text());
      if (it == table.end()) return false;
      if (!it->second->check(entry.second)) return false;
    }
    return true;
  };
  std::vector<Value> boundary = {Value::map({})};
  {
    Value full = Value::map({});
    for (const auto& [k, t] : table) {
      auto v0 = t->generate(23, 1);
      if (!v0.empty()) full.map_data_mut().set(Value::text(k), v0[0]);
    }
    boundary.push_back(full);
  }
  RandomFn random = [table](std::mt19937_64& rng) -> std::optional<Value> {
    Value out = Value::map({});
    for (const auto& [k, t] : table) {
      if (rng() & 1u) continue;  // each key independently optional
      auto v = t->sample(rng);
      if (v) out.map_data_mut().set(Value::text(k), *v);
    }
    return out;
  };
  return make_type(std::move(name), std::move(pred), std::move(boundary), std::move(random));
}

TypePtr and_type(std::vector<TypePtr> parts) {
  if (parts.empty()) throw ContractMalformedError("And: needs at least one part");
  std::string name = fmt::format("And({})", join_names(parts));
  Pred pred = [parts](const Value& v) {
    for (const TypePtr& t : parts)
      if (!t->check(v)) return false;
    return true;
  };
  std::vector<Value> boundary = parts[0]->generate(29, 8);  // re-filtered by pred
  RandomFn random = [parts](std::mt19937_64& rng) -> std::optional<Value> {
    for (int attempt = 0; attempt < 16; ++attempt) {
      auto v = parts[0]->sample(rng);
      if (!v) return std::nullopt;
      bool ok = true;
      for (std::size_t i = 1; i < parts.size() && ok; ++i) ok = parts[i]->check(*v);
      if (ok) return v;
    }
    return std::nullopt;
  };
  return make_type(std::move(name), std::move(pred), std::move(boundary), std::move(random));
}

TypePtr or_type(std::vector<TypePtr> parts) {
  if (parts.empty()) throw ContractMalformedError("Or: needs at least one part");
  std::string name = fmt::format("Or({})", join_names(parts));
  Pred pred = [parts](const Value& v) {
    for (const TypePtr& t : parts)
      if (t->check(v)) return true;
    return false;
  };
  std::vector<Value> boundary;
  for (const TypePtr& t : parts)
    for (Value& v : t->generate(31, 2)) boundary.push_back(std::move(v));
  RandomFn random = [parts](std::mt19937_64& rng) -> std::optional<Value> {
    return parts[rng() % parts.size()]->sample(rng);
  };
  return make_type(std::move(name), std::move(pred), std::move(boundary), std::move(random));
}

TypePtr not_type(TypePtr part) {
  return make_type(fmt::format("Not({})", part->name()),
                   [part](const Value& v) { return !part->check(v); });
}

TypePtr boolean() {
  return make_type(
      "Boolean", [](const Value& v) { return v.is_bool(); },
      {Value::boolean(false), Value::boolean(true)});
}

TypePtr function_value() {
  return make_type("Function", [](const Value& v) {
    return v.is_handle() && v.handle_ref().callable;
  });
}

TypePtr constant(Value v) {
  std::string name = fmt::format("Constant({})", render(v));
  Value held = deep_snapshot(v);
  return make_type(std::move(name),
                   [held](const Value& other) { return value_eq(held, other); }, {held});
}

TypePtr nothing() {
  return make_type(
      "Nothing", [](const Value& v) { return v.is_none(); }, {Value::none()});
}

TypePtr unchecked() {
  return make_type("Unchecked", [](const Value&) { return true; });
}

TypePtr void_type() {
  return make_type("Void", [](const Value&) { return false; });
}

TypePtr maybe(TypePtr part) {
  std::string name = fmt::format("Maybe({})", part->name());
  Pred pred = [part](const Value& v) { return v.is_none() || part->check(v); };
  std::vector<Value> boundary = {Value::none()};
  for (Value& v : part->generate(37, 2)) boundary.push_back(std::move(v));
  RandomFn random = [part](std::mt19937_64& rng) -> std::optional<Value> {
    if (rng() % 8 == 0) return Value::none();
    return part->sample(rng);
  };
  return make_type(std::move(name), std::move(pred), std::move(boundary), std::move(random));
}

TypePtr nominal(std::string type_tag, Pred custom_check, RandomFn custom_generate) {
  Pred pred;
  if (custom_check) {
    pred = std::move(custom_check);
  } else {
    pred = [type_tag](const Value& v) { return v.is_handle() && v.handle_ref().has_tag(type_tag); };
  }
  return make_type(std::move(type_tag), std::move(pred), {}, std::move(custom_generate));
}

TypePtr custom(std::string name, Pred pred, std::vector<Value> boundary, RandomFn random) {
  return make_type(std::move(name), std::move(pred), std::move(boundary), std::move(random));
}

}  // namespace types

std::map<std::string, CatalogueEntry> build_default_catalogue() {
  using namespace types;
  std::map<std::string, CatalogueEntry> table;
  auto simple = [&](const std::string& row, TypePtr t) { table[row] = {false, std::move(t)}; };
  auto param = [&](const std::string& row, TypePtr rep) { table[row] = {true, std::move(rep)}; };

  simple("Numeric", numeric());
  simple("ExtendedReal", extended_real());
  simple("Number", number());
  simple("Integer", integer());
  simple("Natural0", natural0());
  simple("Natural1", natural1());
  param("Range", range(-1.0, 1.0));
  param("RangeClosedOpen", range_closed_open(-1.0, 1.0));
  param("RangeOpenClosed", range_open_closed(-1.0, 1.0));
  param("RangeOpen", range_open(-1.0, 1.0));
  simple("Positive0", positive0());
  simple("Positive", positive());
  param("NDArray", ndarray());
  simple("String", string_type());
  simple("Identifier", identifier());
  simple("Alphanumeric", alphanumeric());
  simple("Latin", latin());
  param("Tuple", tuple_of({number(), string_type()}));
  param("List", list_of(number()));
  param("Dict", dict_of(string_type(), number()));
  param("Set", set_of_chars("AGCT"));
  param("ParametersDict", parameters_dict({{"a", number()}, {"b", string_type()}}));
  param("And", and_type({number(), positive0()}));
  param("Or", or_type({integer(), string_type()}));
  param("Not", not_type(number()));
  simple("Boolean", boolean());
  simple("Function", function_value());
  param("Constant", constant(Value::integer(5)));
  simple("Nothing", nothing());
  simple("Unchecked", unchecked());
  simple("Void", void_type());
  param("Maybe", maybe(number()));
  return table;
}

}  // namespace refineguard
