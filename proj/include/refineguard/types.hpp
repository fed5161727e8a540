#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "refineguard/value.hpp"

namespace refineguard {

class RefinementType;
using TypePtr = std::shared_ptr<const RefinementType>;

using Pred = std::function<bool(const Value&)>;
using RandomFn = std::function<std::optional<Value>(std::mt19937_64&)>;

// A refinement type: a total membership predicate over Values plus a
// bounded, seeded generation stream (possibly empty for ungeneratable
// types). Immutable after construction.
class RefinementType {
 public:
  virtual ~RefinementType() = default;

  const std::string& name() const { return name_; }

  // Total membership test. Foreign tags yield false; a user hook that
  // throws is surfaced as ContractMalformedError.
  bool check(const Value& v) const;

  // Deterministic bounded stream: boundary members first, then seeded
  // pseudo-random members. Empty when the type cannot generate.
  std::vector<Value> generate(std::uint64_t seed, std::size_t max_count) const;

  // One pseudo-random member mixing boundary and random draws; nullopt
  // when the type cannot generate. Used by container generators.
  std::optional<Value> sample(std::mt19937_64& rng) const;

  bool generatable() const { return !boundary_.empty() || static_cast<bool>(random_); }

 protected:
  RefinementType(std::string name, Pred pred, std::vector<Value> boundary_candidates,
                 RandomFn random);

 private:
  std::string name_;
  Pred pred_;
  std::vector<Value> boundary_;  // candidates that passed pred, deduplicated
  RandomFn random_;
};

namespace types {

// Numerical rows
TypePtr numeric();
TypePtr extended_real();
TypePtr number();
TypePtr integer();
TypePtr natural0();
TypePtr natural1();
TypePtr range(double lo, double hi);
TypePtr range_closed_open(double lo, double hi);
TypePtr range_open_closed(double lo, double hi);
TypePtr range_open(double lo, double hi);
TypePtr positive0();
TypePtr positive();
TypePtr ndarray(std::optional<std::size_t> ndim = std::nullopt, TypePtr elem = nullptr);

// String rows
TypePtr string_type();
TypePtr identifier();
TypePtr alphanumeric();
TypePtr latin();

// Collection rows
TypePtr tuple_of(std::vector<TypePtr> elems);
TypePtr list_of(TypePtr elem);
TypePtr dict_of(TypePtr key, TypePtr value);
TypePtr set_of_chars(std::string alphabet);
TypePtr set_of(TypePtr elem);
TypePtr parameters_dict(std::vector<std::pair<std::string, TypePtr>> spec);

// Logical rows
TypePtr and_type(std::vector<TypePtr> parts);
TypePtr or_type(std::vector<TypePtr> parts);
TypePtr not_type(TypePtr part);

// Special rows
TypePtr boolean();
TypePtr function_value();
TypePtr constant(Value v);
TypePtr nothing();
TypePtr unchecked();
TypePtr void_type();
TypePtr maybe(TypePtr part);

// Host-defined nominal type used as a refinement type. Without hooks,
// membership is instance-of with subtype acceptance.
TypePtr nominal(std::string type_tag, Pred custom_check = nullptr,
                RandomFn custom_generate = nullptr);

// Hand-written refinement type from a predicate and optional generators.
TypePtr custom(std::string name, Pred pred, std::vector<Value> boundary = {},
               RandomFn random = nullptr);

}  // namespace types

struct CatalogueEntry {
  bool parameterized = false;
  TypePtr instance;  // parameterized rows hold a representative instantiation
};

// One entry per default-type row. Parameterized rows are exposed as the
// factory functions above; their map entry carries a representative.
std::map<std::string, CatalogueEntry> build_default_catalogue();

}  // namespace refineguard
