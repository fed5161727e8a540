#pragma once

#include <stdexcept>
#include <string>

namespace refineguard {

// Deep-snapshot hit a HostHandle without a snapshot hook.
class SnapshotUnsupported : public std::runtime_error {
 public:
  explicit SnapshotUnsupported(const std::string& msg) : std::runtime_error(msg) {}
};

// The contract itself is broken (bad predicate, unparseable or ill-typed
// condition, unbound name). Never signals a value-level violation.
class ContractMalformedError : public std::runtime_error {
 public:
  explicit ContractMalformedError(const std::string& msg) : std::runtime_error(msg) {}
};

// Internal misuse of the value model: wrong-tag accessor, shape/element
// count mismatch, unhashable map key.
class ValueModelError : public std::logic_error {
 public:
  explicit ValueModelError(const std::string& msg) : std::logic_error(msg) {}
};

class UnknownFunctionError : public std::runtime_error {
 public:
  explicit UnknownFunctionError(const std::string& name)
      : std::runtime_error("unknown function: " + name) {}
};

class UnknownWorkloadError : public std::runtime_error {
 public:
  explicit UnknownWorkloadError(const std::string& name)
      : std::runtime_error("unknown workload: " + name) {}
};

}  // namespace refineguard
