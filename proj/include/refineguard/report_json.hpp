#pragma once

#include <string>

#include <json.hpp>

#include "refineguard/autotest.hpp"
#include "refineguard/bench.hpp"

namespace refineguard {

// Versioned machine-readable report (schema 1): top level {schema, suite,
// seed, plan, functions, totals}. Field layout documented in
// docs/report-schema.md.
nlohmann::json report_to_json(const TestReport& report, const std::string& suite);

// Inverse of report_to_json on every serialized field; the pair round-trips.
TestReport report_from_json(const nlohmann::json& doc);

std::string report_to_text(const TestReport& report, const std::string& suite);

nlohmann::json bench_to_json(const BenchResult& result);
std::string bench_to_text(const BenchResult& result);

}  // namespace refineguard
