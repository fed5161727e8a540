#include "refineguard/fixtures.hpp"

#include <cmath>
#include <random>

namespace refineguard::fixtures {

namespace {

constexpr const char* kMonotone = "t >= t` --> return >= return`";

// Reverse complement: complementing and reversing commute, and only the
// reversed form satisfies "every position differs from the reversed output".
Value complement_sequence_impl(const std::map<std::string, Value>& args) {
  const auto& bases = args.at("seq").seq_items();
  std::vector<Value> out;
  out.reserve(bases.size());
  for (auto it = bases.rbegin(); it != bases.rend(); ++it) {
    const std::string& b = it->as_text();
    const char* comp = b == "A" ? "T" : b == "T" ? "A" : b == "C" ? "G" : "C";
    out.push_back(Value::text(comp));
  }
  return Value::seq(std::move(out));
}

// Elementwise atanh; produces ±inf at ±1 and NaN outside [-1, 1], which is
// exactly what the demo contracts are there to catch.
Value fisher_transform_impl(const std::map<std::string, Value>& args) {
  const NdArrayData& a = args.at("corr_values").array();
  std::vector<double> out(a.elems.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::atanh(a.elems[i]);
  return Value::ndarray(a.shape, std::move(out));
}

// Both power fixtures go through double so an Int and the equal Float give
// the identical result; x -> x*x*x is monotone under round-to-nearest.
Value cube_impl(const std::map<std::string, Value>& args) {
  double t = args.at("t").numeric_as_double();
  return Value::real(t * t * t);
}

Value square_impl(const std::map<std::string, Value>& args) {
  double t = args.at("t").numeric_as_double();
  return Value::real(t * t);
}

Value sqrt_impl(const std::map<std::string, Value>& args) {
  return Value::real(std::sqrt(args.at("x").numeric_as_double()));
}

Value log_impl(const std::map<std::string, Value>& args) {
  return Value::real(std::log(args.at("x").numeric_as_double()));
}

// Seeded bug 1: shifts instead of clamping, so results at or below 1 leave
// the declared Positive return type.
Value positive_shift_impl(const std::map<std::string, Value>& args) {
  const Value& x = args.at("x");
  if (x.is_int()) return Value::integer(x.as_int() - 1);
  return Value::real(x.as_float() - 1.0);
}

// Seeded bug 2: a smoothing constant leaks into the denominator, so the
// result never sums to 1.
Value normalize_distribution_impl(const std::map<std::string, Value>& args) {
  const auto& weights = args.at("weights").seq_items();
  double total = 0.0;
  for (const Value& w : weights) total += w.numeric_as_double();
  std::vector<Value> out;
  out.reserve(weights.size());
  for (const Value& w : weights) out.push_back(Value::real(w.numeric_as_double() / (total + 0.01)));
  return Value::seq(std::move(out));
}

// Seeded bug 3: an epsilon meant to dodge double counting pushes the first
// share slightly below zero when p sits at the bottom of its range.
Value split_probability_impl(const std::map<std::string, Value>& args) {
  double p = args.at("p").numeric_as_double();
  return Value::seq({Value::real(p - 1e-9), Value::real(1.0 - p + 1e-9)});
}

Value poly_impl(const std::map<std::string, Value>& args) {
  double x = args.at("x").numeric_as_double();
  // Geometric series in u = (x/1024)^2 via Horner. Every partial sum is
  // >= 1 because u is non-negative, and u < 1 over the contract's range, so
  // the loop-carried dependency keeps the body from collapsing into a couple
  // of instructions under -O3.
  double u = (x / 1024.0) * (x / 1024.0);
  double acc = 1.0;
  for (int k = 0; k < 48; ++k) acc = acc * u + 1.0;
  return Value::real(acc);
}

void add_complement(Engine& engine) {
  engine.register_function(
      "complement_sequence", complement_sequence_impl,
      Contract{}
          .arg("seq", types::list_of(types::set_of_chars("AGCT")))
          .returns(types::list_of(types::set_of_chars("AGCT")))
          .ensures("all(seq[i] != return[::-1][i] for i in range(0, len(seq)))"));
}

void add_cube(Engine& engine) {
  engine.register_function(
      "cube", cube_impl,
      Contract{}.arg("t", types::number()).returns(types::number()).ensures(kMonotone));
}

}  // namespace

void register_clean_suite(Engine& engine) {
  add_complement(engine);
  // Open interval keeps atanh finite for every generatable element.
  engine.register_function(
      "fisher_transform", fisher_transform_impl,
      Contract{}
          .arg("corr_values", types::ndarray(std::nullopt, types::range_open(-1, 1)))
          .returns(types::ndarray(std::nullopt, types::number()))
          .ensures("return.shape == corr_values.shape"));
  add_cube(engine);
  engine.register_function(
      "sqrt_checked", sqrt_impl,
      Contract{}
          .arg("x", types::positive0())
          .returns(types::positive0())
          .ensures("x >= 1 --> abs(return * return - x) / x < 0.000001")
          .ensures("x < 1 --> abs(return * return - x) < 0.000001"));
  engine.register_function("safe_log", log_impl,
                           Contract{}
                               .arg("x", types::number())
                               .returns(types::number())
                               .requires_("x > 0")
                               .ensures("x >= 1 --> return >= 0")
                               .ensures("x < 1 --> return < 0"));
}

void register_seeded_bugs(Engine& engine) {
  engine.register_function(
      "positive_shift", positive_shift_impl,
      Contract{}.arg("x", types::number()).returns(types::positive()));
  engine.register_function("normalize_distribution", normalize_distribution_impl,
                           Contract{}
                               .arg("weights", types::list_of(types::positive()))
                               .returns(types::list_of(types::positive()))
                               .requires_("len(weights) > 0")
                               .ensures("abs(sum(return) - 1) < 0.000001"));
  engine.register_function(
      "split_probability", split_probability_impl,
      Contract{}.arg("p", types::range(0, 1)).returns(types::list_of(types::positive())));
}

void register_demo_fixtures(Engine& engine) {
  add_complement(engine);
  // The exact classroom contract: the closed interval admits ±1, and a
  // second application feeds back values outside it.
  engine.register_function(
      "fisher_transform", fisher_transform_impl,
      Contract{}
          .arg("corr_values", types::ndarray(std::nullopt, types::range(-1, 1)))
          .returns(types::ndarray(std::nullopt, types::number()))
          .ensures("return.shape == corr_values.shape"));
  // Same body with entry checking removed: the NaN has to travel all the way
  // to the return type before anything objects.
  engine.register_function(
      "fisher_transform_unguarded", fisher_transform_impl,
      Contract{}
          .arg("corr_values", types::unchecked())
          .returns(types::ndarray(std::nullopt, types::number())));
  add_cube(engine);
  engine.register_function(
      "square_nonmono", square_impl,
      Contract{}.arg("t", types::number()).returns(types::number()).ensures(kMonotone));
}

void register_bench_suite(Engine& engine) {
  engine.register_function("bench_poly", poly_impl,
                           Contract{}
                               .arg("x", types::range(-1000, 1000))
                               .returns(types::positive())
                               .ensures("return >= 1"));
  engine.register_function(
      "bench_fisher", fisher_transform_impl,
      Contract{}
          .arg("corr_values", types::ndarray(1, types::range_open(-1, 1)))
          .returns(types::ndarray(1, types::number()))
          .ensures("return.shape == corr_values.shape"));
}

const std::map<std::string, SuiteManifest>& suites() {
  static const std::map<std::string, SuiteManifest> all = {
      {"clean",
       {"clean", &register_clean_suite, "contracts that hold on every generatable input",
        TestPlan{}}},
      {"seeded-bugs",
       {"seeded-bugs", &register_seeded_bugs, "three planted violations the generator must find",
        TestPlan{}}},
      {"demo",
       {"demo", &register_demo_fixtures, "walkthrough fixtures used by the demo command",
        TestPlan{}}},
      {"bench",
       {"bench", &register_bench_suite, "benchmark targets used by the bench command",
        TestPlan{}}},
  };
  return all;
}

const std::vector<Workload>& workloads() {
  static const std::vector<Workload> all = [] {
    std::vector<Workload> w;

    Workload scalar;
    scalar.name = "scalar";
    scalar.function = "bench_poly";
    scalar.calls = 100000;
    scalar.args_for = [](std::uint64_t seed, std::size_t i) {
      std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ull + i);
      std::uniform_real_distribution<double> dist(-999.0, 999.0);
      return std::map<std::string, Value>{{"x", Value::real(dist(rng))}};
    };
    scalar.bare = poly_impl;
    w.push_back(std::move(scalar));

    Workload nd;
    nd.name = "ndarray";
    nd.function = "bench_fisher";
    nd.calls = 100000;
    nd.args_for = [](std::uint64_t seed, std::size_t i) {
      std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ull + i + 1);
      std::uniform_real_distribution<double> dist(-0.99, 0.99);
      std::vector<double> elems(8);
      for (double& e : elems) e = dist(rng);
      std::vector<std::size_t> shape = {elems.size()};
      return std::map<std::string, Value>{
          {"corr_values", Value::ndarray(std::move(shape), std::move(elems))}};
    };
    nd.bare = fisher_transform_impl;
    w.push_back(std::move(nd));

    return w;
  }();
  return all;
}

}  // namespace refineguard::fixtures
