#pragma once

// Randomized verification suites. Every property has a stable id
// ("prop.sandwich.gahler", ...) used for tolerance overrides, filtering and
// counterexample reproduction. Trials draw their seeds from (suite seed,
// property id, cell, trial index) only, so a report is a pure function of
// the configuration whether or not properties run concurrently.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "ndual/functionals.hpp"
#include "ndual/spaces.hpp"

namespace ndual {

/// Deliberate faults used to exercise the failure path end to end.
enum class Mutation {
  none,
  sip_drop_norm_factor,  // g without the ||x||^(2-p) factor: breaks (G1)
  nnorm_sum_of_norms,    // "n-norm" = sum ||x_i||: breaks degeneracy
};

std::optional<Mutation> parse_mutation(const std::string& name);
std::string to_string(Mutation m);

struct SuiteConfig {
  std::uint64_t seed = 0;
  int trials_per_property = 200;
  std::vector<std::size_t> dims{2, 3, 4, 5};
  std::vector<std::size_t> orders{1, 2, 3};
  std::vector<double> exponents{1.0, 1.5, 2.0, 3.0};
  /// Overrides keyed by property id; missing ids use default_tolerances().
  std::map<std::string, double> tolerances;
  bool parallel = false;
  Mutation mutation = Mutation::none;
  /// Property id prefixes to run; empty runs everything.
  std::vector<std::string> only;

  /// Throws ConfigError: empty lists, d outside [1, 8], an order that no
  /// listed dimension can host, p outside [1, 16], unknown tolerance ids.
  void validate() const;
  double tolerance(const std::string& id) const;
};

const std::map<std::string, double>& default_tolerances();
/// Property ids in report order.
const std::vector<std::string>& property_ids();

struct PropertyRecord {
  std::string property_id;
  std::string result;     // the named result the property checks
  std::string statement;  // its mathematical statement
  double tolerance = 0.0;
  bool soft = false;      // reported, never fails the run
  int trials = 0;
  int passes = 0;
  double worst_violation = 0.0;
  std::optional<nlohmann::json> counterexample;

  bool ok() const noexcept { return passes == trials; }
};

struct VerificationReport {
  SuiteConfig config;
  std::vector<PropertyRecord> properties;
  double wall_time_ms = 0.0;

  /// True when every non-soft property passed all of its trials.
  bool all_pass() const;
  /// {config, properties: [...], wall_time_ms}.
  nlohmann::json to_json() const;
};

VerificationReport run_suite(const SuiteConfig& cfg);

// Instance generators ------------------------------------------------------

enum class InstanceKind { tuple, antisymmetric_tensor, operator_ };

std::vector<Vector> generate_tuple(const SpaceSpec& spec, std::size_t n, std::uint64_t seed);
/// Alt of a random normal tensor, redrawn while ||.||_F < 1e-6.
/// Throws ConfigError when n > d (every antisymmetric tensor is then 0).
MultiFunctional generate_antisymmetric_tensor(const SpaceSpec& spec, std::size_t n, std::uint64_t seed);
/// curry of an antisymmetric tensor.
CurriedOperator generate_operator(const SpaceSpec& spec, std::size_t n, std::uint64_t seed);

using Instance = std::variant<std::vector<Vector>, MultiFunctional, CurriedOperator>;
Instance generate_instance(InstanceKind kind, const SpaceSpec& spec, std::size_t n, std::uint64_t seed);

/// Writes `text` to `path` through a temporary file and rename.
void write_atomically(const std::string& path, const std::string& text);

}  // namespace ndual
