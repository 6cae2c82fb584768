#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "interprisk/data.hpp"

namespace interprisk {

// Point of a piecewise-linear function; the function is flat beyond the
// first and last knots.
struct Knot {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Knot&) const = default;
};

double eval_piecewise_linear(const std::vector<Knot>& knots, double x);

struct NumericDistribution {
  enum class Type { kUniform, kNormal, kLogNormal, kInteger };
  Type type = Type::kUniform;
  double a = 0.0;  // uniform/integer: low; normal: mean; lognormal: mu of log
  double b = 1.0;  // uniform/integer: high (inclusive for integer); normal: sd; lognormal: sigma
  double clip_low = -std::numeric_limits<double>::infinity();
  double clip_high = std::numeric_limits<double>::infinity();
  bool operator==(const NumericDistribution&) const = default;
};

struct SynthFeature {
  std::string name;
  ColumnKind kind = ColumnKind::kNumeric;
  NumericDistribution distribution;  // numeric
  std::vector<Knot> shape;           // numeric: true logit contribution
  std::vector<std::string> categories;
  std::vector<double> probabilities;  // categorical sampling weights
  std::vector<double> effects;        // categorical: true logit contribution
  double missing_rate = 0.0;
  double missing_effect = 0.0;
  bool operator==(const SynthFeature&) const = default;
};

// One factor of a product interaction term; numeric features use knots,
// categorical features a value per category. Missing cells contribute 0.
struct SynthFactor {
  std::string feature;
  std::vector<Knot> knots;
  std::vector<double> values;
  bool operator==(const SynthFactor&) const = default;
};

// coefficient * product of factors. Two factors make a pairwise term; more
// are allowed to build data that additive-plus-pairs models cannot fit.
struct SynthInteraction {
  double coefficient = 0.0;
  std::vector<SynthFactor> factors;
  bool operator==(const SynthInteraction&) const = default;
};

// Protected-group column, either banded from a numeric source feature
// (band k is [edges[k], edges[k+1]), the last band closed) or sampled.
struct SynthGroup {
  std::string name;
  std::string source;
  std::vector<double> edges;
  std::vector<std::string> labels;
  std::vector<double> probabilities;  // used when source is empty
  std::vector<double> offsets;        // logit offset per group
  bool operator==(const SynthGroup&) const = default;
};

struct SynthConfig {
  int first_year = 2014;
  int last_year = 2019;
  std::size_t n_per_year = 50'000;
  std::uint64_t seed = 7;
  double intercept = 0.0;
  std::string outcome_name = "ltu";
  std::string time_name = "year";
  std::vector<SynthFeature> features;
  std::vector<SynthInteraction> interactions;
  std::optional<SynthGroup> group;
  std::map<int, double> drift;  // year -> additive logit offset

  bool operator==(const SynthConfig&) const = default;
};

// Profiling-like schema: 20 features (10 numeric, 10 categorical) with an
// "age" feature banded into three groups, three pairwise interactions, and a
// prevalence close to 0.2.
SynthConfig default_synth_config();

// `informative` numeric features with clear shapes plus `noise` numeric
// features with zero effect. Names: "signal_<i>", "noise_<i>".
SynthConfig signal_noise_config(int informative, int noise, std::size_t n_per_year, std::uint64_t seed);

std::string synth_config_to_json(const SynthConfig& config);
SynthConfig synth_config_from_json(std::string_view text);

struct SynthResult {
  Dataset data;
  std::vector<double> true_logit;
  std::vector<double> true_probability;
  Warnings warnings;
};

Schema synth_schema(const SynthConfig& config);

// Throws ConfigError for an inconsistent configuration.
void validate(const SynthConfig& config);

// Deterministic in config (including seed).
SynthResult synthesize(const SynthConfig& config);

// True logit of one row of a dataset produced from `config`, recomputed
// from the observed cells (and year) of that row.
double true_logit(const SynthConfig& config, const Dataset& data, std::size_t row);

}  // namespace interprisk
