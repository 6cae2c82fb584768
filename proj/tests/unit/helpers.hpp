#pragma once

#include <cstdint>
#include <vector>

#include "interprisk/synth.hpp"

namespace interprisk::fixtures {

// Small generator config for fast tests: a few numeric and categorical
// features with known shapes over `years` consecutive years.
inline SynthConfig small_config(std::size_t n_per_year, int years = 3, std::uint64_t seed = 11) {
  SynthConfig c;
  c.first_year = 2014;
  c.last_year = 2014 + years - 1;
  c.n_per_year = n_per_year;
  c.seed = seed;
  c.intercept = -1.0;
  SynthFeature a;
  a.name = "a";
  a.distribution = {NumericDistribution::Type::kUniform, 0.0, 10.0};
  a.shape = {{0, -1.0}, {5, 0.5}, {10, -0.5}};
  a.missing_rate = 0.05;
  a.missing_effect = 0.4;
  SynthFeature b;
  b.name = "b";
  b.distribution = {NumericDistribution::Type::kNormal, 0.0, 1.0};
  b.shape = {{-2, -0.8}, {2, 0.8}};
  SynthFeature c3;
  c3.name = "colour";
  c3.kind = ColumnKind::kCategorical;
  c3.categories = {"red", "green", "blue"};
  c3.probabilities = {0.5, 0.3, 0.2};
  c3.effects = {0.0, 0.6, -0.6};
  SynthFeature n;
  n.name = "noise";
  n.distribution = {NumericDistribution::Type::kUniform, 0.0, 1.0};
  c.features = {a, b, c3, n};
  c.interactions = {{0.5, {{"a", {{0, -1}, {10, 1}}, {}}, {"b", {{-2, -1}, {2, 1}}, {}}}}};
  return c;
}

}  // namespace interprisk::fixtures
