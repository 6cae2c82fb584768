#include <gtest/gtest.h>

#include <cmath>

#include "helpers.hpp"
#include "interprisk/synth.hpp"

using namespace interprisk;

TEST(Synth, DeterministicInSeed) {
  const auto cfg = fixtures::small_config(400);
  EXPECT_EQ(synthesize(cfg).data, synthesize(cfg).data);
  auto other = cfg;
  other.seed += 1;
  EXPECT_FALSE(synthesize(other).data == synthesize(cfg).data);
}

TEST(Synth, TrueLogitRecomputesFromCells) {
  const auto cfg = fixtures::small_config(300);
  const auto r = synthesize(cfg);
  for (std::size_t i = 0; i < r.data.rows(); i += 7) {
    EXPECT_NEAR(true_logit(cfg, r.data, i), r.true_logit[i], 1e-12);
    EXPECT_NEAR(r.true_probability[i], 1.0 / (1.0 + std::exp(-r.true_logit[i])), 1e-12);
  }
}

TEST(Synth, PiecewiseLinearIsFlatOutside) {
  const std::vector<Knot> k{{0, 1}, {2, 3}};
  EXPECT_EQ(eval_piecewise_linear(k, -5), 1);
  EXPECT_EQ(eval_piecewise_linear(k, 1), 2);
  EXPECT_EQ(eval_piecewise_linear(k, 9), 3);
}

TEST(Synth, JsonRoundTrip) {
  const auto cfg = default_synth_config();
  EXPECT_EQ(synth_config_from_json(synth_config_to_json(cfg)), cfg);
  EXPECT_THROW(synth_config_from_json("{\"features\": 3}"), ConfigError);
}

TEST(Synth, DefaultConfigShape) {
  auto cfg = default_synth_config();
  cfg.n_per_year = 4000;
  const auto r = synthesize(cfg);
  EXPECT_EQ(r.data.distinct_years().size(), 6u);
  EXPECT_EQ(r.data.schema().indices_with_role(ColumnRole::kFeature).size(), 20u);
  EXPECT_EQ(r.data.schema().indices_with_role(ColumnRole::kGroup).size(), 1u);
  EXPECT_NEAR(r.data.prevalence(), 0.2, 0.03);
}

TEST(Synth, RejectsInconsistentConfig) {
  auto cfg = fixtures::small_config(10);
  cfg.features[2].effects.pop_back();
  EXPECT_THROW(validate(cfg), ConfigError);
  cfg = fixtures::small_config(10);
  cfg.interactions[0].factors[0].feature = "nope";
  EXPECT_THROW(validate(cfg), ConfigError);
}
