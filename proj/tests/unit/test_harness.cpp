#include <gtest/gtest.h>

#include <cmath>

#include "helpers.hpp"
#include "interprisk/harness.hpp"

using namespace interprisk;

namespace {

std::vector<ModelSpec> cheap_specs() {
  std::vector<ModelSpec> specs(2);
  specs[0].name = "lr";
  specs[0].family = ModelFamily::kLinear;
  specs[0].l1_strength = 1e-3;
  specs[1].name = "gb";
  specs[1].family = ModelFamily::kGbdt;
  specs[1].gbdt.n_estimators = 20;
  specs[1].gbdt.max_depth = 3;
  return specs;
}

}  // namespace

TEST(Harness, CellsInCanonicalOrder) {
  const auto d = synthesize(fixtures::small_config(800, 4)).data;
  const auto results = run_cv(d, split_moving_window(d), cheap_specs());
  ASSERT_EQ(results.size(), 4u);
  EXPECT_EQ(results[0].model, "lr");
  EXPECT_EQ(results[1].model, "gb");
  EXPECT_EQ(results[2].fold, 2);
  EXPECT_EQ(results[2].validate_years, std::vector<int>{2016});
  for (const auto& r : results) {
    EXPECT_TRUE(r.error.empty()) << r.error;
    EXPECT_GT(r.auc, 0.6);
    EXPECT_FALSE(r.test);
  }
}

TEST(Harness, TestFoldOnlyWhenAsked) {
  const auto d = synthesize(fixtures::small_config(800, 3)).data;
  CvOptions o;
  o.include_test = true;
  const auto results = run_cv(d, split_moving_window(d), cheap_specs(), o);
  ASSERT_EQ(results.size(), 4u);
  EXPECT_TRUE(results[3].test);
  EXPECT_EQ(results[3].validate_years, std::vector<int>{2016});
}

TEST(Harness, RowOrderDoesNotMatter) {
  const auto d = synthesize(fixtures::small_config(600, 3)).data;
  std::vector<std::size_t> rev(d.rows());
  for (std::size_t i = 0; i < rev.size(); ++i) rev[i] = rev.size() - 1 - i;
  const auto a = results_csv(run_cv(d, split_moving_window(d), cheap_specs()));
  const auto b = results_csv(run_cv(d.subset(rev), split_moving_window(d), cheap_specs()));
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.substr(0, a.find('\n')), "fold,test,train_years,validate_years,model,params_hash,auc,seed,error");
}

TEST(Harness, FailedCellIsRecorded) {
  auto specs = cheap_specs();
  specs.push_back(ModelSpec::from_json({{"model", "file"}, {"name", "ghost"}, {"params", {{"path", "/nonexistent"}}}}));
  const auto d = synthesize(fixtures::small_config(500, 3)).data;
  const auto results = run_cv(d, split_moving_window(d), specs);
  ASSERT_EQ(results.size(), 3u);
  EXPECT_TRUE(std::isnan(results[2].auc));
  EXPECT_FALSE(results[2].error.empty());
}

TEST(Harness, SpecsAndSweep) {
  const auto roster = default_model_specs();
  ASSERT_EQ(roster.size(), 5u);
  for (const auto& s : roster) {
    EXPECT_EQ(ModelSpec::from_json(s.to_json()).params_hash(), s.params_hash()) << s.name;
  }
  EXPECT_NE(roster[1].params_hash(), roster[2].params_hash());
  EXPECT_THROW(ModelSpec::from_json({{"model", "svm"}}), ConfigError);
  EXPECT_THROW(ModelSpec::from_json({{"model", "lr"}, {"params", {{"C", 1}}}}), ConfigError);

  const auto d = synthesize(fixtures::small_config(600, 3)).data;
  auto grid = cheap_specs();
  grid[0].l1_strength = 10.0;  // intercept only
  const auto ranked = grid_sweep(d, split_moving_window(d), grid);
  ASSERT_EQ(ranked.size(), 2u);
  EXPECT_EQ(ranked[0].spec.name, "gb");
  EXPECT_THROW(grid_sweep(d, split_moving_window(d), {}), ConfigError);
}
