#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "interprisk/common.hpp"
#include "interprisk/cv_plan.hpp"

using namespace interprisk;

TEST(CvPlan, SixYears) {
  const auto plan = split_moving_window({2019, 2014, 2015, 2016, 2017, 2018, 2016});
  ASSERT_EQ(plan.folds.size(), 4u);
  EXPECT_EQ(plan.folds[0], (Fold{{2014}, {2015}}));
  EXPECT_EQ(plan.folds[3], (Fold{{2017}, {2018}}));
  ASSERT_TRUE(plan.test_fold);
  EXPECT_EQ(*plan.test_fold, (Fold{{2018}, {2019}}));
  EXPECT_NO_THROW(check_plan(plan));
}

TEST(CvPlan, TwoYearsHasNoTestFold) {
  const auto plan = split_moving_window({2020, 2021});
  EXPECT_EQ(plan.folds.size(), 1u);
  EXPECT_FALSE(plan.test_fold);
  EXPECT_FALSE(plan.warnings.empty());
  EXPECT_THROW(split_moving_window({2020}), DataError);
}

TEST(CvPlan, RandomYearSetsNeverLeak) {
  Rng rng(17);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<int> years;
    const auto n = 2 + rng.below(10);
    for (std::uint64_t i = 0; i < n; ++i) years.push_back(1990 + static_cast<int>(rng.below(40)));
    std::set<int> distinct(years.begin(), years.end());
    if (distinct.size() < 2) continue;
    const auto plan = split_moving_window(years);
    EXPECT_NO_THROW(check_plan(plan));
    for (const auto& f : plan.folds) {
      EXPECT_LT(*std::max_element(f.train_years.begin(), f.train_years.end()),
                *std::min_element(f.validate_years.begin(), f.validate_years.end()));
      if (plan.test_fold) EXPECT_NE(f.validate_years, plan.test_fold->validate_years);
    }
    if (plan.test_fold) EXPECT_EQ(plan.test_fold->validate_years.back(), *distinct.rbegin());
  }
}

TEST(CvPlan, CheckRejectsLeakyFolds) {
  CvPlan bad;
  bad.folds.push_back({{2016}, {2015}});
  EXPECT_THROW(check_plan(bad), ConfigError);
  CvPlan test_reuse;
  test_reuse.folds.push_back({{2014}, {2015}});
  test_reuse.test_fold = Fold{{2014}, {2015}};
  EXPECT_THROW(check_plan(test_reuse), ConfigError);
}
