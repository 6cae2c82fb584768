#include "interprisk/cv_plan.hpp"

#include <algorithm>

namespace interprisk {

CvPlan split_moving_window(std::vector<int> years) {
  std::sort(years.begin(), years.end());
  years.erase(std::unique(years.begin(), years.end()), years.end());
  if (years.size() < 2) throw DataError("moving window needs >=2 years");
  CvPlan plan;
  for (std::size_t i = 0; i + 1 < years.size(); ++i) {
    if (years[i + 1] != years[i] + 1) {
      plan.warnings.push_back("gap between years " + std::to_string(years[i]) + " and " +
                              std::to_string(years[i + 1]));
    }
  }
  if (years.size() == 2) {
    plan.folds.push_back({{years[0]}, {years[1]}});
    plan.warnings.push_back("only two years: one train/validate fold and no separate test fold");
    return plan;
  }
  for (std::size_t i = 0; i + 2 < years.size(); ++i) {
    plan.folds.push_back({{years[i]}, {years[i + 1]}});
  }
  plan.test_fold = Fold{{years[years.size() - 2]}, {years.back()}};
  return plan;
}

CvPlan split_moving_window(const Dataset& data) { return split_moving_window(data.distinct_years()); }

FoldRows fold_rows(const Dataset& data, const Fold& fold) {
  FoldRows rows;
  const auto years = data.years();
  auto contains = [](const std::vector<int>& v, int y) { return std::find(v.begin(), v.end(), y) != v.end(); };
  for (std::size_t r = 0; r < years.size(); ++r) {
    if (contains(fold.train_years, years[r])) {
      rows.train.push_back(r);
    } else if (contains(fold.validate_years, years[r])) {
      rows.validate.push_back(r);
    }
  }
  return rows;
}

void check_plan(const CvPlan& plan) {
  auto check_fold = [](const Fold& f) {
    if (f.train_years.empty() || f.validate_years.empty()) throw ConfigError("fold with no years");
    const int last_train = *std::max_element(f.train_years.begin(), f.train_years.end());
    const int first_validate = *std::min_element(f.validate_years.begin(), f.validate_years.end());
    if (last_train >= first_validate) throw ConfigError("fold trains on or after its validation years");
  };
  for (const auto& f : plan.folds) {
    check_fold(f);
    if (plan.test_fold) {
      for (int y : plan.test_fold->validate_years) {
        if (std::find(f.validate_years.begin(), f.validate_years.end(), y) != f.validate_years.end()) {
          throw ConfigError("test year " + std::to_string(y) + " used for validation");
        }
      }
    }
  }
  if (plan.test_fold) check_fold(*plan.test_fold);
}

}  // namespace interprisk
