#pragma once

#include <optional>
#include <string>
#include <vector>

#include "interprisk/data.hpp"

namespace interprisk {

struct Fold {
  std::vector<int> train_years;
  std::vector<int> validate_years;  // the test years for CvPlan::test_fold
  bool operator==(const Fold&) const = default;
};

// Moving-window plan: fold k trains on one year and validates on the next.
struct CvPlan {
  std::vector<Fold> folds;
  std::optional<Fold> test_fold;
  Warnings warnings;
};

// Plan over the distinct years of `data`. With three or more years the last
// adjacent pair becomes the quarantined test fold; with exactly two years the
// single pair is the only fold and no test fold exists.
CvPlan split_moving_window(const Dataset& data);
CvPlan split_moving_window(std::vector<int> years);

struct FoldRows {
  std::vector<std::size_t> train;
  std::vector<std::size_t> validate;
};

FoldRows fold_rows(const Dataset& data, const Fold& fold);

// Throws ConfigError unless every fold trains strictly before it validates
// and no test year is used for validation by a regular fold.
void check_plan(const CvPlan& plan);

}  // namespace interprisk
