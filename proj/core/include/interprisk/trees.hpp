#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "interprisk/binning.hpp"

namespace interprisk {

struct GbdtParams {
  int n_estimators = 500;
  double learning_rate = 0.1;
  int max_depth = 6;
  double reg_lambda = 0.0;  // 0: plain gradient boosting, 5: the regularized variant
  double min_child_weight = 1.0;  // minimum hessian sum per child
  std::uint64_t seed = 0;

  void validate() const;
  bool operator==(const GbdtParams&) const = default;
};

struct ForestParams {
  int n_estimators = 500;
  int max_depth = 10;
  int max_features = 50;  // per split, clamped to the feature count
  bool bootstrap = true;
  double min_samples_leaf = 1.0;
  std::uint64_t seed = 0;

  void validate() const;
  bool operator==(const ForestParams&) const = default;
};

// Internal nodes send a row left when its bin is <= threshold_bin (numeric)
// or its category is in left_categories. The missing bin, and categories
// never seen while training, follow default_left.
struct TreeNode {
  int feature = -1;  // -1 for leaves
  int threshold_bin = 0;
  int missing_bin = -1;
  std::vector<std::uint8_t> left_categories;  // per bin, categorical splits only
  bool default_left = true;
  double value = 0.0;  // leaf output
  int left = -1;
  int right = -1;

  bool is_leaf() const { return feature < 0; }
  bool operator==(const TreeNode&) const = default;
};

// Nodes in pre-order; node 0 is the root.
struct Tree {
  std::vector<TreeNode> nodes;

  double eval(std::span<const int> bins) const;
  bool operator==(const Tree&) const = default;
};

enum class EnsembleKind { kBoosted, kForest };

struct TreeEnsemble {
  EnsembleKind kind = EnsembleKind::kBoosted;
  BinLayout layout;
  std::vector<Tree> trees;
  double learning_rate = 1.0;  // boosted only
  double base_score = 0.0;     // logit (boosted) or prior probability (forest)
  GbdtParams gbdt;
  ForestParams forest;

  bool operator==(const TreeEnsemble&) const = default;
};

// Second-order boosting on the logistic loss; leaf weight -G/(H+lambda).
TreeEnsemble train_gbdt(const BinnedDataset& data, const GbdtParams& params);

// Bagged Gini trees with per-split feature sampling; leaves hold the
// positive-class frequency.
TreeEnsemble train_random_forest(const BinnedDataset& data, const ForestParams& params);

// Boosted: sigmoid(base + lr * sum). Forest: mean leaf frequency, summed in
// sorted order so the result does not depend on tree order.
double predict_ensemble(const TreeEnsemble& model, std::span<const int> bins);
double predict_ensemble(const TreeEnsemble& model, const Record& row);
std::vector<double> predict_ensemble(const TreeEnsemble& model, const BinnedDataset& data);
std::vector<double> predict_ensemble(const TreeEnsemble& model, const Dataset& data);

}  // namespace interprisk
