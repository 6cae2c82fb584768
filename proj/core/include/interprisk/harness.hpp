#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "interprisk/cv_plan.hpp"
#include "interprisk/model_io.hpp"

namespace interprisk {

enum class ModelFamily { kEbm, kLinear, kGbdt, kForest, kFile };

std::string_view to_string(ModelFamily family);
ModelFamily parse_model_family(std::string_view text);

struct ModelSpec {
  std::string name;
  ModelFamily family = ModelFamily::kEbm;
  EbmHyperparams ebm;
  double l1_strength = 0.1;
  GbdtParams gbdt;
  ForestParams forest;
  int max_bins = kDefaultMaxBins;
  std::string model_file;  // kFile: score a saved model, no training

  // {"name", "model", "params"}; only the active family's parameters.
  nlohmann::json to_json() const;
  static ModelSpec from_json(const nlohmann::json& j);
  // Hash of family and parameters, excluding name and seed.
  std::string params_hash() const;
};

// The five-model roster: random forest, plain and regularized boosting,
// L1 logistic regression and EBM, with the published hyperparameters.
std::vector<ModelSpec> default_model_specs();

// Trains `spec` on `train`; binning and standardization use `train` only.
// kFile specs load their model instead.
AnyModel fit_model(const ModelSpec& spec, const Dataset& train, std::uint64_t seed);

// Bin layout a fold's models are trained with: train rows only.
BinLayout fold_layout(const Dataset& data, const Fold& fold, int max_bins);

struct FoldResult {
  int fold = 0;  // 1-based; the test fold follows the regular folds
  bool test = false;
  std::vector<int> train_years;
  std::vector<int> validate_years;
  std::string model;
  std::string params_hash;
  double auc = 0.0;  // NaN when the cell failed
  double seconds = 0.0;
  std::uint64_t seed = 0;
  std::string error;
};

struct CvOptions {
  bool include_test = false;
  std::uint64_t seed = 0;
};

// Every (fold, spec) cell in that order. Rows are put in canonical order
// first so the input row order cannot change any result. Failures are
// recorded in the cell and the run continues.
std::vector<FoldResult> run_cv(const Dataset& data, const CvPlan& plan, const std::vector<ModelSpec>& specs,
                               const CvOptions& options = {});

// fold,test,train_years,validate_years,model,params_hash,auc,seed,error
std::string results_csv(const std::vector<FoldResult>& results);
// fold,model,seconds; wall-clock time is kept apart so the results file is
// reproducible byte for byte.
std::string timings_csv(const std::vector<FoldResult>& results);

struct SweepEntry {
  ModelSpec spec;
  double mean_auc = 0.0;  // over successful regular folds; NaN if none
  std::vector<FoldResult> folds;
};

// Mean validation AUC per grid point, best first (ties keep grid order).
std::vector<SweepEntry> grid_sweep(const Dataset& data, const CvPlan& plan, const std::vector<ModelSpec>& grid,
                                   const CvOptions& options = {});

}  // namespace interprisk
