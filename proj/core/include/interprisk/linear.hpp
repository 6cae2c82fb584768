#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "interprisk/data.hpp"

namespace interprisk {

// One column of the expanded design: a standardized numeric feature or a
// 0/1 indicator for one category of a categorical feature.
struct ExpandedFeature {
  std::string name;    // "x" or "g=label"
  std::string source;  // dataset column name
  ColumnKind kind = ColumnKind::kNumeric;
  std::string category;  // indicators only
  double mean = 0.0;     // numeric only
  double stddev = 1.0;
  bool operator==(const ExpandedFeature&) const = default;
};

struct Standardization {
  std::vector<ExpandedFeature> features;
  Warnings warnings;  // excluded zero-variance features

  std::size_t width() const { return features.size(); }
  bool operator==(const Standardization& o) const { return features == o.features; }
};

// Fits on `rows` of `data` (all rows when empty). Numeric statistics use the
// population standard deviation over non-missing cells.
Standardization standardize_fit(const Dataset& data, std::span<const std::size_t> rows = {});

// Column-major design matrix (width x rows). Missing numeric cells become 0
// (the training mean); missing or unseen categories give all-zero indicators.
std::vector<std::vector<double>> design_matrix(const Standardization& st, const Dataset& data);

struct LinearOptions {
  int max_sweeps = 10'000;
  double tolerance = 1e-7;
};

struct LinearModel {
  Standardization standardization;
  std::vector<double> coefficients;  // per expanded feature
  double intercept = 0.0;
  double l1_strength = 0.0;
  std::size_t nonzero_count = 0;
  bool converged = false;
  int sweeps = 0;

  bool operator==(const LinearModel&) const = default;
};

// Minimizes mean logistic loss + l1_strength * sum |coefficient| with the
// intercept unpenalized. Proximal Newton: each outer step builds the
// weighted least-squares approximation of the loss and solves it by cyclic
// coordinate descent with soft-thresholding. When `warm` is given its
// standardization is reused and its coefficients seed the solver.
LinearModel train_logistic_l1(const Dataset& data, double l1_strength, const LinearOptions& options = {},
                              const LinearModel* warm = nullptr);

// Same, on a prepared design (column-major) and labels.
LinearModel train_logistic_l1(const Standardization& st, const std::vector<std::vector<double>>& x,
                              std::span<const std::uint8_t> y, double l1_strength,
                              const LinearOptions& options = {}, const LinearModel* warm = nullptr);

std::vector<double> predict_logit(const LinearModel& model, const Dataset& data);
std::vector<double> predict_proba(const LinearModel& model, const Dataset& data);

struct PathPoint {
  double l1_strength = 0.0;
  std::size_t nonzero_count = 0;
  double validation_auc = 0.0;
  bool converged = false;
  std::string error;  // non-empty when this point failed
};

// Fits from the strongest penalty down, warm-starting each point from the
// previous solution; points are returned by ascending strength.
std::vector<PathPoint> sparsity_path(const Dataset& train, const Dataset& validate,
                                     std::span<const double> strengths, const LinearOptions& options = {});

}  // namespace interprisk
