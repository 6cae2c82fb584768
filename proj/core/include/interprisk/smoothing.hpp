#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "interprisk/ebm.hpp"

namespace interprisk {

// Natural cubic smoothing spline through weighted points: minimizes
// sum w_i (y_i - f(x_i))^2 + lambda * integral f''^2 and returns f(x_i).
// x must be strictly increasing with at least 3 points; weights > 0.
std::vector<double> smoothing_spline(std::span<const double> x, std::span<const double> y,
                                     std::span<const double> w, double lambda);

// Integral of f''^2 for the natural cubic spline interpolating (x_i, f_i).
double spline_roughness(std::span<const double> x, std::span<const double> f);

struct SmoothedShape {
  std::string feature;
  double lambda = 0.0;
  std::vector<double> raw_scores;  // all bins, missing last
  std::vector<double> scores;      // smoothed and re-centered
  double roughness_before = 0.0;
  double roughness_after = 0.0;
  double shift = 0.0;  // removed by re-centering; belongs in the intercept
};

// Abscissae are the bin midpoints rescaled to [0, 1]; weights are the
// training bin counts rescaled to mean 1, so lambda does not depend on the
// feature's units or the sample size. The missing-bin score is kept.
SmoothedShape smooth_shape(const ShapeFunction& shape, const FeatureBins& bins, double lambda);

// Roughness of a shape's regular-bin scores on the same rescaled abscissae.
double shape_roughness(const FeatureBins& bins, std::span<const double> scores);

struct SmoothPlan {
  std::map<std::string, double> lambdas;
};

std::string smooth_plan_to_json(const SmoothPlan& plan);
SmoothPlan smooth_plan_from_json(std::string_view text);

struct SmoothResult {
  EbmModel model;
  std::vector<SmoothedShape> shapes;
  std::map<std::string, std::string> errors;  // feature -> message
};

// Replaces each planned shape by its smoothed version; shifts go to the
// intercept. Features that fail are reported and left untouched.
SmoothResult smooth_model(const EbmModel& model, const SmoothPlan& plan);

struct LambdaSweepPoint {
  double lambda = 0.0;
  double auc = 0.0;
  std::vector<double> roughness;  // per feature, in the order given
};

// Applies one lambda to all `features` for each grid value and scores `data`.
std::vector<LambdaSweepPoint> lambda_sweep(const EbmModel& model, const std::vector<std::string>& features,
                                           std::span<const double> lambdas, const BinnedDataset& data);

// Largest grid lambda whose AUC on `data` is within max_drop of the
// unsmoothed model's; 0 when none qualifies.
double calibrate_lambda(const EbmModel& model, const std::vector<std::string>& features,
                        std::span<const double> lambdas, const BinnedDataset& data, double max_drop);

}  // namespace interprisk
