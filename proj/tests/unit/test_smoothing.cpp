#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>

#include "helpers.hpp"
#include "interprisk/smoothing.hpp"

using namespace interprisk;

namespace {

// Integral of f''^2 for the natural interpolating spline, from its knot
// second derivatives (dense solve).
double oracle_roughness(const std::vector<double>& x, const Eigen::VectorXd& f) {
  const auto n = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  A(0, 0) = A(n - 1, n - 1) = 1;
  for (Eigen::Index i = 1; i + 1 < n; ++i) {
    const double h0 = x[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(i - 1)];
    const double h1 = x[static_cast<std::size_t>(i + 1)] - x[static_cast<std::size_t>(i)];
    A(i, i - 1) = h0;
    A(i, i) = 2 * (h0 + h1);
    A(i, i + 1) = h1;
    rhs(i) = 6 * ((f(i + 1) - f(i)) / h1 - (f(i) - f(i - 1)) / h0);
  }
  const Eigen::VectorXd m = A.fullPivLu().solve(rhs);
  double total = 0;
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    const double h = x[static_cast<std::size_t>(i + 1)] - x[static_cast<std::size_t>(i)];
    total += h / 3 * (m(i) * m(i) + m(i) * m(i + 1) + m(i + 1) * m(i + 1));
  }
  return total;
}

// Penalized weighted least squares with the roughness quadratic form
// recovered column by column.
std::vector<double> oracle_spline(const std::vector<double>& x, const std::vector<double>& y,
                                  const std::vector<double>& w, double lambda) {
  const auto n = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd K(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) {
      Eigen::VectorXd ea = Eigen::VectorXd::Unit(n, a), eb = Eigen::VectorXd::Unit(n, b);
      K(a, b) = 0.25 * (oracle_roughness(x, ea + eb) - oracle_roughness(x, ea - eb));
    }
  }
  Eigen::MatrixXd W = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd yy(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    W(i, i) = w[static_cast<std::size_t>(i)];
    yy(i) = y[static_cast<std::size_t>(i)];
  }
  const Eigen::VectorXd f = (W + lambda * K).ldlt().solve(W * yy);
  return {f.data(), f.data() + n};
}

struct Points {
  std::vector<double> x, y, w;
};

Points random_points(std::uint64_t seed, std::size_t n) {
  Rng rng(seed);
  Points p;
  double at = 0;
  for (std::size_t i = 0; i < n; ++i) {
    at += 0.05 + rng.uniform();
    p.x.push_back(at);
    p.y.push_back(std::sin(at) + 0.3 * rng.normal());
    p.w.push_back(0.2 + 2 * rng.uniform());
  }
  return p;
}

}  // namespace

TEST(Spline, MatchesDenseOracle) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto p = random_points(s, 4 + s * 3);
    for (double lambda : {1e-3, 0.1, 10.0}) {
      const auto got = smoothing_spline(p.x, p.y, p.w, lambda);
      const auto want = oracle_spline(p.x, p.y, p.w, lambda);
      for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], want[i], 1e-8);
    }
  }
}

TEST(Spline, RoughnessMatchesOracle) {
  const auto p = random_points(42, 12);
  Eigen::VectorXd f = Eigen::Map<const Eigen::VectorXd>(p.y.data(), 12);
  EXPECT_NEAR(spline_roughness(p.x, p.y), oracle_roughness(p.x, f), 1e-9);
  std::vector<double> line;
  for (double v : p.x) line.push_back(3 * v - 1);
  EXPECT_NEAR(spline_roughness(p.x, line), 0.0, 1e-12);
}

TEST(Spline, LimitsInterpolateAndFitLine) {
  const auto p = random_points(7, 15);
  const auto interp = smoothing_spline(p.x, p.y, p.w, 0.0);
  for (std::size_t i = 0; i < interp.size(); ++i) EXPECT_NEAR(interp[i], p.y[i], 1e-12);
  // A huge penalty leaves the weighted least-squares line.
  const auto flat = smoothing_spline(p.x, p.y, p.w, 1e12);
  double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < p.x.size(); ++i) {
    sw += p.w[i], sx += p.w[i] * p.x[i], sy += p.w[i] * p.y[i];
    sxx += p.w[i] * p.x[i] * p.x[i], sxy += p.w[i] * p.x[i] * p.y[i];
  }
  const double slope = (sw * sxy - sx * sy) / (sw * sxx - sx * sx), icept = (sy - slope * sx) / sw;
  for (std::size_t i = 0; i < flat.size(); ++i) EXPECT_NEAR(flat[i], icept + slope * p.x[i], 1e-5);
}

TEST(Spline, RejectsBadInput) {
  const std::vector<double> x{0, 1, 1}, y{0, 0, 0}, w{1, 1, 1};
  EXPECT_ANY_THROW(smoothing_spline(x, y, w, 1.0));
  const std::vector<double> x2{0, 1, 2};
  EXPECT_ANY_THROW(smoothing_spline(x2, y, w, -1.0));
}

namespace {

EbmModel small_model() {
  EbmHyperparams hp;
  hp.outer_bags = 1;
  hp.learning_rate = 0.05;
  hp.max_rounds = 300;
  hp.interactions = 1;
  return train_ebm(bin_features(synthesize(fixtures::small_config(3000, 1)).data, 32), hp);
}

}  // namespace

TEST(SmoothShape, ZeroLambdaIsIdentityAndRoughnessFalls) {
  const auto model = small_model();
  const auto& bins = model.layout[0];
  const auto raw = smooth_shape(model.mains[0], bins, 0.0);
  for (std::size_t b = 0; b < raw.scores.size(); ++b) EXPECT_NEAR(raw.scores[b], model.mains[0].scores[b], 1e-8);
  double prev = raw.roughness_after;
  for (double lambda : {1e-6, 1e-5, 1e-4, 1e-3, 1e-2}) {
    const auto s = smooth_shape(model.mains[0], bins, lambda);
    EXPECT_LE(s.roughness_after, prev);
    prev = s.roughness_after;
    // Missing-bin score is kept, up to the re-centering shift.
    EXPECT_NEAR(s.scores.back() + s.shift, model.mains[0].scores.back(), 1e-12);
  }
  EXPECT_LT(prev, raw.roughness_after);
}

TEST(SmoothShape, ModelShiftKeepsPredictionsAtZeroLambda) {
  const auto model = small_model();
  SmoothPlan plan;
  plan.lambdas = {{"a", 0.0}, {"colour", 1.0}};
  const auto res = smooth_model(model, plan);
  EXPECT_EQ(res.errors.size(), 1u);
  EXPECT_EQ(res.errors.count("colour"), 1u);
  EXPECT_NEAR(res.model.intercept, model.intercept, 1e-9);
  const auto again = smooth_plan_from_json(smooth_plan_to_json(plan));
  EXPECT_EQ(again.lambdas, plan.lambdas);
  EXPECT_THROW(smooth_plan_from_json("{\"lambdas\":{\"a\":-1}}"), ConfigError);
}

TEST(SmoothShape, CalibrationRespectsDrop) {
  const auto model = small_model();
  const auto validate = apply_bins(synthesize(fixtures::small_config(2000, 1, 99)).data, model.layout);
  const std::vector<double> grid{0, 1e-4, 1e-2, 1, 100};
  const auto sweep = lambda_sweep(model, {"a", "b"}, grid, validate);
  const double chosen = calibrate_lambda(model, {"a", "b"}, grid, validate, 0.005);
  for (const auto& pt : sweep) {
    if (pt.lambda == chosen) EXPECT_GE(pt.auc, sweep.front().auc - 0.005);
  }
}
