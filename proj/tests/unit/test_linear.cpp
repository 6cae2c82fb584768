#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>

#include "helpers.hpp"
#include "interprisk/linear.hpp"
#include "interprisk/metrics.hpp"

using namespace interprisk;

namespace {

struct Problem {
  Standardization st;
  std::vector<std::vector<double>> x;
  std::vector<std::uint8_t> y;
};

Problem random_problem(std::uint64_t seed, std::size_t n, std::size_t p) {
  Rng rng(seed);
  Problem pr;
  pr.x.assign(p, std::vector<double>(n));
  std::vector<double> beta(p);
  for (auto& b : beta) b = rng.uniform() < 0.5 ? 0.0 : rng.normal();
  for (std::size_t i = 0; i < n; ++i) {
    double eta = -0.3;
    for (std::size_t j = 0; j < p; ++j) {
      pr.x[j][i] = rng.normal();
      eta += beta[j] * pr.x[j][i];
    }
    pr.y.push_back(rng.uniform() < sigmoid(eta));
  }
  for (std::size_t j = 0; j < p; ++j) pr.st.features.push_back({"x" + std::to_string(j), "x" + std::to_string(j)});
  return pr;
}

// Largest violation of the lasso optimality conditions for the mean loss.
double kkt_violation(const Problem& pr, const LinearModel& m, double lambda) {
  const std::size_t n = pr.y.size(), p = pr.x.size();
  std::vector<double> r(n);
  for (std::size_t i = 0; i < n; ++i) {
    double eta = m.intercept;
    for (std::size_t j = 0; j < p; ++j) eta += m.coefficients[j] * pr.x[j][i];
    r[i] = sigmoid(eta) - pr.y[i];
  }
  double worst = 0, g0 = 0;
  for (double v : r) g0 += v / static_cast<double>(n);
  worst = std::abs(g0);
  for (std::size_t j = 0; j < p; ++j) {
    double g = 0;
    for (std::size_t i = 0; i < n; ++i) g += pr.x[j][i] * r[i] / static_cast<double>(n);
    const double b = m.coefficients[j];
    worst = std::max(worst, b == 0 ? std::max(0.0, std::abs(g) - lambda) : std::abs(g + lambda * (b > 0 ? 1 : -1)));
  }
  return worst;
}

}  // namespace

TEST(Linear, SatisfiesKkt) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto pr = random_problem(s, 200 + 13 * s, 2 + s % 8);
    for (double lambda : {0.001, 0.01, 0.05}) {
      const auto m = train_logistic_l1(pr.st, pr.x, pr.y, lambda);
      EXPECT_TRUE(m.converged);
      EXPECT_LT(kkt_violation(pr, m, lambda), 1e-6) << "seed " << s << " lambda " << lambda;
    }
  }
}

TEST(Linear, UnpenalizedMatchesNewtonOracle) {
  const auto pr = random_problem(99, 400, 4);
  const auto m = train_logistic_l1(pr.st, pr.x, pr.y, 0.0);
  const Eigen::Index n = 400, p = 5;
  Eigen::MatrixXd X(n, p);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    X(i, 0) = 1.0;
    for (Eigen::Index j = 1; j < p; ++j) X(i, j) = pr.x[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(i)];
    y(i) = pr.y[static_cast<std::size_t>(i)];
  }
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  for (int it = 0; it < 50; ++it) {
    const Eigen::VectorXd prob = (1.0 + (-(X * beta)).array().exp()).inverse();
    const Eigen::VectorXd w = prob.array() * (1.0 - prob.array());
    const Eigen::MatrixXd H = X.transpose() * w.asDiagonal() * X;
    beta += H.ldlt().solve(X.transpose() * (y - prob));
  }
  EXPECT_NEAR(m.intercept, beta(0), 1e-5);
  for (Eigen::Index j = 1; j < p; ++j) EXPECT_NEAR(m.coefficients[static_cast<std::size_t>(j - 1)], beta(j), 1e-5);
}

TEST(Linear, LargePenaltyGivesInterceptOnly) {
  const auto pr = random_problem(4, 300, 5);
  const auto m = train_logistic_l1(pr.st, pr.x, pr.y, 10.0);
  EXPECT_EQ(m.nonzero_count, 0u);
  double prev = 0;
  for (auto v : pr.y) prev += v;
  prev /= static_cast<double>(pr.y.size());
  EXPECT_NEAR(m.intercept, logit(prev), 1e-7);
}

TEST(Linear, StandardizationAndOneHot) {
  const auto d = synthesize(fixtures::small_config(500, 1)).data;
  const auto st = standardize_fit(d);
  // a, b, noise numeric plus three colour indicators.
  EXPECT_EQ(st.width(), 6u);
  const auto x = design_matrix(st, d);
  for (std::size_t j = 0; j < st.width(); ++j) {
    if (st.features[j].kind != ColumnKind::kNumeric) continue;
    double m = 0;
    for (double v : x[j]) m += v;
    // Missing cells sit at the mean, so the column still averages to zero.
    EXPECT_NEAR(m / static_cast<double>(x[j].size()), 0.0, 1e-9);
  }
  const auto model = train_logistic_l1(d, 0.001);
  EXPECT_GT(auc(predict_proba(model, d), d.outcome()), 0.65);
}

TEST(Linear, PathIsMonotoneInSparsity) {
  const auto d = synthesize(fixtures::small_config(800, 2)).data;
  std::vector<std::size_t> tr, va;
  for (std::size_t i = 0; i < d.rows(); ++i) (d.years()[i] == 2014 ? tr : va).push_back(i);
  const std::vector<double> strengths{1e-4, 1e-3, 3e-3, 1e-2, 3e-2, 1e-1};
  const auto path = sparsity_path(d.subset(tr), d.subset(va), strengths);
  ASSERT_EQ(path.size(), strengths.size());
  for (std::size_t k = 1; k < path.size(); ++k) {
    EXPECT_LT(path[k - 1].l1_strength, path[k].l1_strength);
    EXPECT_GE(path[k - 1].nonzero_count, path[k].nonzero_count);
  }
}
