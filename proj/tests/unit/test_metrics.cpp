#include <gtest/gtest.h>

#include "interprisk/common.hpp"
#include "interprisk/metrics.hpp"

using namespace interprisk;

namespace {

double pairwise_auc(const std::vector<double>& s, const std::vector<std::uint8_t>& y) {
  double wins = 0, pairs = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!y[i]) continue;
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (y[j]) continue;
      pairs += 1;
      wins += s[i] > s[j] ? 1.0 : (s[i] == s[j] ? 0.5 : 0.0);
    }
  }
  return wins / pairs;
}

}  // namespace

TEST(Auc, MatchesPairCountWithTies) {
  Rng rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + rng.below(150);
    std::vector<double> s(n);
    std::vector<std::uint8_t> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = static_cast<double>(rng.below(trial % 2 ? 5 : 1000));
      y[i] = rng.uniform() < 0.4;
    }
    y[0] = 1;
    y[1] = 0;
    EXPECT_NEAR(auc(s, y), pairwise_auc(s, y), 1e-12);
  }
}

TEST(Auc, KnownValues) {
  const std::vector<double> s{0.1, 0.4, 0.35, 0.8};
  const std::vector<std::uint8_t> y{0, 0, 1, 1};
  EXPECT_DOUBLE_EQ(auc(s, y), 0.75);
  const std::vector<double> flat{1, 1, 1, 1};
  EXPECT_DOUBLE_EQ(auc(flat, y), 0.5);
}

TEST(Auc, RejectsSingleClassAndBadLabels) {
  const std::vector<double> s{0.1, 0.2};
  EXPECT_THROW(auc(s, std::vector<std::uint8_t>{1, 1}), DataError);
  EXPECT_ANY_THROW(auc(s, std::vector<std::uint8_t>{1}));
}

TEST(Gains, EndpointsAndMonotone) {
  const std::vector<double> s{0.9, 0.1, 0.8, 0.3, 0.7};
  const std::vector<std::uint8_t> y{1, 0, 1, 0, 0};
  const auto g = cumulative_gains(s, y);
  ASSERT_EQ(g.points.size(), 6u);
  EXPECT_EQ(g.points.front().captured_fraction, 0.0);
  EXPECT_EQ(g.points.back().captured_fraction, 1.0);
  EXPECT_EQ(g.points.back().population_fraction, 1.0);
  for (std::size_t i = 1; i < g.points.size(); ++i) {
    EXPECT_GE(g.points[i].captured_fraction, g.points[i - 1].captured_fraction);
  }
  // Both positives rank in the top two.
  EXPECT_DOUBLE_EQ(g.population_for_capture(1.0), 0.4);
}

TEST(Common, SeedsAndFormatting) {
  EXPECT_NE(mix_seed(1, 0), mix_seed(1, 1));
  EXPECT_EQ(mix_seed(5, 9), mix_seed(5, 9));
  EXPECT_EQ(keyed_uniform(3, 4), keyed_uniform(3, 4));
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 123456789.125}) {
    EXPECT_EQ(std::stod(format_double(v)), v);
  }
  EXPECT_EQ(hex64(fnv1a("")), "cbf29ce484222325");
}
