#include <gtest/gtest.h>

#include <set>

#include "helpers.hpp"
#include "interprisk/binning.hpp"

using namespace interprisk;

namespace {

Dataset numeric_data(const std::vector<double>& x) {
  Schema s({{"x", ColumnKind::kNumeric, {}, ColumnRole::kFeature},
            {"y", ColumnKind::kNumeric, {}, ColumnRole::kOutcome},
            {"t", ColumnKind::kNumeric, {}, ColumnRole::kTime}});
  std::vector<std::uint8_t> y(x.size(), 0);
  if (!y.empty()) y[0] = 1;
  return Dataset(s, {x, {}, {}}, y, std::vector<int>(x.size(), 2014));
}

}  // namespace

TEST(Binning, FewDistinctValuesGetOneBinEach) {
  const auto layout = fit_bins(numeric_data({3, 1, 2, 2, 3, 1, kMissing}), 256);
  ASSERT_EQ(layout.size(), 1u);
  EXPECT_EQ(layout[0].regular_bins(), 3);
  EXPECT_EQ(layout[0].bin_of(1), 0);
  EXPECT_EQ(layout[0].bin_of(3), 2);
  EXPECT_EQ(layout[0].bin_of(kMissing), 3);
  // Out-of-range values clamp.
  EXPECT_EQ(layout[0].bin_of(-100), 0);
  EXPECT_EQ(layout[0].bin_of(100), 2);
}

TEST(Binning, NoEmptyBinsWithHeavyTies) {
  Rng rng(5);
  std::vector<double> x;
  for (int i = 0; i < 5000; ++i) x.push_back(rng.uniform() < 0.6 ? 0.0 : std::floor(rng.uniform() * 400));
  const auto binned = bin_features(numeric_data(x), 64);
  const auto counts = binned.bin_counts(0);
  const int regular = binned.layout()[0].regular_bins();
  EXPECT_LE(regular, 64);
  for (int b = 0; b < regular; ++b) EXPECT_GT(counts[static_cast<std::size_t>(b)], 0) << "bin " << b;
  std::int64_t total = 0;
  for (auto c : counts) total += c;
  EXPECT_EQ(total, 5000);
}

TEST(Binning, ConstantColumnIsDegenerate) {
  const auto layout = fit_bins(numeric_data({4, 4, 4}), 16);
  EXPECT_TRUE(layout[0].degenerate);
  EXPECT_EQ(layout[0].regular_bins(), 1);
}

TEST(Binning, EdgesDependOnlyOnBinningRows) {
  auto d = synthesize(fixtures::small_config(500, 2)).data;
  std::vector<std::size_t> first, all;
  for (std::size_t i = 0; i < d.rows(); ++i) {
    all.push_back(i);
    if (d.years()[i] == 2014) first.push_back(i);
  }
  const auto before = fit_bins(d, 32, first);
  // Overwrite every second-year cell with extreme values.
  std::vector<std::vector<double>> cols(d.schema().size());
  for (std::size_t c = 0; c < d.schema().size(); ++c) {
    auto src = d.column(c);
    cols[c].assign(src.begin(), src.end());
    if (d.schema().column(c).kind != ColumnKind::kNumeric || d.schema().column(c).role != ColumnRole::kFeature) continue;
    for (std::size_t i = 0; i < d.rows(); ++i) {
      if (d.years()[i] != 2014) cols[c][i] = 1e9 * static_cast<double>(i % 3);
    }
  }
  const Dataset poisoned(d.schema(), cols, {d.outcome().begin(), d.outcome().end()},
                         {d.years().begin(), d.years().end()});
  EXPECT_EQ(fit_bins(poisoned, 32, first), before);
  EXPECT_NE(fit_bins(poisoned, 32, all), before);
}

TEST(Binning, UnknownCategoryMapsToMissing) {
  const auto d = synthesize(fixtures::small_config(200, 2)).data;
  const auto layout = fit_bins(d, 32);
  const auto& colour = layout[2];
  ASSERT_EQ(colour.kind, ColumnKind::kCategorical);
  bool unknown = false;
  EXPECT_EQ(colour.bin_of(7.0, &unknown), colour.missing_bin());
  EXPECT_TRUE(unknown);
  EXPECT_EQ(colour.bin_of(1.0), 1);
}

TEST(Binning, SelectKeepsRequestedOrder) {
  const auto binned = bin_features(synthesize(fixtures::small_config(200, 2)).data, 16);
  const std::vector<std::string> names{"colour", "a"};
  const auto sel = binned.select(names);
  ASSERT_EQ(sel.features(), 2u);
  EXPECT_EQ(sel.layout()[0].name, "colour");
  EXPECT_TRUE(std::equal(sel.codes(1).begin(), sel.codes(1).end(), binned.codes(0).begin()));
}
