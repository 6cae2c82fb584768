#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "interprisk/data.hpp"

namespace interprisk {

inline constexpr int kDefaultMaxBins = 256;

// Bin definition for one feature. Numeric bin k covers (cuts[k-1], cuts[k]],
// with the first and last bins open-ended, so out-of-range values clamp to the
// outermost bins. Categorical bin k is category k. The missing bin always
// follows the regular bins.
struct FeatureBins {
  std::string name;
  ColumnKind kind = ColumnKind::kNumeric;
  std::vector<double> cuts;
  std::vector<std::string> categories;
  double min_value = 0.0;  // observed range of the binning rows
  double max_value = 0.0;
  bool degenerate = false;

  int regular_bins() const {
    return kind == ColumnKind::kNumeric ? static_cast<int>(cuts.size()) + 1
                                        : static_cast<int>(categories.size());
  }
  int missing_bin() const { return regular_bins(); }
  int total_bins() const { return regular_bins() + 1; }

  // Bin for a raw cell value. For categorical features the value must be a
  // category index of this layout; anything else maps to the missing bin and
  // sets *unknown when provided.
  int bin_of(double value, bool* unknown = nullptr) const;
  // Representative abscissa of a regular numeric bin: the midpoint of its
  // edges, using the observed min/max for the outermost bins.
  double midpoint(int bin) const;

  bool operator==(const FeatureBins&) const = default;
};

using BinLayout = std::vector<FeatureBins>;

// Hash of names, kinds, categories and cut points.
std::string layout_hash(const BinLayout& layout);

// Raw feature values aligned with a BinLayout, categorical values already
// expressed as indices into the layout's category lists.
struct Record {
  std::vector<double> values;
};

// Maps dataset columns onto a layout by name, translating category labels.
class LayoutBinding {
 public:
  LayoutBinding(const BinLayout& layout, const Schema& schema);

  // Record for `row`. Categories unknown to the layout become an index past
  // the layout's category list.
  Record record(const Dataset& data, std::size_t row) const;
  std::size_t column_of(std::size_t feature) const { return columns_[feature]; }
  double translate(std::size_t feature, double cell) const;

 private:
  std::vector<std::size_t> columns_;
  std::vector<std::vector<double>> remap_;  // per feature; empty for numeric
};

class BinnedDataset {
 public:
  BinnedDataset() = default;
  BinnedDataset(BinLayout layout, std::vector<std::vector<std::uint16_t>> codes,
                std::vector<std::uint8_t> outcome, std::size_t unknown_categories = 0);

  const BinLayout& layout() const { return layout_; }
  std::size_t features() const { return layout_.size(); }
  std::size_t rows() const { return outcome_.size(); }
  std::span<const std::uint16_t> codes(std::size_t feature) const { return codes_[feature]; }
  std::span<const std::uint8_t> outcome() const { return outcome_; }
  // Per-bin row counts including the missing bin; sums to rows().
  std::span<const std::int64_t> bin_counts(std::size_t feature) const { return counts_[feature]; }
  std::size_t unknown_categories() const { return unknown_categories_; }
  std::size_t feature_index(std::string_view name) const;

  // Same rows restricted to the named features, in the given order.
  BinnedDataset select(std::span<const std::string> names) const;

 private:
  BinLayout layout_;
  std::vector<std::vector<std::uint16_t>> codes_;
  std::vector<std::vector<std::int64_t>> counts_;
  std::vector<std::uint8_t> outcome_;
  std::size_t unknown_categories_ = 0;
};

// Quantile bin edges computed on `rows` of `data` (all rows when empty) for
// every feature-role column. Duplicate edges collapse and no empty regular
// bin is produced, so a feature never has more bins than distinct values.
BinLayout fit_bins(const Dataset& data, int max_bins, std::span<const std::size_t> rows = {});

// Encodes every row of `data` with an existing layout.
BinnedDataset apply_bins(const Dataset& data, const BinLayout& layout);

// fit_bins on all rows followed by apply_bins.
BinnedDataset bin_features(const Dataset& data, int max_bins = kDefaultMaxBins);

}  // namespace interprisk
