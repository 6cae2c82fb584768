#include "interprisk/binning.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <limits>

namespace interprisk {

int FeatureBins::bin_of(double value, bool* unknown) const {
  if (is_missing(value)) return missing_bin();
  if (kind == ColumnKind::kNumeric) {
    return static_cast<int>(std::lower_bound(cuts.begin(), cuts.end(), value) - cuts.begin());
  }
  if (value >= 0 && value < static_cast<double>(categories.size())) return static_cast<int>(value);
  if (unknown) *unknown = true;
  return missing_bin();
}

double FeatureBins::midpoint(int bin) const {
  if (kind != ColumnKind::kNumeric) throw ConfigError("midpoint: '" + name + "' is categorical");
  if (bin < 0 || bin >= regular_bins()) throw ConfigError("midpoint: bin out of range");
  const double lo = bin == 0 ? min_value : cuts[static_cast<std::size_t>(bin - 1)];
  const double hi = bin == regular_bins() - 1 ? max_value : cuts[static_cast<std::size_t>(bin)];
  return 0.5 * (lo + hi);
}

std::string layout_hash(const BinLayout& layout) {
  std::uint64_t h = fnv1a("layout");
  for (const auto& f : layout) {
    h = fnv1a(f.name, h);
    h = fnv1a(to_string(f.kind), h);
    for (const auto& c : f.categories) h = fnv1a(c + "\x1f", h);
    for (double c : f.cuts) {
      char buf[8];
      std::memcpy(buf, &c, 8);
      h = fnv1a(std::string_view(buf, 8), h);
    }
    h = fnv1a("\x1e", h);
  }
  return hex64(h);
}

LayoutBinding::LayoutBinding(const BinLayout& layout, const Schema& schema) {
  columns_.reserve(layout.size());
  remap_.resize(layout.size());
  for (std::size_t f = 0; f < layout.size(); ++f) {
    const auto& bins = layout[f];
    const auto col = schema.find(bins.name);
    if (!col) throw ConfigError("dataset has no column '" + bins.name + "'");
    const auto& spec = schema.column(*col);
    if (spec.kind != bins.kind) {
      throw ConfigError("column '" + bins.name + "' kind differs from the model's");
    }
    columns_.push_back(*col);
    if (spec.kind == ColumnKind::kCategorical) {
      auto& remap = remap_[f];
      remap.resize(spec.categories.size());
      for (std::size_t k = 0; k < spec.categories.size(); ++k) {
        const auto it = std::find(bins.categories.begin(), bins.categories.end(), spec.categories[k]);
        remap[k] = it == bins.categories.end() ? static_cast<double>(bins.categories.size())
                                               : static_cast<double>(it - bins.categories.begin());
      }
    }
  }
}

double LayoutBinding::translate(std::size_t feature, double cell) const {
  if (is_missing(cell) || remap_[feature].empty()) return cell;
  return remap_[feature][static_cast<std::size_t>(cell)];
}

Record LayoutBinding::record(const Dataset& data, std::size_t row) const {
  Record r;
  r.values.reserve(columns_.size());
  for (std::size_t f = 0; f < columns_.size(); ++f) {
    r.values.push_back(translate(f, data.cell(columns_[f], row)));
  }
  return r;
}

BinnedDataset::BinnedDataset(BinLayout layout, std::vector<std::vector<std::uint16_t>> codes,
                             std::vector<std::uint8_t> outcome, std::size_t unknown_categories)
    : layout_(std::move(layout)),
      codes_(std::move(codes)),
      outcome_(std::move(outcome)),
      unknown_categories_(unknown_categories) {
  if (codes_.size() != layout_.size()) throw DataError("binned dataset: feature count mismatch");
  counts_.resize(layout_.size());
  for (std::size_t f = 0; f < layout_.size(); ++f) {
    if (codes_[f].size() != outcome_.size()) throw DataError("binned dataset: row count mismatch");
    auto& counts = counts_[f];
    counts.assign(static_cast<std::size_t>(layout_[f].total_bins()), 0);
    for (auto c : codes_[f]) {
      if (c >= counts.size()) throw DataError("binned dataset: code out of range");
      ++counts[c];
    }
  }
}

std::size_t BinnedDataset::feature_index(std::string_view name) const {
  for (std::size_t f = 0; f < layout_.size(); ++f) {
    if (layout_[f].name == name) return f;
  }
  throw ConfigError("unknown feature '" + std::string(name) + "'");
}

BinnedDataset BinnedDataset::select(std::span<const std::string> names) const {
  BinLayout layout;
  std::vector<std::vector<std::uint16_t>> codes;
  for (const auto& n : names) {
    const auto f = feature_index(n);
    layout.push_back(layout_[f]);
    codes.push_back(codes_[f]);
  }
  return BinnedDataset(std::move(layout), std::move(codes), outcome_, unknown_categories_);
}

namespace {

// Linear-interpolation quantile of sorted values (the common "type 7").
double quantile_sorted(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

std::vector<double> numeric_cuts(std::vector<double> values, int max_bins) {
  std::sort(values.begin(), values.end());
  std::vector<double> distinct = values;
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  std::vector<double> cuts;
  if (distinct.size() <= 1) return cuts;
  if (distinct.size() <= static_cast<std::size_t>(max_bins)) {
    for (std::size_t i = 0; i + 1 < distinct.size(); ++i) {
      cuts.push_back(distinct[i] + 0.5 * (distinct[i + 1] - distinct[i]));
    }
    return cuts;
  }
  // Keep a candidate only if the bin it closes and the bin it opens both
  // contain at least one distinct value.
  std::size_t next_distinct = 0;  // first distinct value above the last kept cut
  for (int k = 1; k < max_bins; ++k) {
    const double c = quantile_sorted(values, static_cast<double>(k) / max_bins);
    if (!cuts.empty() && c <= cuts.back()) continue;
    if (next_distinct >= distinct.size() || distinct[next_distinct] > c) continue;
    if (c >= distinct.back()) break;
    cuts.push_back(c);
    next_distinct = static_cast<std::size_t>(
        std::upper_bound(distinct.begin(), distinct.end(), c) - distinct.begin());
  }
  return cuts;
}

}  // namespace

BinLayout fit_bins(const Dataset& data, int max_bins, std::span<const std::size_t> rows) {
  if (max_bins < 2) throw ConfigError("max_bins must be at least 2");
  if (max_bins > 4096) throw ConfigError("max_bins must be at most 4096");
  const auto& schema = data.schema();
  std::vector<std::size_t> all;
  if (rows.empty()) {
    all.resize(data.rows());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    rows = all;
  }
  BinLayout layout;
  for (auto col : schema.indices_with_role(ColumnRole::kFeature)) {
    const auto& spec = schema.column(col);
    FeatureBins bins;
    bins.name = spec.name;
    bins.kind = spec.kind;
    const auto cells = data.column(col);
    if (spec.kind == ColumnKind::kNumeric) {
      std::vector<double> values;
      values.reserve(rows.size());
      for (auto r : rows) {
        if (!is_missing(cells[r])) values.push_back(cells[r]);
      }
      if (!values.empty()) {
        const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
        bins.min_value = *mn;
        bins.max_value = *mx;
      }
      bins.degenerate = values.empty() || bins.min_value == bins.max_value;
      bins.cuts = numeric_cuts(std::move(values), max_bins);
    } else {
      bins.categories = spec.categories;
      std::vector<bool> present(spec.categories.size(), false);
      for (auto r : rows) {
        if (!is_missing(cells[r])) present[static_cast<std::size_t>(cells[r])] = true;
      }
      bins.degenerate = std::count(present.begin(), present.end(), true) <= 1;
    }
    layout.push_back(std::move(bins));
  }
  if (layout.empty()) throw ConfigError("dataset has no feature columns");
  return layout;
}

BinnedDataset apply_bins(const Dataset& data, const BinLayout& layout) {
  LayoutBinding binding(layout, data.schema());
  std::vector<std::vector<std::uint16_t>> codes(layout.size());
  std::size_t unknown = 0;
  for (std::size_t f = 0; f < layout.size(); ++f) {
    const auto cells = data.column(binding.column_of(f));
    auto& out = codes[f];
    out.resize(data.rows());
    for (std::size_t r = 0; r < data.rows(); ++r) {
      bool flagged = false;
      out[r] = static_cast<std::uint16_t>(layout[f].bin_of(binding.translate(f, cells[r]), &flagged));
      unknown += flagged;
    }
  }
  std::vector<std::uint8_t> outcome(data.outcome().begin(), data.outcome().end());
  return BinnedDataset(layout, std::move(codes), std::move(outcome), unknown);
}

BinnedDataset bin_features(const Dataset& data, int max_bins) {
  return apply_bins(data, fit_bins(data, max_bins));
}

}  // namespace interprisk
