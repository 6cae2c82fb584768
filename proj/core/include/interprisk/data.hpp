#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "interprisk/common.hpp"

namespace interprisk {

enum class ColumnKind { kNumeric, kCategorical };
enum class ColumnRole { kFeature, kOutcome, kTime, kGroup };

std::string_view to_string(ColumnKind kind);
std::string_view to_string(ColumnRole role);
ColumnKind parse_column_kind(std::string_view text);
ColumnRole parse_column_role(std::string_view text);

struct ColumnSpec {
  std::string name;
  ColumnKind kind = ColumnKind::kNumeric;
  std::vector<std::string> categories;  // categorical only, ordered
  ColumnRole role = ColumnRole::kFeature;

  // Index of `label` in categories, or -1.
  int category_index(std::string_view label) const;
  bool operator==(const ColumnSpec&) const = default;
};

// Ordered column list with exactly one outcome and one time column.
class Schema {
 public:
  Schema() = default;
  explicit Schema(std::vector<ColumnSpec> columns);

  const std::vector<ColumnSpec>& columns() const { return columns_; }
  const ColumnSpec& column(std::size_t i) const { return columns_.at(i); }
  std::size_t size() const { return columns_.size(); }
  std::size_t outcome_index() const { return outcome_; }
  std::size_t time_index() const { return time_; }
  std::optional<std::size_t> find(std::string_view name) const;
  std::size_t require(std::string_view name) const;
  std::vector<std::size_t> indices_with_role(ColumnRole role) const;

  bool operator==(const Schema& other) const { return columns_ == other.columns_; }

 private:
  std::vector<ColumnSpec> columns_;
  std::size_t outcome_ = 0;
  std::size_t time_ = 0;
};

std::string schema_to_json(const Schema& schema);
Schema schema_from_json(std::string_view text);
Schema load_schema(const std::filesystem::path& path);
void save_schema(const Schema& schema, const std::filesystem::path& path);

inline bool is_missing(double cell) { return std::isnan(cell); }
inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

// Columnar table. Numeric cells hold the value, categorical cells hold the
// category index as an exact small integer; NaN marks a missing cell. The
// outcome and time columns are stored separately and are never missing.
class Dataset {
 public:
  Dataset() = default;
  // `columns` is indexed like schema.columns(); the entries for the outcome
  // and time columns are ignored and may be empty.
  Dataset(Schema schema, std::vector<std::vector<double>> columns,
          std::vector<std::uint8_t> outcome, std::vector<int> years);

  const Schema& schema() const { return schema_; }
  std::size_t rows() const { return outcome_.size(); }
  std::span<const double> column(std::size_t col) const { return columns_.at(col); }
  std::span<const double> column(std::string_view name) const {
    return column(schema_.require(name));
  }
  double cell(std::size_t col, std::size_t row) const { return columns_[col][row]; }
  std::span<const std::uint8_t> outcome() const { return outcome_; }
  std::span<const int> years() const { return years_; }

  std::vector<int> distinct_years() const;
  double prevalence() const;

  Dataset subset(std::span<const std::size_t> rows) const;
  // Rows reordered by content so that any permutation of the same multiset
  // of rows yields an identical dataset.
  Dataset canonical_order() const;
  // Hash of schema and every cell; stable across runs and platforms.
  std::uint64_t content_hash() const;

  bool operator==(const Dataset& other) const;

 private:
  Schema schema_;
  std::vector<std::vector<double>> columns_;
  std::vector<std::uint8_t> outcome_;
  std::vector<int> years_;
};

// Parses a comma separated file with a header row. Empty cells are missing.
Dataset load_csv(const std::filesystem::path& path, const Schema& schema);
Dataset parse_csv(std::string_view text, const Schema& schema);
std::string to_csv(const Dataset& dataset);
void write_csv(const Dataset& dataset, const std::filesystem::path& path);

// Writes `contents` to a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);
std::string read_file(const std::filesystem::path& path);

}  // namespace interprisk
