#include "interprisk/data.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace interprisk {

using json = nlohmann::json;

std::string_view to_string(ColumnKind kind) {
  return kind == ColumnKind::kNumeric ? "numeric" : "categorical";
}

std::string_view to_string(ColumnRole role) {
  switch (role) {
    case ColumnRole::kFeature: return "feature";
    case ColumnRole::kOutcome: return "outcome";
    case ColumnRole::kTime: return "time";
    case ColumnRole::kGroup: return "group";
  }
  return "feature";
}

ColumnKind parse_column_kind(std::string_view text) {
  if (text == "numeric") return ColumnKind::kNumeric;
  if (text == "categorical") return ColumnKind::kCategorical;
  throw ConfigError("unknown column kind '" + std::string(text) + "'");
}

ColumnRole parse_column_role(std::string_view text) {
  if (text == "feature") return ColumnRole::kFeature;
  if (text == "outcome") return ColumnRole::kOutcome;
  if (text == "time") return ColumnRole::kTime;
  if (text == "group") return ColumnRole::kGroup;
  throw ConfigError("unknown column role '" + std::string(text) + "'");
}

int ColumnSpec::category_index(std::string_view label) const {
  for (std::size_t i = 0; i < categories.size(); ++i) {
    if (categories[i] == label) return static_cast<int>(i);
  }
  return -1;
}

Schema::Schema(std::vector<ColumnSpec> columns) : columns_(std::move(columns)) {
  std::optional<std::size_t> outcome, time;
  std::set<std::string> names;
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    const auto& c = columns_[i];
    if (c.name.empty()) throw ConfigError("schema: column " + std::to_string(i) + " has no name");
    if (!names.insert(c.name).second) throw ConfigError("schema: duplicate column '" + c.name + "'");
    if (c.kind == ColumnKind::kCategorical) {
      if (c.categories.empty()) {
        throw ConfigError("schema: categorical column '" + c.name + "' has no categories");
      }
      std::set<std::string> seen;
      for (const auto& cat : c.categories) {
        if (cat.empty()) throw ConfigError("schema: empty category label in '" + c.name + "'");
        if (!seen.insert(cat).second) {
          throw ConfigError("schema: duplicate category '" + cat + "' in '" + c.name + "'");
        }
      }
    }
    if (c.role == ColumnRole::kOutcome) {
      if (outcome) throw ConfigError("schema: more than one outcome column");
      outcome = i;
    } else if (c.role == ColumnRole::kTime) {
      if (time) throw ConfigError("schema: more than one time column");
      time = i;
    }
  }
  if (!outcome) throw ConfigError("schema: no outcome column");
  if (!time) throw ConfigError("schema: no time column");
  outcome_ = *outcome;
  time_ = *time;
}

std::optional<std::size_t> Schema::find(std::string_view name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i].name == name) return i;
  }
  return std::nullopt;
}

std::size_t Schema::require(std::string_view name) const {
  auto idx = find(name);
  if (!idx) throw ConfigError("unknown column '" + std::string(name) + "'");
  return *idx;
}

std::vector<std::size_t> Schema::indices_with_role(ColumnRole role) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i].role == role) out.push_back(i);
  }
  return out;
}

std::string schema_to_json(const Schema& schema) {
  json cols = json::array();
  for (const auto& c : schema.columns()) {
    json col = {{"name", c.name}, {"kind", to_string(c.kind)}, {"role", to_string(c.role)}};
    if (c.kind == ColumnKind::kCategorical) col["categories"] = c.categories;
    cols.push_back(std::move(col));
  }
  return json{{"columns", cols}}.dump(2) + "\n";
}

Schema schema_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("schema: invalid JSON: ") + e.what());
  }
  if (!doc.contains("columns") || !doc["columns"].is_array()) {
    throw ConfigError("schema: expected a 'columns' array");
  }
  std::vector<ColumnSpec> cols;
  try {
    for (const auto& c : doc["columns"]) {
      ColumnSpec spec;
      spec.name = c.at("name").get<std::string>();
      spec.kind = parse_column_kind(c.value("kind", std::string("numeric")));
      spec.role = parse_column_role(c.value("role", std::string("feature")));
      if (c.contains("categories")) spec.categories = c["categories"].get<std::vector<std::string>>();
      cols.push_back(std::move(spec));
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("schema: ") + e.what());
  }
  return Schema(std::move(cols));
}

Schema load_schema(const std::filesystem::path& path) { return schema_from_json(read_file(path)); }

void save_schema(const Schema& schema, const std::filesystem::path& path) {
  write_file_atomic(path, schema_to_json(schema));
}

Dataset::Dataset(Schema schema, std::vector<std::vector<double>> columns,
                 std::vector<std::uint8_t> outcome, std::vector<int> years)
    : schema_(std::move(schema)),
      columns_(std::move(columns)),
      outcome_(std::move(outcome)),
      years_(std::move(years)) {
  const std::size_t n = outcome_.size();
  if (n == 0) throw DataError("empty dataset");
  if (years_.size() != n) throw DataError("dataset: time column length mismatch");
  if (columns_.size() != schema_.size()) throw DataError("dataset: column count does not match schema");
  for (std::size_t c = 0; c < columns_.size(); ++c) {
    const auto& spec = schema_.column(c);
    if (c == schema_.outcome_index() || c == schema_.time_index()) {
      columns_[c].clear();
      continue;
    }
    if (columns_[c].size() != n) throw DataError("dataset: column '" + spec.name + "' length mismatch");
    if (spec.kind == ColumnKind::kCategorical) {
      const auto limit = static_cast<double>(spec.categories.size());
      for (double v : columns_[c]) {
        if (is_missing(v)) continue;
        if (v < 0 || v >= limit || v != std::floor(v)) {
          throw DataError("dataset: category index out of range in '" + spec.name + "'");
        }
      }
    }
  }
  for (auto y : outcome_) {
    if (y > 1) throw DataError("dataset: outcome must be 0 or 1");
  }
}

std::vector<int> Dataset::distinct_years() const {
  std::vector<int> out(years_.begin(), years_.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double Dataset::prevalence() const {
  const auto pos = std::count(outcome_.begin(), outcome_.end(), std::uint8_t{1});
  return static_cast<double>(pos) / static_cast<double>(outcome_.size());
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
  std::vector<std::vector<double>> cols(columns_.size());
  for (std::size_t c = 0; c < columns_.size(); ++c) {
    if (columns_[c].empty()) continue;
    cols[c].reserve(rows.size());
    for (auto r : rows) cols[c].push_back(columns_[c].at(r));
  }
  std::vector<std::uint8_t> out;
  std::vector<int> yrs;
  out.reserve(rows.size());
  yrs.reserve(rows.size());
  for (auto r : rows) {
    out.push_back(outcome_.at(r));
    yrs.push_back(years_.at(r));
  }
  return Dataset(schema_, std::move(cols), std::move(out), std::move(yrs));
}

namespace {

// Bit pattern of a cell with every NaN collapsed to one representation.
std::uint64_t cell_bits(double v) {
  if (std::isnan(v)) return 0x7ff8000000000000ULL;
  if (v == 0.0) v = 0.0;
  return std::bit_cast<std::uint64_t>(v);
}

}  // namespace

Dataset Dataset::canonical_order() const {
  const std::size_t n = rows();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  auto less = [&](std::size_t a, std::size_t b) {
    if (years_[a] != years_[b]) return years_[a] < years_[b];
    if (outcome_[a] != outcome_[b]) return outcome_[a] < outcome_[b];
    for (const auto& col : columns_) {
      if (col.empty()) continue;
      const auto ba = cell_bits(col[a]);
      const auto bb = cell_bits(col[b]);
      if (ba != bb) return ba < bb;
    }
    return false;
  };
  std::stable_sort(order.begin(), order.end(), less);
  return subset(order);
}

std::uint64_t Dataset::content_hash() const {
  std::uint64_t h = fnv1a(schema_to_json(schema_));
  auto feed = [&h](std::uint64_t bits) {
    char buf[8];
    std::memcpy(buf, &bits, 8);
    h = fnv1a(std::string_view(buf, 8), h);
  };
  for (std::size_t r = 0; r < rows(); ++r) {
    feed(static_cast<std::uint64_t>(years_[r]));
    feed(outcome_[r]);
    for (const auto& col : columns_) {
      if (!col.empty()) feed(cell_bits(col[r]));
    }
  }
  return h;
}

bool Dataset::operator==(const Dataset& other) const {
  if (!(schema_ == other.schema_) || outcome_ != other.outcome_ || years_ != other.years_) return false;
  for (std::size_t c = 0; c < columns_.size(); ++c) {
    const auto& a = columns_[c];
    const auto& b = other.columns_[c];
    if (a.size() != b.size()) return false;
    for (std::size_t r = 0; r < a.size(); ++r) {
      if (cell_bits(a[r]) != cell_bits(b[r])) return false;
    }
  }
  return true;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw std::runtime_error("write failed for '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace interprisk
