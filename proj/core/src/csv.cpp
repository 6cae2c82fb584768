#include <charconv>
#include <string>

#include "interprisk/data.hpp"

namespace interprisk {

namespace {

// Splits one CSV record. Supports double-quoted fields with "" escapes.
std::vector<std::string> split_record(std::string_view line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current.push_back(c);
      }
    } else if (c == '"' && current.empty()) {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  if (quoted) throw ConfigError("csv line " + std::to_string(line_no) + ": unterminated quote");
  fields.push_back(std::move(current));
  return fields;
}

std::string quote_if_needed(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

[[noreturn]] void cell_error(std::size_t line_no, const std::string& column, const std::string& what) {
  throw ConfigError("csv line " + std::to_string(line_no) + ", column '" + column + "': " + what);
}

}  // namespace

Dataset parse_csv(std::string_view text, const Schema& schema) {
  std::size_t pos = 0;
  std::size_t line_no = 0;
  auto next_line = [&](std::string_view& out) {
    if (pos >= text.size()) return false;
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    out = text.substr(pos, end - pos);
    if (!out.empty() && out.back() == '\r') out.remove_suffix(1);
    pos = end + 1;
    ++line_no;
    return true;
  };

  std::string_view line;
  if (!next_line(line)) throw ConfigError("csv: missing header row");
  if (line.size() >= 3 && line.substr(0, 3) == "\xEF\xBB\xBF") line.remove_prefix(3);
  const auto header = split_record(line, line_no);
  if (header.size() != schema.size()) {
    throw ConfigError("csv: header has " + std::to_string(header.size()) + " columns, schema has " +
                      std::to_string(schema.size()));
  }
  // file column -> schema column
  std::vector<std::size_t> mapping(header.size());
  std::vector<bool> seen(schema.size(), false);
  for (std::size_t i = 0; i < header.size(); ++i) {
    auto idx = schema.find(header[i]);
    if (!idx) throw ConfigError("csv: header column '" + header[i] + "' is not in the schema");
    if (seen[*idx]) throw ConfigError("csv: duplicate header column '" + header[i] + "'");
    seen[*idx] = true;
    mapping[i] = *idx;
  }

  std::vector<std::vector<double>> columns(schema.size());
  std::vector<std::uint8_t> outcome;
  std::vector<int> years;
  while (next_line(line)) {
    if (line.empty()) continue;
    const auto fields = split_record(line, line_no);
    if (fields.size() != header.size()) {
      throw ConfigError("csv line " + std::to_string(line_no) + ": expected " +
                        std::to_string(header.size()) + " fields, found " + std::to_string(fields.size()));
    }
    for (std::size_t i = 0; i < fields.size(); ++i) {
      const std::size_t col = mapping[i];
      const auto& spec = schema.column(col);
      const std::string& f = fields[i];
      if (col == schema.outcome_index()) {
        if (f.empty()) cell_error(line_no, spec.name, "missing outcome");
        if (f != "0" && f != "1") cell_error(line_no, spec.name, "outcome must be 0 or 1, got '" + f + "'");
        outcome.push_back(f == "1" ? 1 : 0);
      } else if (col == schema.time_index()) {
        int year = 0;
        auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), year);
        if (f.empty() || ec != std::errc() || p != f.data() + f.size()) {
          cell_error(line_no, spec.name, "invalid year '" + f + "'");
        }
        years.push_back(year);
      } else if (f.empty()) {
        columns[col].push_back(kMissing);
      } else if (spec.kind == ColumnKind::kNumeric) {
        double v = 0.0;
        auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
        if (ec != std::errc() || p != f.data() + f.size() || !std::isfinite(v)) {
          cell_error(line_no, spec.name, "malformed number '" + f + "'");
        }
        columns[col].push_back(v);
      } else {
        const int code = spec.category_index(f);
        if (code < 0) cell_error(line_no, spec.name, "unknown category '" + f + "'");
        columns[col].push_back(static_cast<double>(code));
      }
    }
  }
  if (outcome.empty()) throw DataError("empty dataset");
  return Dataset(schema, std::move(columns), std::move(outcome), std::move(years));
}

Dataset load_csv(const std::filesystem::path& path, const Schema& schema) {
  return parse_csv(read_file(path), schema);
}

std::string to_csv(const Dataset& dataset) {
  const auto& schema = dataset.schema();
  std::string out;
  for (std::size_t c = 0; c < schema.size(); ++c) {
    if (c) out.push_back(',');
    out += quote_if_needed(schema.column(c).name);
  }
  out.push_back('\n');
  for (std::size_t r = 0; r < dataset.rows(); ++r) {
    for (std::size_t c = 0; c < schema.size(); ++c) {
      if (c) out.push_back(',');
      const auto& spec = schema.column(c);
      if (c == schema.outcome_index()) {
        out.push_back(dataset.outcome()[r] ? '1' : '0');
      } else if (c == schema.time_index()) {
        out += std::to_string(dataset.years()[r]);
      } else {
        const double v = dataset.cell(c, r);
        if (is_missing(v)) continue;
        if (spec.kind == ColumnKind::kNumeric) {
          out += format_double(v);
        } else {
          out += quote_if_needed(spec.categories[static_cast<std::size_t>(v)]);
        }
      }
    }
    out.push_back('\n');
  }
  return out;
}

void write_csv(const Dataset& dataset, const std::filesystem::path& path) {
  write_file_atomic(path, to_csv(dataset));
}

}  // namespace interprisk
