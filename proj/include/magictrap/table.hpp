#pragma once

#include "json.hpp"

#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace magictrap {

struct Column {
  std::string name;
  std::string unit;  // "1" for dimensionless
};

// Numeric table with a unit on every column and ordered key/value metadata.
struct ResultTable {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<Column> columns;
  std::vector<std::vector<double>> rows;

  void add_meta(const std::string& key, const std::string& value) { metadata.emplace_back(key, value); }
  void add_column(const std::string& name, const std::string& unit) { columns.push_back({name, unit}); }
  /// Throws std::invalid_argument if the row width does not match the columns.
  void add_row(std::vector<double> row);
};

/// 12 significant digits; scientific for |x| < 1e-3 or |x| >= 1e6, zero as "0".
std::string format_number(double x);

/// "# key: value" lines (unless with_meta is false), a "name[unit]" header row,
/// then comma-separated rows.
void write_csv(std::ostream& os, const ResultTable& table, bool with_meta = true);

nlohmann::ordered_json table_to_json(const ResultTable& table, bool with_meta = true);
void write_json(std::ostream& os, const ResultTable& table, bool with_meta = true);

}  // namespace magictrap
