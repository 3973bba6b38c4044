#include "magictrap/table.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace magictrap {

void ResultTable::add_row(std::vector<double> row) {
  if (row.size() != columns.size()) {
    throw std::invalid_argument("row has " + std::to_string(row.size()) + " values for " +
                                std::to_string(columns.size()) + " columns");
  }
  rows.push_back(std::move(row));
}

std::string format_number(double x) {
  if (x == 0.0) return "0";
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const double a = std::abs(x);
  if (a < 1e-3 || a >= 1e6) {
    std::snprintf(buf, sizeof buf, "%.11e", x);
  } else {
    std::snprintf(buf, sizeof buf, "%.12g", x);
  }
  return buf;
}

void write_csv(std::ostream& os, const ResultTable& table, bool with_meta) {
  if (with_meta) {
    for (const auto& [k, v] : table.metadata) os << "# " << k << ": " << v << '\n';
  }
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) os << ',';
    os << table.columns[i].name << '[' << table.columns[i].unit << ']';
  }
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      os << format_number(row[i]);
    }
    os << '\n';
  }
}

nlohmann::ordered_json table_to_json(const ResultTable& table, bool with_meta) {
  nlohmann::ordered_json j;
  if (with_meta) {
    nlohmann::ordered_json meta = nlohmann::ordered_json::object();
    for (const auto& [k, v] : table.metadata) meta[k] = v;
    j["metadata"] = meta;
  }
  nlohmann::ordered_json cols = nlohmann::ordered_json::array();
  for (const auto& c : table.columns) cols.push_back({{"name", c.name}, {"unit", c.unit}});
  j["columns"] = cols;
  // Numbers go out as the same strings the CSV uses, then re-parsed, so both
  // formats carry identical values.
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json r = nlohmann::ordered_json::array();
    for (double v : row) {
      if (std::isfinite(v)) {
        r.push_back(nlohmann::ordered_json::parse(format_number(v)));
      } else {
        r.push_back(nullptr);
      }
    }
    rows.push_back(r);
  }
  j["rows"] = rows;
  return j;
}

void write_json(std::ostream& os, const ResultTable& table, bool with_meta) {
  os << table_to_json(table, with_meta).dump(2) << '\n';
}

}  // namespace magictrap
