#pragma once

#include "json.hpp"

#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace cvdw::cli {

using Cell = std::variant<std::string, double, long long, bool>;

/// Column-ordered rows; every row has a value for every column.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row);
};

enum class Format { json, csv, tsv };

Format parse_format(const std::string& name);

/// q = ∞ is written as the string "inf" so that JSON stays valid.
Cell q_cell(double q);

/// JSON: {"schema": 1, "command": ..., "config": ..., "passed": ..., "rows": [...]}.
/// CSV/TSV: header line then one line per row; doubles use '.' and 17
/// significant digits.
void write(std::ostream& out, Format format, const std::string& command, const nlohmann::ordered_json& config,
           const Table& table, bool passed);

}  // namespace cvdw::cli
