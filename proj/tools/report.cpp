#include "report.hpp"

#include <fmt/format.h>

#include <cmath>
#include <stdexcept>

namespace cvdw::cli {

namespace {

std::string text(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::string>) return v;
        else if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
        else if constexpr (std::is_same_v<T, double>) return fmt::format("{:.17g}", v);
        else return fmt::format("{}", v);
      },
      c);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

nlohmann::ordered_json to_json(const Cell& c) {
  return std::visit(
      [](const auto& v) -> nlohmann::ordered_json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) {
          if (!std::isfinite(v)) return fmt::format("{}", v);
        }
        return v;
      },
      c);
}

}  // namespace

void Table::add(std::vector<Cell> row) {
  if (row.size() != columns.size()) throw std::logic_error("row width does not match the columns");
  rows.push_back(std::move(row));
}

Format parse_format(const std::string& name) {
  if (name == "json") return Format::json;
  if (name == "csv") return Format::csv;
  if (name == "tsv") return Format::tsv;
  throw std::invalid_argument("unknown output format '" + name + "'");
}

Cell q_cell(double q) { return std::isinf(q) ? Cell{std::string("inf")} : Cell{q}; }

void write(std::ostream& out, Format format, const std::string& command, const nlohmann::ordered_json& config,
           const Table& table, bool passed) {
  if (format == Format::json) {
    nlohmann::ordered_json doc;
    doc["schema"] = 1;
    doc["command"] = command;
    doc["config"] = config;
    doc["passed"] = passed;
    auto& rows = doc["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
      nlohmann::ordered_json obj;
      for (std::size_t i = 0; i < row.size(); ++i) obj[table.columns[i]] = to_json(row[i]);
      rows.push_back(std::move(obj));
    }
    out << doc.dump(2) << '\n';
    return;
  }
  const char sep = format == Format::csv ? ',' : '\t';
  auto field = [&](const std::string& s) { return format == Format::csv ? csv_field(s) : s; };
  for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? std::string(1, sep) : "") << field(table.columns[i]);
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? std::string(1, sep) : "") << field(text(row[i]));
    out << '\n';
  }
}

}  // namespace cvdw::cli
