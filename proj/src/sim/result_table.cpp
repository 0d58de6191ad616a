#include "gramint/sim/result_table.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace gramint::sim {

void ResultTable::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size())
    throw std::invalid_argument("table '" + name + "': row has " + std::to_string(row.size()) +
                                " cells, schema has " + std::to_string(columns.size()));
  rows.push_back(std::move(row));
}

void ResultTable::set_meta(const std::string& key, const std::string& value) {
  for (auto& [k, v] : metadata)
    if (k == key) {
      v = value;
      return;
    }
  metadata.emplace_back(key, value);
}

std::string ResultTable::meta(const std::string& key) const {
  for (const auto& [k, v] : metadata)
    if (k == key) return v;
  return {};
}

std::size_t ResultTable::column(const std::string& col) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == col) return i;
  throw std::out_of_range("table '" + name + "' has no column '" + col + "'");
}

double ResultTable::number(std::size_t row, const std::string& col) const {
  const Cell& c = rows.at(row).at(column(col));
  if (const auto* i = std::get_if<std::int64_t>(&c)) return static_cast<double>(*i);
  if (const auto* d = std::get_if<double>(&c)) return *d;
  throw std::invalid_argument("column '" + col + "' is not numeric");
}

const std::string& ResultTable::text(std::size_t row, const std::string& col) const {
  return std::get<std::string>(rows.at(row).at(column(col)));
}

std::string format_cell(const Cell& cell) {
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return std::to_string(*i);
  if (const auto* s = std::get_if<std::string>(&cell)) return *s;
  const double v = std::get<double>(cell);
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_csv(std::ostream& out, const ResultTable& table) {
  out << "# table: " << table.name << '\n';
  for (const auto& [key, value] : table.metadata) {
    if (value.find('\n') == std::string::npos) {
      out << "# " << key << ": " << value << '\n';
      continue;
    }
    out << "# " << key << ":\n";
    std::istringstream lines(value);
    for (std::string line; std::getline(lines, line);) out << "#   " << line << '\n';
  }
  for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_cell(row[i]);
    out << '\n';
  }
}

std::string to_csv(const ResultTable& table) {
  std::ostringstream out;
  write_csv(out, table);
  return out.str();
}

std::string plot_json(const PlotSpec& spec, const ResultTable& table, const std::string& csv_path) {
  nlohmann::ordered_json j;
  j["schema_version"] = kPlotSchemaVersion;
  j["title"] = spec.title;
  j["data"] = {{"path", csv_path}, {"format", "csv"}, {"comment_prefix", "#"},
               {"table", table.name}, {"config_hash", table.meta("config_hash")}};
  j["axes"] = {{"x", {{"label", spec.x_label}, {"scale", spec.x_scale}}},
               {"y", {{"label", spec.y_label}, {"scale", spec.y_scale}}}};
  auto series = nlohmann::ordered_json::array();
  for (const auto& s : spec.series) {
    nlohmann::ordered_json where = nlohmann::ordered_json::object();
    for (const auto& [k, v] : s.where) where[k] = v;
    series.push_back({{"label", s.label}, {"x", s.x}, {"y", s.y}, {"where", where}});
  }
  j["series"] = series;
  return j.dump(2) + "\n";
}

}  // namespace gramint::sim
