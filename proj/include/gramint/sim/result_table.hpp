#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace gramint::sim {

inline constexpr const char* kArtifactVersion = "1.0.0";
inline constexpr const char* kPlotSchemaVersion = "1";

using Cell = std::variant<std::int64_t, double, std::string>;

struct ResultTable {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  /// Ordered key/value pairs written as "# key: value" header lines.
  std::vector<std::pair<std::string, std::string>> metadata;

  /// Throws std::invalid_argument unless row.size() == columns.size().
  void add_row(std::vector<Cell> row);
  void set_meta(const std::string& key, const std::string& value);
  /// Empty string when absent.
  std::string meta(const std::string& key) const;
  std::size_t column(const std::string& name) const;

  double number(std::size_t row, const std::string& col) const;
  const std::string& text(std::size_t row, const std::string& col) const;
};

/// Shortest round-trip decimal form; "nan"/"inf"/"-inf" for non-finite values.
std::string format_cell(const Cell& cell);

/// Metadata lines, then the header row, then one line per row. Multi-line
/// metadata values (the embedded config) are written one "#" line each.
void write_csv(std::ostream& out, const ResultTable& table);
std::string to_csv(const ResultTable& table);

/// One series of a plot definition: rows of `table` filtered on equality of
/// the `where` columns, plotting column x against column y.
struct PlotSeries {
  std::string label;
  std::string x;
  std::string y;
  std::vector<std::pair<std::string, std::string>> where;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::string x_scale = "linear";
  std::string y_scale = "linear";
  std::vector<PlotSeries> series;
};

/// Declarative JSON plot definition referring to `csv_path`.
std::string plot_json(const PlotSpec& spec, const ResultTable& table, const std::string& csv_path);

}  // namespace gramint::sim
