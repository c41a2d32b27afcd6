#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <nlohmann/json.hpp>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vecmtk/quarter.hpp"

namespace vecmtk {

// Metadata tag carried through to reports; never alters values.
enum class SeriesTransform { none, chained_dollars_note };

std::string_view to_string(SeriesTransform t);
SeriesTransform parse_series_transform(std::string_view text);

// One variable of a panel and where to read it from.
struct SeriesSpec {
  std::string name;           // variable name inside the panel, unique
  std::string file;           // CSV path, relative to the load directory
  std::string source_column;  // value column inside that CSV
  std::string date_column = "DATE";
  SeriesTransform transform = SeriesTransform::none;
};

// A single dated column as read from disk, before alignment.
struct DatedSeries {
  std::vector<Quarter> index;
  std::vector<double> values;
};

// Aligned quarterly observations: T rows on a gap-free index, p named
// columns. Column order is significant downstream (Cholesky ordering).
class Panel {
 public:
  Panel() = default;
  Panel(std::vector<Quarter> index, std::vector<std::string> names,
        Eigen::MatrixXd values);

  std::size_t nobs() const { return index_.size(); }
  std::size_t nvars() const { return names_.size(); }
  const std::vector<Quarter>& index() const { return index_; }
  const std::vector<std::string>& names() const { return names_; }
  const Eigen::MatrixXd& values() const { return values_; }

  std::size_t column_index(std::string_view name) const;
  Eigen::VectorXd column(std::string_view name) const;

  // Rows with first <= quarter <= last.
  Panel slice(const Quarter& first, const Quarter& last) const;
  // First n rows.
  Panel head(std::size_t n) const;
  // Same data with columns permuted to `order` (which must name every column).
  Panel reordered(const std::vector<std::string>& order) const;

 private:
  std::vector<Quarter> index_;
  std::vector<std::string> names_;
  Eigen::MatrixXd values_;  // nobs x nvars
};

// Reads one FRED-style CSV: header row, a date column, a value column.
DatedSeries read_series_csv(const std::filesystem::path& path,
                            std::string_view date_column,
                            std::string_view value_column);

// Inner-joins every spec on the quarterly index. Fails on missing columns,
// unparseable values, duplicate quarters, an empty intersection, or a gap in
// the joined index.
Panel load_panel(const std::filesystem::path& base_dir,
                 std::span<const SeriesSpec> specs);

// Panel CSV: "DATE,<name>..." with ISO dates and round-trip exact values.
void write_panel_csv(const Panel& panel, std::ostream& out);
Panel read_panel_csv(std::istream& in, std::string_view source = "<stream>");
nlohmann::json panel_to_json(const Panel& panel);

struct ColumnStats {
  std::size_t n = 0;
  double mean = 0.0;
  double sd = 0.0;  // divisor n-1
  double min = 0.0;
  double max = 0.0;
};

ColumnStats column_stats(std::span<const double> x);

struct SummaryRow {
  std::string label;  // "d.gdp" for differenced rows
  bool differenced = false;
  ColumnStats stats;
};

// Differenced rows first, then levels, each in panel column order.
std::vector<SummaryRow> summarize(const Panel& panel);

void write_summary_csv(std::span<const SummaryRow> rows, std::ostream& out);
nlohmann::json summary_to_json(std::span<const SummaryRow> rows);
std::string render_summary(std::span<const SummaryRow> rows, std::size_t nobs);

// Shortest decimal text that parses back to the identical double.
std::string format_exact(double v);

}  // namespace vecmtk
