#include "vecmtk/panel.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "vecmtk/errors.hpp"

namespace vecmtk {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '"')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' ||
                        s.back() == '"')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == ',') {
      out.push_back(trim(line.substr(start, i - start)));
      start = i + 1;
    }
  }
  return out;
}

bool parse_double(std::string_view s, double& out) {
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

std::string location(std::string_view source, std::size_t line) {
  return std::string(source) + ":" + std::to_string(line);
}

}  // namespace

std::string_view to_string(SeriesTransform t) {
  switch (t) {
    case SeriesTransform::none:
      return "none";
    case SeriesTransform::chained_dollars_note:
      return "chained-dollars-note";
  }
  return "none";
}

SeriesTransform parse_series_transform(std::string_view text) {
  if (text == "none" || text.empty()) return SeriesTransform::none;
  if (text == "chained-dollars-note") return SeriesTransform::chained_dollars_note;
  throw ConfigError("unknown series transform '" + std::string(text) + "'");
}

std::string format_exact(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

// ---------------------------------------------------------------------------
// Panel

Panel::Panel(std::vector<Quarter> index, std::vector<std::string> names,
             Eigen::MatrixXd values)
    : index_(std::move(index)), names_(std::move(names)), values_(std::move(values)) {
  if (static_cast<std::size_t>(values_.rows()) != index_.size() ||
      static_cast<std::size_t>(values_.cols()) != names_.size()) {
    throw DataError("panel shape mismatch: " + std::to_string(values_.rows()) + "x" +
                    std::to_string(values_.cols()) + " values for " +
                    std::to_string(index_.size()) + " quarters and " +
                    std::to_string(names_.size()) + " names");
  }
  std::set<std::string> seen;
  for (const auto& n : names_) {
    if (!seen.insert(n).second) throw DataError("duplicate variable name '" + n + "'");
  }
  for (std::size_t t = 1; t < index_.size(); ++t) {
    if (index_[t] != index_[t - 1].next()) {
      throw DataError("panel index not contiguous at " + index_[t - 1].next().str());
    }
  }
  if (!values_.allFinite()) throw DataError("panel contains missing or non-finite values");
}

std::size_t Panel::column_index(std::string_view name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) {
    throw DataError("no variable named '" + std::string(name) + "' in panel");
  }
  return static_cast<std::size_t>(it - names_.begin());
}

Eigen::VectorXd Panel::column(std::string_view name) const {
  return values_.col(static_cast<Eigen::Index>(column_index(name)));
}

Panel Panel::slice(const Quarter& first, const Quarter& last) const {
  std::vector<Quarter> idx;
  std::vector<Eigen::Index> rows;
  for (std::size_t t = 0; t < index_.size(); ++t) {
    if (index_[t] >= first && index_[t] <= last) {
      idx.push_back(index_[t]);
      rows.push_back(static_cast<Eigen::Index>(t));
    }
  }
  if (idx.empty()) {
    throw DataError("sample " + first.str() + ".." + last.str() + " selects no rows");
  }
  return Panel(std::move(idx), names_, values_.middleRows(rows.front(), rows.size()));
}

Panel Panel::head(std::size_t n) const {
  n = std::min(n, index_.size());
  return Panel(std::vector<Quarter>(index_.begin(), index_.begin() + n), names_,
               values_.topRows(static_cast<Eigen::Index>(n)));
}

Panel Panel::reordered(const std::vector<std::string>& order) const {
  if (order.size() != names_.size()) {
    throw ConfigError("ordering must list all " + std::to_string(names_.size()) +
                      " variables exactly once");
  }
  Eigen::MatrixXd v(values_.rows(), values_.cols());
  std::set<std::string> seen;
  for (std::size_t j = 0; j < order.size(); ++j) {
    if (!seen.insert(order[j]).second) {
      throw ConfigError("ordering repeats variable '" + order[j] + "'");
    }
    v.col(static_cast<Eigen::Index>(j)) =
        values_.col(static_cast<Eigen::Index>(column_index(order[j])));
  }
  return Panel(index_, order, std::move(v));
}

// ---------------------------------------------------------------------------
// CSV ingestion

namespace {

DatedSeries parse_series(std::istream& in, std::string_view source,
                         std::string_view date_column, std::string_view value_column) {
  std::string line;
  if (!std::getline(in, line)) throw DataError(std::string(source) + ": empty file");
  if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF) line.erase(0, 3);

  auto header = split_csv(line);
  auto find_col = [&](std::string_view want) -> std::size_t {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == want) return i;
    }
    throw DataError(location(source, 1) + ": missing column '" + std::string(want) + "'");
  };
  const std::size_t di = find_col(date_column);
  const std::size_t vi = find_col(value_column);

  DatedSeries s;
  std::set<Quarter> seen;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto cells = split_csv(line);
    if (cells.size() <= std::max(di, vi)) {
      throw DataError(location(source, lineno) + ": expected at least " +
                      std::to_string(std::max(di, vi) + 1) + " fields");
    }
    Quarter q;
    try {
      q = parse_quarter(cells[di]);
    } catch (const DataError& e) {
      throw DataError(location(source, lineno) + ": " + e.what());
    }
    double v = 0.0;
    if (!parse_double(cells[vi], v)) {
      throw DataError(location(source, lineno) + ": unparseable value '" +
                      std::string(cells[vi]) + "' for " + q.str());
    }
    if (!seen.insert(q).second) {
      throw DataError(location(source, lineno) + ": duplicate quarter " + q.str());
    }
    s.index.push_back(q);
    s.values.push_back(v);
  }
  if (s.index.empty()) throw DataError(std::string(source) + ": no data rows");
  return s;
}

}  // namespace

DatedSeries read_series_csv(const std::filesystem::path& path,
                            std::string_view date_column,
                            std::string_view value_column) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  return parse_series(in, path.string(), date_column, value_column);
}

Panel load_panel(const std::filesystem::path& base_dir,
                 std::span<const SeriesSpec> specs) {
  if (specs.empty()) throw ConfigError("no series specified");
  std::set<std::string> names;
  for (const auto& s : specs) {
    if (!names.insert(s.name).second) {
      throw ConfigError("series name '" + s.name + "' used twice");
    }
  }

  std::vector<std::map<Quarter, double>> columns;
  std::vector<std::string> sources;
  for (const auto& spec : specs) {
    auto path = base_dir / spec.file;
    auto raw = read_series_csv(path, spec.date_column, spec.source_column);
    std::map<Quarter, double> m;
    for (std::size_t i = 0; i < raw.index.size(); ++i) m.emplace(raw.index[i], raw.values[i]);
    columns.push_back(std::move(m));
    sources.push_back(path.string());
  }

  // Intersection of the quarterly indices.
  std::vector<Quarter> common;
  for (const auto& [q, v] : columns.front()) {
    bool everywhere = std::all_of(columns.begin() + 1, columns.end(),
                                  [&](const auto& c) { return c.count(q) > 0; });
    if (everywhere) common.push_back(q);
  }
  if (common.empty()) {
    throw DataError("empty intersection: the input files share no quarters");
  }
  for (std::size_t t = 1; t < common.size(); ++t) {
    if (common[t] != common[t - 1].next()) {
      Quarter gap = common[t - 1].next();
      std::string who;
      for (std::size_t j = 0; j < columns.size(); ++j) {
        if (!columns[j].count(gap)) who = sources[j];
      }
      throw DataError("gap at " + gap.str() + " in joined index (missing from " + who + ")");
    }
  }

  Eigen::MatrixXd values(static_cast<Eigen::Index>(common.size()),
                         static_cast<Eigen::Index>(specs.size()));
  std::vector<std::string> order;
  for (std::size_t j = 0; j < specs.size(); ++j) {
    order.push_back(specs[j].name);
    for (std::size_t t = 0; t < common.size(); ++t) {
      values(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(j)) =
          columns[j].at(common[t]);
    }
  }
  return Panel(std::move(common), std::move(order), std::move(values));
}

void write_panel_csv(const Panel& panel, std::ostream& out) {
  out << "DATE";
  for (const auto& n : panel.names()) out << ',' << n;
  out << '\n';
  for (std::size_t t = 0; t < panel.nobs(); ++t) {
    out << panel.index()[t].iso_date();
    for (std::size_t j = 0; j < panel.nvars(); ++j) {
      out << ',' << format_exact(panel.values()(static_cast<Eigen::Index>(t),
                                                static_cast<Eigen::Index>(j)));
    }
    out << '\n';
  }
}

Panel read_panel_csv(std::istream& in, std::string_view source) {
  std::string line;
  if (!std::getline(in, line)) throw DataError(std::string(source) + ": empty panel file");
  auto header = split_csv(line);
  if (header.size() < 2 || header.front() != "DATE") {
    throw DataError(location(source, 1) + ": panel header must start with DATE");
  }
  std::vector<std::string> names(header.begin() + 1, header.end());
  std::vector<Quarter> index;
  std::vector<std::vector<double>> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto cells = split_csv(line);
    if (cells.size() != header.size()) {
      throw DataError(location(source, lineno) + ": expected " +
                      std::to_string(header.size()) + " fields");
    }
    try {
      index.push_back(parse_quarter(cells[0]));
    } catch (const DataError& e) {
      throw DataError(location(source, lineno) + ": " + e.what());
    }
    std::vector<double> r(names.size());
    for (std::size_t j = 0; j < names.size(); ++j) {
      if (!parse_double(cells[j + 1], r[j])) {
        throw DataError(location(source, lineno) + ": unparseable value '" +
                        std::string(cells[j + 1]) + "'");
      }
    }
    rows.push_back(std::move(r));
  }
  Eigen::MatrixXd v(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(names.size()));
  for (std::size_t t = 0; t < rows.size(); ++t) {
    for (std::size_t j = 0; j < names.size(); ++j) {
      v(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(j)) = rows[t][j];
    }
  }
  return Panel(std::move(index), std::move(names), std::move(v));
}

nlohmann::json panel_to_json(const Panel& panel) {
  nlohmann::json records = nlohmann::json::array();
  for (std::size_t t = 0; t < panel.nobs(); ++t) {
    nlohmann::json r;
    r["date"] = panel.index()[t].iso_date();
    r["quarter"] = panel.index()[t].str();
    for (std::size_t j = 0; j < panel.nvars(); ++j) {
      r[panel.names()[j]] =
          panel.values()(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(j));
    }
    records.push_back(std::move(r));
  }
  return records;
}

// ---------------------------------------------------------------------------
// Summary statistics

ColumnStats column_stats(std::span<const double> x) {
  ColumnStats s;
  s.n = x.size();
  if (x.empty()) return s;
  double sum = 0.0;
  s.min = x.front();
  s.max = x.front();
  for (double v : x) {
    sum += v;
    s.min = std::min(s.min, v);
    s.max = std::max(s.max, v);
  }
  s.mean = sum / static_cast<double>(x.size());
  // Clamp against rounding so that min <= mean <= max always holds.
  s.mean = std::clamp(s.mean, s.min, s.max);
  if (x.size() > 1) {
    double ss = 0.0;
    for (double v : x) ss += (v - s.mean) * (v - s.mean);
    s.sd = std::sqrt(ss / static_cast<double>(x.size() - 1));
  }
  return s;
}

std::vector<SummaryRow> summarize(const Panel& panel) {
  if (panel.nobs() < 2) {
    throw InsufficientSampleError("summary statistics need at least 2 observations");
  }
  std::vector<SummaryRow> diff_rows, level_rows;
  const auto& v = panel.values();
  for (std::size_t j = 0; j < panel.nvars(); ++j) {
    Eigen::VectorXd col = v.col(static_cast<Eigen::Index>(j));
    Eigen::VectorXd d = col.tail(col.size() - 1) - col.head(col.size() - 1);
    diff_rows.push_back({"d." + panel.names()[j], true,
                         column_stats(std::span<const double>(d.data(), d.size()))});
    level_rows.push_back({panel.names()[j], false,
                          column_stats(std::span<const double>(col.data(), col.size()))});
  }
  diff_rows.insert(diff_rows.end(), level_rows.begin(), level_rows.end());
  return diff_rows;
}

void write_summary_csv(std::span<const SummaryRow> rows, std::ostream& out) {
  out << "variable,differenced,n,mean,sd,min,max\n";
  for (const auto& r : rows) {
    out << r.label << ',' << (r.differenced ? 1 : 0) << ',' << r.stats.n << ','
        << format_exact(r.stats.mean) << ',' << format_exact(r.stats.sd) << ','
        << format_exact(r.stats.min) << ',' << format_exact(r.stats.max) << '\n';
  }
}

nlohmann::json summary_to_json(std::span<const SummaryRow> rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : rows) {
    out.push_back({{"variable", r.label},
                   {"differenced", r.differenced},
                   {"n", r.stats.n},
                   {"mean", r.stats.mean},
                   {"sd", r.stats.sd},
                   {"min", r.stats.min},
                   {"max", r.stats.max}});
  }
  return out;
}

std::string render_summary(std::span<const SummaryRow> rows, std::size_t nobs) {
  std::ostringstream os;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-16s %14s %14s %14s %14s\n", "", "Mean",
                "Std. Dev.", "Minimum", "Maximum");
  os << buf;
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%-16s %14.4f %14.4f %14.4f %14.4f\n", r.label.c_str(),
                  r.stats.mean, r.stats.sd, r.stats.min, r.stats.max);
    os << buf;
  }
  std::snprintf(buf, sizeof buf, "%-16s %14zu\n", "observations", nobs);
  os << buf;
  return os.str();
}

}  // namespace vecmtk
