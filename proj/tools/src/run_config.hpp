#pragma once

#include <filesystem>
#include <nlohmann/json.hpp>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "vecmtk/critical_values.hpp"
#include "vecmtk/panel.hpp"
#include "vecmtk/series.hpp"
#include "vecmtk/unitroot.hpp"

namespace vecmtk::cli {

enum class OutputFormat { text, csv, json, svg };

// Everything a subcommand needs. Every command-line flag has a field here;
// flags are applied on top of the file.
struct RunConfig {
  std::filesystem::path data_dir;  // resolved against the config file location
  std::vector<SeriesSpec> series;
  std::vector<std::string> order;  // empty: spec order
  std::optional<Quarter> sample_first, sample_last;

  int holdout = 8;           // quarters withheld from the forecast fit
  int forecast_horizon = 8;  // used when holdout = 0

  std::optional<int> lags;  // nullopt: MSBIC selection
  int max_lags = 6;
  std::optional<int> rank;  // nullopt: trace-test selection

  bool seasonal_dummies = true;
  DummyCoding dummy_coding = DummyCoding::indicator;
  TraceTable cv_table = TraceTable::standard;

  Deterministic adf_deterministic = Deterministic::constant;
  int adf_max_lags = 4;
  LagRule adf_lag_rule = LagRule::fixed;
  int max_integration_order = 2;
  std::string eg_dependent;  // empty: first variable

  int irf_horizon = 8;
  bool irf_cumulative = false;
  std::vector<std::string> ordering;  // empty: variable order
  int fevd_horizon = 8;

  std::filesystem::path output_dir;  // empty: no files, text to stdout only
  std::set<OutputFormat> formats = {OutputFormat::text, OutputFormat::csv,
                                    OutputFormat::json, OutputFormat::svg};
  std::uint64_t seed = 0;

  bool wants(OutputFormat f) const { return formats.count(f) > 0; }
  std::vector<std::string> variable_order() const;
};

// Command-line overrides; unset members leave the file value alone.
struct Overrides {
  std::optional<std::string> lags;  // "N" or "auto"
  std::optional<std::string> rank;  // "N" or "auto"
  std::optional<int> holdout;
  std::optional<std::string> ordering;  // "a,b,c"
  std::optional<std::string> cv_table;
  std::optional<std::string> out;
  std::optional<std::string> format;  // "text,csv"
  std::optional<std::uint64_t> seed;
};

// Parses and validates. Collects every problem before throwing a single
// ConfigError that lists them all, one per line.
RunConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir,
                       const Overrides& ov = {});
RunConfig load_config(const std::filesystem::path& path, const Overrides& ov = {});

// Checks that need the loaded panel (holdout against sample length).
void validate_against_panel(const RunConfig& cfg, const Panel& panel);

std::vector<std::string> split_list(const std::string& s);

}  // namespace vecmtk::cli
