#include "run_config.hpp"

#include <fstream>
#include <functional>
#include <sstream>

#include "vecmtk/errors.hpp"

namespace vecmtk::cli {

namespace {

// Accumulates problems instead of stopping at the first one.
class Problems {
 public:
  void add(std::string msg) { items_.push_back(std::move(msg)); }
  bool empty() const { return items_.empty(); }

  // Runs `f`, turning any exception into a recorded problem prefixed by `where`.
  void guard(const std::string& where, const std::function<void()>& f) {
    try {
      f();
    } catch (const nlohmann::json::exception& e) {
      add(where + ": wrong type (" + std::string(e.what()) + ")");
    } catch (const std::exception& e) {
      add(where + ": " + e.what());
    }
  }

  [[noreturn]] void raise() const {
    std::string msg = "invalid configuration (" + std::to_string(items_.size()) + " problem" +
                      (items_.size() == 1 ? "" : "s") + "):";
    for (const auto& m : items_) msg += "\n  - " + m;
    throw ConfigError(msg);
  }

 private:
  std::vector<std::string> items_;
};

const std::set<std::string> kTopKeys = {
    "data_dir", "series",   "order",  "sample",  "holdout",          "forecast_horizon",
    "lags",     "max_lags", "rank",   "seasonal_dummies", "dummy_coding", "cv_table",
    "unitroot", "eg",       "irf",    "ordering", "fevd",            "output_dir",
    "formats",  "seed"};

std::optional<int> parse_count_or_auto(const std::string& text, const char* what) {
  if (text == "auto") return std::nullopt;
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text.empty()) {
    throw ConfigError(std::string(what) + " must be a nonnegative integer or 'auto', got '" +
                      text + "'");
  }
  return v;
}

std::optional<int> json_count_or_auto(const nlohmann::json& v, const char* what) {
  if (v.is_string()) return parse_count_or_auto(v.get<std::string>(), what);
  return v.get<int>();
}

OutputFormat parse_format(const std::string& s) {
  if (s == "text") return OutputFormat::text;
  if (s == "csv") return OutputFormat::csv;
  if (s == "json") return OutputFormat::json;
  if (s == "svg") return OutputFormat::svg;
  throw ConfigError("unknown output format '" + s + "' (expected text, csv, json, svg)");
}

std::vector<std::string> string_list(const nlohmann::json& v) {
  if (v.is_string()) return split_list(v.get<std::string>());
  return v.get<std::vector<std::string>>();
}

}  // namespace

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

std::vector<std::string> RunConfig::variable_order() const {
  if (!order.empty()) return order;
  std::vector<std::string> names;
  for (const auto& s : series) names.push_back(s.name);
  return names;
}

RunConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir,
                       const Overrides& ov) {
  Problems bad;
  RunConfig cfg;
  if (!doc.is_object()) throw ConfigError("configuration must be a JSON object");

  for (const auto& [key, _] : doc.items()) {
    if (!kTopKeys.count(key)) bad.add("unknown key '" + key + "'");
  }

  cfg.data_dir = base_dir;
  bad.guard("data_dir", [&] {
    if (doc.contains("data_dir")) cfg.data_dir = base_dir / doc["data_dir"].get<std::string>();
  });

  bad.guard("series", [&] {
    if (!doc.contains("series")) throw ConfigError("is required");
    const auto& arr = doc["series"];
    if (!arr.is_array() || arr.empty()) throw ConfigError("must be a nonempty array");
    std::set<std::string> names;
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string where = "series[" + std::to_string(i) + "]";
      bad.guard(where, [&] {
        const auto& s = arr[i];
        SeriesSpec spec;
        spec.name = s.at("name").get<std::string>();
        spec.file = s.at("file").get<std::string>();
        spec.source_column = s.value("column", spec.name);
        spec.date_column = s.value("date_column", std::string("DATE"));
        if (s.contains("transform")) {
          spec.transform = parse_series_transform(s["transform"].get<std::string>());
        }
        if (!names.insert(spec.name).second) {
          throw ConfigError("duplicate variable name '" + spec.name + "'");
        }
        cfg.series.push_back(std::move(spec));
      });
    }
  });

  std::set<std::string> known;
  for (const auto& s : cfg.series) known.insert(s.name);
  auto check_permutation = [&](const std::vector<std::string>& list, const std::string& what) {
    std::set<std::string> seen;
    for (const auto& n : list) {
      if (!known.count(n)) bad.add(what + ": unknown variable '" + n + "'");
      if (!seen.insert(n).second) bad.add(what + ": variable '" + n + "' listed twice");
    }
    if (!list.empty() && seen.size() != known.size()) {
      bad.add(what + ": must list every variable (" + std::to_string(known.size()) + "), got " +
              std::to_string(list.size()));
    }
  };

  bad.guard("order", [&] {
    if (doc.contains("order")) cfg.order = string_list(doc["order"]);
  });
  check_permutation(cfg.order, "order");

  bad.guard("sample", [&] {
    if (!doc.contains("sample")) return;
    const auto& s = doc["sample"];
    if (s.contains("first")) cfg.sample_first = parse_quarter(s["first"].get<std::string>());
    if (s.contains("last")) cfg.sample_last = parse_quarter(s["last"].get<std::string>());
    if (cfg.sample_first && cfg.sample_last && *cfg.sample_last < *cfg.sample_first) {
      throw ConfigError("last quarter precedes first quarter");
    }
  });

  bad.guard("holdout", [&] { cfg.holdout = doc.value("holdout", cfg.holdout); });
  if (ov.holdout) cfg.holdout = *ov.holdout;
  if (cfg.holdout < 0) bad.add("holdout: must be nonnegative");
  bad.guard("forecast_horizon", [&] { cfg.forecast_horizon = doc.value("forecast_horizon", cfg.forecast_horizon); });
  if (cfg.forecast_horizon < 1) bad.add("forecast_horizon: must be at least 1");

  bad.guard("lags", [&] {
    if (doc.contains("lags")) cfg.lags = json_count_or_auto(doc["lags"], "lags");
  });
  bad.guard("--lags", [&] {
    if (ov.lags) cfg.lags = parse_count_or_auto(*ov.lags, "lags");
  });
  if (cfg.lags && *cfg.lags < 1) bad.add("lags: must be at least 1");
  bad.guard("max_lags", [&] { cfg.max_lags = doc.value("max_lags", cfg.max_lags); });
  if (cfg.max_lags < 1) bad.add("max_lags: must be at least 1");

  bad.guard("rank", [&] {
    if (doc.contains("rank")) cfg.rank = json_count_or_auto(doc["rank"], "rank");
  });
  bad.guard("--rank", [&] {
    if (ov.rank) cfg.rank = parse_count_or_auto(*ov.rank, "rank");
  });
  if (cfg.rank && (*cfg.rank < 0 || *cfg.rank > static_cast<int>(cfg.series.size()))) {
    bad.add("rank: must lie in 0.." + std::to_string(cfg.series.size()));
  }

  bad.guard("seasonal_dummies", [&] { cfg.seasonal_dummies = doc.value("seasonal_dummies", true); });
  bad.guard("dummy_coding", [&] {
    const auto s = doc.value("dummy_coding", std::string("indicator"));
    if (s == "indicator") cfg.dummy_coding = DummyCoding::indicator;
    else if (s == "centered") cfg.dummy_coding = DummyCoding::centered;
    else throw ConfigError("expected indicator or centered, got '" + s + "'");
  });

  bad.guard("cv_table", [&] {
    if (doc.contains("cv_table")) cfg.cv_table = parse_trace_table(doc["cv_table"].get<std::string>());
  });
  bad.guard("--cv-table", [&] {
    if (ov.cv_table) cfg.cv_table = parse_trace_table(*ov.cv_table);
  });
  if (cfg.cv_table == TraceTable::paper && cfg.series.size() != 4) {
    bad.add("cv_table: 'paper' is only defined for 4 variables");
  }

  bad.guard("unitroot", [&] {
    if (!doc.contains("unitroot")) return;
    const auto& u = doc["unitroot"];
    if (u.contains("deterministic")) cfg.adf_deterministic = parse_deterministic(u["deterministic"].get<std::string>());
    cfg.adf_max_lags = u.value("max_lags", cfg.adf_max_lags);
    if (u.contains("lag_rule")) cfg.adf_lag_rule = parse_lag_rule(u["lag_rule"].get<std::string>());
    cfg.max_integration_order = u.value("max_order", cfg.max_integration_order);
  });
  if (cfg.adf_max_lags < 0) bad.add("unitroot.max_lags: must be nonnegative");
  if (cfg.max_integration_order < 1) bad.add("unitroot.max_order: must be at least 1");

  bad.guard("eg", [&] {
    if (doc.contains("eg")) cfg.eg_dependent = doc["eg"].value("dependent", std::string());
  });
  if (!cfg.eg_dependent.empty() && !known.count(cfg.eg_dependent)) {
    bad.add("eg.dependent: unknown variable '" + cfg.eg_dependent + "'");
  }

  bad.guard("irf", [&] {
    if (!doc.contains("irf")) return;
    cfg.irf_horizon = doc["irf"].value("horizon", cfg.irf_horizon);
    cfg.irf_cumulative = doc["irf"].value("cumulative", false);
  });
  if (cfg.irf_horizon < 1) bad.add("irf.horizon: must be at least 1");
  bad.guard("fevd", [&] {
    if (doc.contains("fevd")) cfg.fevd_horizon = doc["fevd"].value("horizon", cfg.fevd_horizon);
  });
  if (cfg.fevd_horizon < 1) bad.add("fevd.horizon: must be at least 1");

  bad.guard("ordering", [&] {
    if (doc.contains("ordering")) cfg.ordering = string_list(doc["ordering"]);
  });
  if (ov.ordering) cfg.ordering = split_list(*ov.ordering);
  check_permutation(cfg.ordering, "ordering");

  bad.guard("output_dir", [&] {
    if (doc.contains("output_dir")) cfg.output_dir = base_dir / doc["output_dir"].get<std::string>();
  });
  if (ov.out) cfg.output_dir = *ov.out;

  bad.guard("formats", [&] {
    if (!doc.contains("formats")) return;
    cfg.formats.clear();
    for (const auto& f : string_list(doc["formats"])) cfg.formats.insert(parse_format(f));
  });
  bad.guard("--format", [&] {
    if (!ov.format) return;
    cfg.formats.clear();
    for (const auto& f : split_list(*ov.format)) cfg.formats.insert(parse_format(f));
  });
  if (cfg.formats.empty()) bad.add("formats: at least one output format is required");

  bad.guard("seed", [&] { cfg.seed = doc.value("seed", cfg.seed); });
  if (ov.seed) cfg.seed = *ov.seed;

  // The holdout rule can be checked here when the sample span is explicit.
  if (cfg.sample_first && cfg.sample_last) {
    const int T = cfg.sample_first->distance_to(*cfg.sample_last) + 1;
    if (cfg.holdout >= T - 20) {
      bad.add("holdout: " + std::to_string(cfg.holdout) + " must be below sample length - 20 (" +
              std::to_string(T - 20) + ")");
    }
  }

  if (!bad.empty()) bad.raise();
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path, const Overrides& ov) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config file " + path.string() + " is not valid JSON: " + e.what());
  }
  return parse_config(doc, path.parent_path(), ov);
}

void validate_against_panel(const RunConfig& cfg, const Panel& panel) {
  const auto T = static_cast<int>(panel.nobs());
  if (cfg.holdout >= T - 20) {
    throw ConfigError("holdout " + std::to_string(cfg.holdout) +
                      " must be below sample length - 20 (" + std::to_string(T - 20) + ")");
  }
}

}  // namespace vecmtk::cli
