#include "vecmtk/unitroot.hpp"

#include <cmath>
#include <limits>

#include "vecmtk/errors.hpp"
#include "vecmtk/series.hpp"

namespace vecmtk {

namespace {

// ADF design with `lags` lagged differences on rows t = start..T-1, where
// start >= lags + 1 so that every lag exists.
struct AdfDesign {
  Eigen::VectorXd dy;
  DesignMatrix X;
};

AdfDesign adf_design(std::span<const double> x, Deterministic det, int lags, int start) {
  const int T = static_cast<int>(x.size());
  const int n = T - start;
  AdfDesign d;
  d.X.names.push_back("x.l1");
  if (det != Deterministic::none) d.X.names.push_back("const");
  if (det == Deterministic::constant_trend) d.X.names.push_back("trend");
  for (int i = 1; i <= lags; ++i) d.X.names.push_back("dx.l" + std::to_string(i));

  d.dy.resize(n);
  d.X.values.resize(n, static_cast<Eigen::Index>(d.X.names.size()));
  for (int row = 0; row < n; ++row) {
    const int t = start + row;
    d.dy(row) = x[t] - x[t - 1];
    Eigen::Index c = 0;
    d.X.values(row, c++) = x[t - 1];
    if (det != Deterministic::none) d.X.values(row, c++) = 1.0;
    if (det == Deterministic::constant_trend) d.X.values(row, c++) = static_cast<double>(t);
    for (int i = 1; i <= lags; ++i) d.X.values(row, c++) = x[t - i] - x[t - i - 1];
  }
  return d;
}

double bic(const RegressionResult& r) {
  const double n = static_cast<double>(r.nobs);
  const double k = static_cast<double>(r.coefficients.size());
  // Degenerate perfect fit: treat as the best possible value.
  if (r.rss <= 0.0) return -std::numeric_limits<double>::infinity();
  return std::log(r.rss / n) + k * std::log(n) / n;
}

AdfResult finish(const AdfDesign& d, int lags, const AdfOptions& opts) {
  AdfResult out;
  out.regression = ols(d.dy, d.X);
  out.statistic = out.regression.t_stats(0);
  out.lags_used = lags;
  out.deterministic = opts.deterministic;
  out.nobs = out.regression.nobs;
  out.critical_values = mackinnon_critical_values(
      opts.cv_deterministic.value_or(opts.deterministic), opts.cv_variables, out.nobs);
  return out;
}

}  // namespace

std::string_view to_string(LagRule r) { return r == LagRule::bic ? "bic" : "fixed"; }

LagRule parse_lag_rule(std::string_view text) {
  if (text == "fixed") return LagRule::fixed;
  if (text == "bic" || text == "auto") return LagRule::bic;
  throw ConfigError("unknown lag rule '" + std::string(text) + "' (expected fixed or bic)");
}

AdfResult adf_test(std::span<const double> x, const AdfOptions& opts) {
  if (opts.max_lags < 0) throw ConfigError("ADF max_lags must be nonnegative");
  if (x.size() < static_cast<std::size_t>(opts.max_lags) + 10) {
    throw InsufficientSampleError("ADF with max_lags=" + std::to_string(opts.max_lags) +
                                  " needs at least " + std::to_string(opts.max_lags + 10) +
                                  " observations, got " + std::to_string(x.size()));
  }
  for (double v : x) {
    if (!std::isfinite(v)) throw DataError("ADF input contains a non-finite value");
  }

  if (opts.lag_rule == LagRule::fixed) {
    return finish(adf_design(x, opts.deterministic, opts.max_lags, opts.max_lags + 1),
                  opts.max_lags, opts);
  }

  int best = 0;
  double best_ic = std::numeric_limits<double>::infinity();
  for (int L = 0; L <= opts.max_lags; ++L) {
    const auto d = adf_design(x, opts.deterministic, L, opts.max_lags + 1);
    const double ic = bic(ols(d.dy, d.X));
    if (ic < best_ic) {
      best_ic = ic;
      best = L;
    }
  }
  return finish(adf_design(x, opts.deterministic, best, best + 1), best, opts);
}

std::optional<int> classify_integration(std::span<const double> x, int max_order,
                                        const AdfOptions& opts) {
  if (max_order < 1) throw ConfigError("classify_integration needs max_order >= 1");
  std::vector<double> cur(x.begin(), x.end());
  for (int d = 0; d <= max_order; ++d) {
    if (d > 0) cur = difference(cur, 1);
    if (adf_test(cur, opts).rejects_at_5pct()) return d;
  }
  return std::nullopt;
}

EgResult engle_granger(const Panel& panel, const std::string& dependent, int max_lags,
                       LagRule rule) {
  if (panel.nvars() < 2) {
    throw ConfigError("Engle-Granger needs at least two variables, panel has " +
                      std::to_string(panel.nvars()));
  }
  const std::size_t dep = panel.column_index(dependent);
  const auto& Y = panel.values();

  DesignMatrix X;
  X.values.resize(Y.rows(), Y.cols());
  Eigen::Index c = 0;
  for (std::size_t j = 0; j < panel.nvars(); ++j) {
    if (j == dep) continue;
    X.values.col(c++) = Y.col(static_cast<Eigen::Index>(j));
    X.names.push_back(panel.names()[j]);
  }
  X.values.col(c).setOnes();
  X.names.push_back("const");

  EgResult out;
  out.dependent = dependent;
  out.step1 = ols(Y.col(static_cast<Eigen::Index>(dep)), X);

  AdfOptions opts;
  opts.deterministic = Deterministic::none;
  opts.max_lags = max_lags;
  opts.lag_rule = rule;
  opts.cv_variables = static_cast<int>(panel.nvars());
  opts.cv_deterministic = Deterministic::constant;
  const auto& e = out.step1.residuals;
  out.residual_test = adf_test(std::span<const double>(e.data(), static_cast<std::size_t>(e.size())), opts);
  out.cointegrated = out.residual_test.rejects_at_5pct();
  return out;
}

nlohmann::json to_json(const AdfResult& r) {
  return {{"statistic", r.statistic},
          {"lags_used", r.lags_used},
          {"deterministic", std::string(to_string(r.deterministic))},
          {"nobs", r.nobs},
          {"critical_values",
           {{"1%", r.critical_values.pct1},
            {"5%", r.critical_values.pct5},
            {"10%", r.critical_values.pct10}}},
          {"decision_5pct", r.rejects_at_5pct() ? "reject unit root" : "fail to reject"}};
}

nlohmann::json to_json(const EgResult& r) {
  return {{"dependent", r.dependent},
          {"step1", to_json(r.step1)},
          {"residual_test", to_json(r.residual_test)},
          {"cointegrated", r.cointegrated}};
}

}  // namespace vecmtk
