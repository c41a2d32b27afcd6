#pragma once

#include <nlohmann/json.hpp>
#include <optional>
#include <span>
#include <string>

#include "vecmtk/critical_values.hpp"
#include "vecmtk/panel.hpp"
#include "vecmtk/regress.hpp"

namespace vecmtk {

enum class LagRule { fixed, bic };

std::string_view to_string(LagRule r);
LagRule parse_lag_rule(std::string_view text);

struct AdfOptions {
  Deterministic deterministic = Deterministic::constant;
  int max_lags = 4;
  LagRule lag_rule = LagRule::fixed;
  // Critical values come from the response surface for this many variables.
  // 1 is the plain Dickey-Fuller case; Engle-Granger residual tests pass the
  // number of variables in the cointegrating regression.
  int cv_variables = 1;
  // When set, critical values use this deterministic case instead of
  // `deterministic` (the EG residual regression has no constant of its own
  // but its critical values account for the step-1 constant).
  std::optional<Deterministic> cv_deterministic;
};

struct AdfResult {
  double statistic = 0.0;  // t-ratio on x_{t-1}
  int lags_used = 0;
  Deterministic deterministic = Deterministic::constant;
  CriticalValues critical_values;
  std::size_t nobs = 0;  // rows in the test regression
  RegressionResult regression;

  // Left-tail rule: reject the unit root when statistic < cv.
  bool rejects_at_1pct() const { return statistic < critical_values.pct1; }
  bool rejects_at_5pct() const { return statistic < critical_values.pct5; }
  bool rejects_at_10pct() const { return statistic < critical_values.pct10; }
};

// Regression of dx_t on x_{t-1}, deterministic terms and `lags` lagged
// differences. Requires x.size() >= max_lags + 10. With LagRule::bic the lag
// order is chosen on the sample common to every candidate, then the chosen
// model is refitted on its own longest sample.
AdfResult adf_test(std::span<const double> x, const AdfOptions& opts = {});

// Smallest d in 0..max_order whose d-th difference rejects at 5%; nullopt when
// none does.
std::optional<int> classify_integration(std::span<const double> x, int max_order,
                                        const AdfOptions& opts = {});

struct EgResult {
  std::string dependent;
  RegressionResult step1;
  AdfResult residual_test;
  bool cointegrated = false;  // residual unit root rejected at 5%
};

// Step 1 regresses the dependent level on the remaining levels and a constant
// (regressors in panel order, constant last). Step 2 is an ADF test on the
// step-1 residuals without deterministic terms, judged against Engle-Granger
// critical values for panel.nvars() variables.
EgResult engle_granger(const Panel& panel, const std::string& dependent, int max_lags = 4,
                       LagRule rule = LagRule::fixed);

nlohmann::json to_json(const AdfResult& r);
nlohmann::json to_json(const EgResult& r);

}  // namespace vecmtk
