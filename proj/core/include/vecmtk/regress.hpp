#pragma once

#include <Eigen/Dense>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "vecmtk/series.hpp"

namespace vecmtk {

struct RegressionResult {
  std::vector<std::string> names;
  Eigen::VectorXd coefficients;
  Eigen::VectorXd std_errors;
  Eigen::VectorXd t_stats;
  Eigen::VectorXd p_values;
  Eigen::VectorXd residuals;
  Eigen::VectorXd fitted;

  std::size_t nobs = 0;
  int df_model = 0;  // F numerator df: regressors excluding the constant
  int df_resid = 0;  // n - k'
  double rss = 0.0;
  double sigma2 = 0.0;  // rss / df_resid
  double r_squared = 0.0;
  double adj_r_squared = 0.0;
  double f_stat = 0.0;
  double f_p_value = 1.0;
  bool has_constant = false;

  Eigen::Index index_of(const std::string& name) const;
  double coefficient(const std::string& name) const { return coefficients(index_of(name)); }
};

// Least squares via column-pivoted Householder QR on equilibrated columns.
// Throws InsufficientSampleError when rows <= columns and SingularDesignError
// (naming the offending columns) when the reciprocal condition estimate of
// the scaled design falls below 1e-12.
RegressionResult ols(const Eigen::VectorXd& y, const DesignMatrix& X);

// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double regularized_incomplete_beta(double a, double b, double x);

double student_t_cdf(double t, double df);
// 2 * (1 - CDF(|t|)).
double student_t_two_sided_p(double t, double df);
// P(F > f) for F(d1, d2).
double f_upper_tail(double f, double d1, double d2);

// "***" < 0.001, "**" < 0.01, "*" < 0.05, "." < 0.1, else "".
const char* significance_stars(double p);

// Fixed-width "Estimate / Std. Error / T-Statistic / Pr(>|t|)" table with
// R-squared, F-statistic, residual standard error and sample size.
std::string render_regression(const RegressionResult& r, const std::string& title);

nlohmann::json to_json(const RegressionResult& r);
// Restores everything to_json writes; residuals and fitted values stay empty.
RegressionResult regression_from_json(const nlohmann::json& doc);

}  // namespace vecmtk
