#include "vecmtk/regress.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "vecmtk/errors.hpp"

namespace vecmtk {

namespace {

constexpr double kRcondFloor = 1e-12;

// Lentz's method for the continued fraction of I_x(a,b); valid for
// x < (a+1)/(a+b+2).
double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIter = 100000;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) return h;
  }
  throw NumericalError("incomplete beta continued fraction did not converge");
}

// I_x(a,b) with y = 1 - x supplied separately to avoid cancellation.
double ibeta(double a, double b, double x, double y) {
  if (x <= 0.0) return 0.0;
  if (y <= 0.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                           a * std::log(x) + b * std::log(y);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * beta_continued_fraction(b, a, y) / b;
}

bool is_constant_column(const Eigen::VectorXd& c) {
  if (c.size() == 0 || c(0) == 0.0) return false;
  return (c.array() == c(0)).all();
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw NumericalError("incomplete beta needs a, b > 0");
  if (x < 0.0 || x > 1.0) throw NumericalError("incomplete beta needs 0 <= x <= 1");
  return ibeta(a, b, x, 1.0 - x);
}

double student_t_two_sided_p(double t, double df) {
  if (!(df > 0.0)) throw NumericalError("t distribution needs positive degrees of freedom");
  if (std::isnan(t)) return std::numeric_limits<double>::quiet_NaN();
  if (std::isinf(t)) return 0.0;
  const double t2 = t * t;
  // P(|T| > |t|) = I_{df/(df+t^2)}(df/2, 1/2)
  return std::clamp(ibeta(df / 2.0, 0.5, df / (df + t2), t2 / (df + t2)), 0.0, 1.0);
}

double student_t_cdf(double t, double df) {
  const double tail = 0.5 * student_t_two_sided_p(t, df);
  return t >= 0.0 ? 1.0 - tail : tail;
}

double f_upper_tail(double f, double d1, double d2) {
  if (!(d1 > 0.0) || !(d2 > 0.0)) throw NumericalError("F distribution needs positive df");
  if (f <= 0.0) return 1.0;
  if (std::isinf(f)) return 0.0;
  const double denom = d2 + d1 * f;
  return std::clamp(ibeta(d2 / 2.0, d1 / 2.0, d2 / denom, d1 * f / denom), 0.0, 1.0);
}

const char* significance_stars(double p) {
  if (p < 0.001) return "***";
  if (p < 0.01) return "**";
  if (p < 0.05) return "*";
  if (p < 0.1) return ".";
  return "";
}

Eigen::Index RegressionResult::index_of(const std::string& name) const {
  for (std::size_t j = 0; j < names.size(); ++j) {
    if (names[j] == name) return static_cast<Eigen::Index>(j);
  }
  throw NumericalError("regression has no coefficient '" + name + "'");
}

RegressionResult ols(const Eigen::VectorXd& y, const DesignMatrix& X) {
  X.validate();
  const Eigen::Index n = X.rows();
  const Eigen::Index k = X.cols();
  if (y.size() != n) {
    throw NumericalError("response has " + std::to_string(y.size()) + " rows, design has " +
                         std::to_string(n));
  }
  if (k == 0) throw NumericalError("design has no columns");
  if (n <= k) {
    throw InsufficientSampleError(std::to_string(n) + " observations for " +
                                  std::to_string(k) + " regressors");
  }

  // Equilibrate columns to unit norm so the pivoted-R diagonal ratio is a
  // meaningful reciprocal condition estimate.
  Eigen::VectorXd scale = X.values.colwise().norm().transpose();
  for (Eigen::Index j = 0; j < k; ++j) {
    if (scale(j) == 0.0) {
      throw SingularDesignError("column '" + X.names[static_cast<std::size_t>(j)] +
                                "' is identically zero");
    }
  }
  const Eigen::MatrixXd Xs = X.values * scale.cwiseInverse().asDiagonal();
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Xs);
  const Eigen::MatrixXd R = qr.matrixR().topLeftCorner(k, k).triangularView<Eigen::Upper>();
  const Eigen::VectorXd rdiag = R.diagonal().cwiseAbs();
  const double rmax = rdiag.maxCoeff();
  if (rdiag.minCoeff() < kRcondFloor * rmax) {
    const auto& perm = qr.colsPermutation().indices();
    std::string cols;
    for (Eigen::Index i = 0; i < k; ++i) {
      if (rdiag(i) < kRcondFloor * rmax) {
        if (!cols.empty()) cols += ", ";
        cols += X.names[static_cast<std::size_t>(perm(i))];
      }
    }
    throw SingularDesignError("collinear column(s): " + cols);
  }

  RegressionResult res;
  res.names = X.names;
  res.nobs = static_cast<std::size_t>(n);
  const Eigen::VectorXd bs = qr.solve(y);
  res.coefficients = bs.cwiseQuotient(scale);
  res.fitted = X.values * res.coefficients;
  res.residuals = y - res.fitted;
  res.rss = res.residuals.squaredNorm();
  res.df_resid = static_cast<int>(n - k);
  res.sigma2 = res.rss / res.df_resid;

  // (Xs'Xs)^{-1} = P R^{-1} R^{-T} P'
  const Eigen::MatrixXd Rinv =
      R.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(k, k));
  const Eigen::VectorXd diag_piv = Rinv.rowwise().squaredNorm();
  const auto& perm = qr.colsPermutation().indices();
  res.std_errors.resize(k);
  res.t_stats.resize(k);
  res.p_values.resize(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    const Eigen::Index j = perm(i);
    res.std_errors(j) = std::sqrt(res.sigma2 * diag_piv(i)) / scale(j);
  }
  for (Eigen::Index j = 0; j < k; ++j) {
    const double b = res.coefficients(j), se = res.std_errors(j);
    if (se > 0.0) {
      res.t_stats(j) = b / se;
    } else {
      res.t_stats(j) = b == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), b);
    }
    res.p_values(j) = student_t_two_sided_p(res.t_stats(j), res.df_resid);
  }

  for (Eigen::Index j = 0; j < k; ++j) {
    if (is_constant_column(X.values.col(j))) res.has_constant = true;
  }
  const double tss = res.has_constant ? (y.array() - y.mean()).square().sum() : y.squaredNorm();
  if (tss > 0.0) {
    res.r_squared = std::clamp(1.0 - res.rss / tss, 0.0, 1.0);
  } else {
    res.r_squared = res.rss == 0.0 ? 1.0 : 0.0;
  }
  const double dof_total = static_cast<double>(n - (res.has_constant ? 1 : 0));
  res.adj_r_squared = 1.0 - (1.0 - res.r_squared) * dof_total / res.df_resid;
  res.df_model = static_cast<int>(k - (res.has_constant ? 1 : 0));
  if (res.df_model > 0) {
    if (res.rss > 0.0) {
      res.f_stat = ((tss - res.rss) / res.df_model) / res.sigma2;
      res.f_stat = std::max(res.f_stat, 0.0);
      res.f_p_value = f_upper_tail(res.f_stat, res.df_model, res.df_resid);
    } else {
      res.f_stat = std::numeric_limits<double>::infinity();
      res.f_p_value = 0.0;
    }
  }
  return res;
}

std::string render_regression(const RegressionResult& r, const std::string& title) {
  std::ostringstream os;
  char buf[200];
  if (!title.empty()) os << title << '\n';
  std::snprintf(buf, sizeof buf, "%-18s %14s %14s %12s %12s\n", "", "Estimate", "Std. Error",
                "T-Statistic", "Pr(>|t|)");
  os << buf;
  for (std::size_t j = 0; j < r.names.size(); ++j) {
    const auto i = static_cast<Eigen::Index>(j);
    std::snprintf(buf, sizeof buf, "%-18s %14.6g %14.6g %12.3f %12.4g %s\n",
                  r.names[j].c_str(), r.coefficients(i), r.std_errors(i), r.t_stats(i),
                  r.p_values(i), significance_stars(r.p_values(i)));
    os << buf;
  }
  os << "---\nSignif. codes: 0 '***' 0.001 '**' 0.01 '*' 0.05 '.' 0.1 ' ' 1\n";
  std::snprintf(buf, sizeof buf, "Residual standard error: %.6g on %d degrees of freedom\n",
                std::sqrt(r.sigma2), r.df_resid);
  os << buf;
  std::snprintf(buf, sizeof buf, "R-squared: %.4f, Adjusted R-squared: %.4f\n", r.r_squared,
                r.adj_r_squared);
  os << buf;
  std::snprintf(buf, sizeof buf, "F-statistic: %.4g on %d and %d DF, p-value: %.4g\n",
                r.f_stat, r.df_model, r.df_resid, r.f_p_value);
  os << buf;
  std::snprintf(buf, sizeof buf, "Sample size: %zu\n", r.nobs);
  os << buf;
  return os.str();
}

nlohmann::json to_json(const RegressionResult& r) {
  nlohmann::json coefs = nlohmann::json::array();
  for (std::size_t j = 0; j < r.names.size(); ++j) {
    const auto i = static_cast<Eigen::Index>(j);
    coefs.push_back({{"name", r.names[j]},
                     {"estimate", r.coefficients(i)},
                     {"std_error", r.std_errors(i)},
                     {"t_stat", r.t_stats(i)},
                     {"p_value", r.p_values(i)}});
  }
  return {{"coefficients", coefs},
          {"nobs", r.nobs},
          {"df_model", r.df_model},
          {"df_resid", r.df_resid},
          {"rss", r.rss},
          {"sigma2", r.sigma2},
          {"r_squared", r.r_squared},
          {"adj_r_squared", r.adj_r_squared},
          {"f_stat", r.f_stat},
          {"f_p_value", r.f_p_value},
          {"has_constant", r.has_constant}};
}

RegressionResult regression_from_json(const nlohmann::json& doc) {
  RegressionResult r;
  const auto& coefs = doc.at("coefficients");
  const auto k = static_cast<Eigen::Index>(coefs.size());
  r.coefficients.resize(k);
  r.std_errors.resize(k);
  r.t_stats.resize(k);
  r.p_values.resize(k);
  for (Eigen::Index j = 0; j < k; ++j) {
    const auto& c = coefs[static_cast<std::size_t>(j)];
    r.names.push_back(c.at("name").get<std::string>());
    r.coefficients(j) = c.at("estimate").get<double>();
    r.std_errors(j) = c.at("std_error").get<double>();
    r.t_stats(j) = c.at("t_stat").get<double>();
    r.p_values(j) = c.at("p_value").get<double>();
  }
  r.nobs = doc.at("nobs").get<std::size_t>();
  r.df_model = doc.at("df_model").get<int>();
  r.df_resid = doc.at("df_resid").get<int>();
  r.rss = doc.at("rss").get<double>();
  r.sigma2 = doc.at("sigma2").get<double>();
  r.r_squared = doc.at("r_squared").get<double>();
  r.adj_r_squared = doc.at("adj_r_squared").get<double>();
  r.f_stat = doc.at("f_stat").get<double>();
  r.f_p_value = doc.at("f_p_value").get<double>();
  r.has_constant = doc.at("has_constant").get<bool>();
  return r;
}

}  // namespace vecmtk
