#include "vecmtk/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "vecmtk/errors.hpp"

namespace vecmtk {

namespace {

// pos[j] = position of model variable j inside the ordering.
std::vector<Eigen::Index> ordering_positions(const std::vector<std::string>& names,
                                             const Ordering& ordering) {
  const auto p = static_cast<Eigen::Index>(names.size());
  std::vector<Eigen::Index> pos(names.size());
  if (ordering.empty()) {
    for (Eigen::Index j = 0; j < p; ++j) pos[static_cast<std::size_t>(j)] = j;
    return pos;
  }
  if (ordering.size() != names.size()) {
    throw ConfigError("ordering lists " + std::to_string(ordering.size()) +
                      " variables, the model has " + std::to_string(names.size()));
  }
  std::vector<bool> seen(names.size(), false);
  for (std::size_t m = 0; m < ordering.size(); ++m) {
    std::size_t j = 0;
    while (j < names.size() && names[j] != ordering[m]) ++j;
    if (j == names.size()) throw ConfigError("ordering names unknown variable '" + ordering[m] + "'");
    if (seen[j]) throw ConfigError("ordering repeats variable '" + ordering[m] + "'");
    seen[j] = true;
    pos[j] = static_cast<Eigen::Index>(m);
  }
  return pos;
}

Ordering resolved_ordering(const std::vector<std::string>& names, const Ordering& ordering) {
  return ordering.empty() ? Ordering(names) : ordering;
}

nlohmann::json matrix_json(const Eigen::MatrixXd& M) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < M.cols(); ++j) row.push_back(M(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

LevelVarModel vecm_to_var(const VecmModel& m) {
  if (m.k < 1) throw ConfigError("VECM must have k >= 1");
  const auto p = static_cast<Eigen::Index>(m.nvars());
  LevelVarModel v;
  v.names = m.names;
  v.residual_cov = m.residual_cov;
  v.coding = m.deterministics.coding;

  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(p, p);
  std::vector<Eigen::MatrixXd> G;
  for (int i = 1; i <= m.k; ++i) G.push_back(m.gamma(i));
  const Eigen::MatrixXd Pi = m.rank > 0 ? m.pi() : Eigen::MatrixXd::Zero(p, p);

  v.A.push_back(I + Pi + G[0]);
  for (int i = 1; i < m.k; ++i) v.A.push_back(G[static_cast<std::size_t>(i)] - G[static_cast<std::size_t>(i - 1)]);
  v.A.push_back(-G.back());

  const Eigen::MatrixXd D = m.deterministic_coefficients();
  v.constant = D.col(0);
  v.dummy_coefficients = D.rightCols(D.cols() - 1);
  return v;
}

std::vector<Eigen::MatrixXd> ma_coefficients(const LevelVarModel& m, int H) {
  if (H < 0) throw ConfigError("horizon must be nonnegative");
  const auto p = static_cast<Eigen::Index>(m.nvars());
  std::vector<Eigen::MatrixXd> phi;
  phi.push_back(Eigen::MatrixXd::Identity(p, p));
  for (int s = 1; s <= H; ++s) {
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(p, p);
    for (int i = 1; i <= std::min(s, m.order()); ++i) {
      acc += phi[static_cast<std::size_t>(s - i)] * m.A[static_cast<std::size_t>(i - 1)];
    }
    phi.push_back(std::move(acc));
  }
  return phi;
}

ForecastResult forecast(const LevelVarModel& m, const Panel& history, int h,
                        const DummySet& future) {
  if (h < 1) throw ConfigError("forecast horizon must be at least 1");
  if (history.names() != m.names) {
    throw ConfigError("history variables do not match the model variables");
  }
  const int order = m.order();
  if (history.nobs() < static_cast<std::size_t>(order)) {
    throw InsufficientSampleError("forecast needs " + std::to_string(order) +
                                  " history rows, got " + std::to_string(history.nobs()));
  }
  if (m.seasonal() && future.values.rows() != h) {
    throw ConfigError("future dummies cover " + std::to_string(future.values.rows()) +
                      " quarters, horizon is " + std::to_string(h));
  }
  const auto p = static_cast<Eigen::Index>(m.nvars());
  const auto T = static_cast<Eigen::Index>(history.nobs());

  // Rolling buffer: rows 0..order-1 are the last observed levels, then forecasts.
  Eigen::MatrixXd path(order + h, p);
  path.topRows(order) = history.values().bottomRows(order);
  for (int s = 0; s < h; ++s) {
    const Eigen::Index t = order + s;
    Eigen::VectorXd y = m.constant;
    for (int i = 1; i <= order; ++i) y += m.A[static_cast<std::size_t>(i - 1)] * path.row(t - i).transpose();
    if (m.seasonal()) y += m.dummy_coefficients * future.values.row(s).transpose();
    path.row(t) = y.transpose();
  }

  ForecastResult f;
  f.names = m.names;
  f.point = path.bottomRows(h);
  Quarter q = history.index()[static_cast<std::size_t>(T - 1)];
  for (int s = 0; s < h; ++s) {
    q = q.next();
    f.index.push_back(q);
  }
  return f;
}

ForecastResult forecast(const LevelVarModel& m, const Panel& history, int h) {
  if (h < 1) throw ConfigError("forecast horizon must be at least 1");
  if (history.nobs() == 0) throw InsufficientSampleError("forecast needs a nonempty history");
  std::vector<Quarter> idx;
  Quarter q = history.index().back();
  for (int s = 0; s < h; ++s) idx.push_back(q = q.next());
  return forecast(m, history, h, seasonal_dummies(idx, m.coding));
}

double rmse(std::span<const double> actual, std::span<const double> predicted) {
  if (actual.size() != predicted.size() || actual.empty()) {
    throw NumericalError("rmse needs two nonempty series of equal length");
  }
  double ss = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    const double e = actual[i] - predicted[i];
    ss += e * e;
  }
  return std::sqrt(ss / static_cast<double>(actual.size()));
}

double mape(std::span<const double> actual, std::span<const double> predicted,
            std::span<const Quarter> index) {
  if (actual.size() != predicted.size() || actual.empty()) {
    throw NumericalError("mape needs two nonempty series of equal length");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    if (actual[i] == 0.0) {
      const std::string where =
          i < index.size() ? index[i].str() : "position " + std::to_string(i);
      throw DataError("mape undefined: actual value is zero at " + where);
    }
    acc += std::fabs(actual[i] - predicted[i]) / std::fabs(actual[i]);
  }
  return 100.0 * acc / static_cast<double>(actual.size());
}

void evaluate(ForecastResult& f, const Panel& actuals) {
  const auto h = static_cast<Eigen::Index>(f.index.size());
  const auto p = static_cast<Eigen::Index>(f.names.size());
  Eigen::MatrixXd act(h, p);
  for (Eigen::Index j = 0; j < p; ++j) {
    const std::size_t col = actuals.column_index(f.names[static_cast<std::size_t>(j)]);
    for (Eigen::Index s = 0; s < h; ++s) {
      const Quarter& q = f.index[static_cast<std::size_t>(s)];
      const auto& idx = actuals.index();
      const auto it = std::lower_bound(idx.begin(), idx.end(), q);
      if (it == idx.end() || *it != q) throw DataError("no actual value for " + q.str());
      act(s, j) = actuals.values()(it - idx.begin(), static_cast<Eigen::Index>(col));
    }
  }
  f.rmse.resize(p);
  f.mape.resize(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    const Eigen::VectorXd a = act.col(j), y = f.point.col(j);
    const std::span<const double> as(a.data(), static_cast<std::size_t>(h));
    const std::span<const double> ys(y.data(), static_cast<std::size_t>(h));
    f.rmse(j) = rmse(as, ys);
    f.mape(j) = mape(as, ys, f.index);
  }
  f.actual = std::move(act);
}

Eigen::MatrixXd impact_matrix(const LevelVarModel& m, const Ordering& ordering) {
  const auto pos = ordering_positions(m.names, ordering);
  const auto p = static_cast<Eigen::Index>(m.nvars());
  Eigen::MatrixXd S(p, p);
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) {
      S(pos[static_cast<std::size_t>(i)], pos[static_cast<std::size_t>(j)]) = m.residual_cov(i, j);
    }
  }
  Eigen::LLT<Eigen::MatrixXd> llt(S);
  if (llt.info() != Eigen::Success) {
    throw ConditioningError("residual covariance is not positive definite");
  }
  const Eigen::MatrixXd L = llt.matrixL();
  Eigen::MatrixXd P(p, p);
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) {
      P(i, j) = L(pos[static_cast<std::size_t>(i)], pos[static_cast<std::size_t>(j)]);
    }
  }
  return P;
}

IrfResult irf(const LevelVarModel& m, const std::string& impulse, int H, const Ordering& ordering,
              bool cumulative) {
  if (H < 0) throw ConfigError("IRF horizon must be nonnegative");
  std::size_t shock = 0;
  while (shock < m.names.size() && m.names[shock] != impulse) ++shock;
  if (shock == m.names.size()) throw ConfigError("unknown impulse variable '" + impulse + "'");

  const Eigen::MatrixXd P = impact_matrix(m, ordering);
  const auto phi = ma_coefficients(m, H);
  const Eigen::VectorXd col = P.col(static_cast<Eigen::Index>(shock));

  IrfResult r;
  r.impulse = impulse;
  r.names = m.names;
  r.ordering = resolved_ordering(m.names, ordering);
  r.cumulative = cumulative;
  r.responses.resize(H + 1, static_cast<Eigen::Index>(m.nvars()));
  for (int s = 0; s <= H; ++s) {
    Eigen::VectorXd level = phi[static_cast<std::size_t>(s)] * col;
    if (!cumulative && s > 0) level -= phi[static_cast<std::size_t>(s - 1)] * col;
    r.responses.row(s) = level.transpose();
  }
  return r;
}

FevdMatrix fevd(const LevelVarModel& m, int H, const Ordering& ordering) {
  if (H < 1) throw ConfigError("FEVD horizon must be at least 1");
  const Eigen::MatrixXd P = impact_matrix(m, ordering);
  const auto phi = ma_coefficients(m, H - 1);
  const auto p = static_cast<Eigen::Index>(m.nvars());

  FevdMatrix f;
  f.names = m.names;
  f.ordering = resolved_ordering(m.names, ordering);
  f.tables.assign(static_cast<std::size_t>(p), Eigen::MatrixXd(H, p));
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(p, p);  // (target, shock)
  for (int h = 1; h <= H; ++h) {
    const Eigen::MatrixXd theta = phi[static_cast<std::size_t>(h - 1)] * P;
    acc += theta.cwiseAbs2();
    for (Eigen::Index j = 0; j < p; ++j) {
      const double total = acc.row(j).sum();
      if (!(total > 0.0)) throw ConditioningError("zero forecast-error variance for " + m.names[static_cast<std::size_t>(j)]);
      f.tables[static_cast<std::size_t>(j)].row(h - 1) = acc.row(j) / total;
    }
  }
  return f;
}

void write_forecast_csv(const ForecastResult& f, std::ostream& out) {
  out << "quarter,variable,predicted";
  if (f.actual) out << ",actual";
  out << '\n';
  for (std::size_t j = 0; j < f.names.size(); ++j) {
    for (std::size_t s = 0; s < f.index.size(); ++s) {
      const auto sj = static_cast<Eigen::Index>(j), ss = static_cast<Eigen::Index>(s);
      out << f.index[s].str() << ',' << f.names[j] << ',' << format_exact(f.point(ss, sj));
      if (f.actual) out << ',' << format_exact((*f.actual)(ss, sj));
      out << '\n';
    }
  }
}

void write_irf_csv(const IrfResult& r, std::ostream& out) {
  out << "horizon";
  for (const auto& n : r.names) out << ',' << (r.cumulative ? "" : "d.") << n;
  out << '\n';
  for (Eigen::Index s = 0; s < r.responses.rows(); ++s) {
    out << s;
    for (Eigen::Index j = 0; j < r.responses.cols(); ++j) out << ',' << format_exact(r.responses(s, j));
    out << '\n';
  }
}

void write_fevd_csv(const FevdMatrix& f, std::ostream& out) {
  out << "target,horizon";
  for (const auto& n : f.names) out << ",d." << n;
  out << '\n';
  for (std::size_t j = 0; j < f.tables.size(); ++j) {
    const auto& t = f.tables[j];
    for (Eigen::Index h = 0; h < t.rows(); ++h) {
      out << "d." << f.names[j] << ',' << h + 1;
      for (Eigen::Index m = 0; m < t.cols(); ++m) out << ',' << format_exact(t(h, m));
      out << '\n';
    }
  }
}

nlohmann::json to_json(const LevelVarModel& m) {
  nlohmann::json A = nlohmann::json::array();
  for (const auto& a : m.A) A.push_back(matrix_json(a));
  return {{"variables", m.names},
          {"A", A},
          {"constant", std::vector<double>(m.constant.data(), m.constant.data() + m.constant.size())},
          {"dummy_coefficients", matrix_json(m.dummy_coefficients)},
          {"residual_cov", matrix_json(m.residual_cov)}};
}

nlohmann::json to_json(const ForecastResult& f) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t s = 0; s < f.index.size(); ++s) {
    nlohmann::json row = {{"quarter", f.index[s].str()}};
    for (std::size_t j = 0; j < f.names.size(); ++j) {
      const auto sj = static_cast<Eigen::Index>(j), ss = static_cast<Eigen::Index>(s);
      row["predicted"][f.names[j]] = f.point(ss, sj);
      if (f.actual) row["actual"][f.names[j]] = (*f.actual)(ss, sj);
    }
    rows.push_back(std::move(row));
  }
  nlohmann::json doc = {{"variables", f.names}, {"horizon", f.horizon()}, {"forecasts", rows}};
  if (f.rmse.size() > 0) {
    for (std::size_t j = 0; j < f.names.size(); ++j) {
      doc["rmse"][f.names[j]] = f.rmse(static_cast<Eigen::Index>(j));
      doc["mape_pct"][f.names[j]] = f.mape(static_cast<Eigen::Index>(j));
    }
  }
  return doc;
}

nlohmann::json to_json(const IrfResult& r) {
  return {{"impulse", r.impulse},
          {"responses_to", r.names},
          {"ordering", r.ordering},
          {"units", r.cumulative ? "levels" : "differences"},
          {"responses", matrix_json(r.responses)}};
}

nlohmann::json to_json(const FevdMatrix& f) {
  nlohmann::json tables = nlohmann::json::object();
  for (std::size_t j = 0; j < f.tables.size(); ++j) tables["d." + f.names[j]] = matrix_json(f.tables[j]);
  return {{"variables", f.names}, {"ordering", f.ordering}, {"horizon", f.horizon()}, {"tables", tables}};
}

std::string render_forecast(const ForecastResult& f) {
  std::ostringstream os;
  char buf[160];
  for (std::size_t j = 0; j < f.names.size(); ++j) {
    os << "Forecast: " << f.names[j] << '\n';
    std::snprintf(buf, sizeof buf, "%-8s %16s %16s\n", "Quarter", "Actual", "Predicted");
    os << buf;
    for (std::size_t s = 0; s < f.index.size(); ++s) {
      const auto sj = static_cast<Eigen::Index>(j), ss = static_cast<Eigen::Index>(s);
      if (f.actual) {
        std::snprintf(buf, sizeof buf, "%-8s %16.4f %16.4f\n", f.index[s].str().c_str(),
                      (*f.actual)(ss, sj), f.point(ss, sj));
      } else {
        std::snprintf(buf, sizeof buf, "%-8s %16s %16.4f\n", f.index[s].str().c_str(), "-",
                      f.point(ss, sj));
      }
      os << buf;
    }
    if (f.rmse.size() > 0) {
      std::snprintf(buf, sizeof buf, "R.M.S.E %.4f   M.A.P.E %.4f%%\n",
                    f.rmse(static_cast<Eigen::Index>(j)), f.mape(static_cast<Eigen::Index>(j)));
      os << buf;
    }
    os << '\n';
  }
  return os.str();
}

std::string render_fevd(const FevdMatrix& f) {
  std::ostringstream os;
  char buf[64];
  for (std::size_t j = 0; j < f.tables.size(); ++j) {
    os << "Variance decomposition: d." << f.names[j] << '\n';
    std::snprintf(buf, sizeof buf, "%-8s", "h");
    os << buf;
    for (const auto& n : f.names) {
      std::snprintf(buf, sizeof buf, " %12s", ("d." + n).c_str());
      os << buf;
    }
    os << '\n';
    const auto& t = f.tables[j];
    for (Eigen::Index h = 0; h < t.rows(); ++h) {
      std::snprintf(buf, sizeof buf, "%-8ld", static_cast<long>(h + 1));
      os << buf;
      for (Eigen::Index m = 0; m < t.cols(); ++m) {
        std::snprintf(buf, sizeof buf, " %12.4f", t(h, m));
        os << buf;
      }
      os << '\n';
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace vecmtk
