#include "vecmtk/johansen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>
#include <sstream>

#include "vecmtk/errors.hpp"

namespace vecmtk {

namespace {

// Y minus its least-squares projection on the columns of Z.
Eigen::MatrixXd residualize(const Eigen::MatrixXd& Y, const DesignMatrix& Z) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Z.values);
  if (qr.rank() < Z.cols()) {
    throw SingularDesignError("concentration regressors are collinear (rank " +
                              std::to_string(qr.rank()) + " of " + std::to_string(Z.cols()) +
                              ")");
  }
  return Y - Z.values * qr.solve(Y);
}

// Unit-diagonal rescaling of a covariance-like matrix, returned as the
// diagonal of D in D S D.
Eigen::VectorXd equilibrator(const Eigen::MatrixXd& S, const char* label) {
  Eigen::VectorXd d(S.rows());
  for (Eigen::Index i = 0; i < S.rows(); ++i) {
    if (!(S(i, i) > 0.0)) {
      throw ConditioningError(std::string(label) + " has a nonpositive diagonal entry at " +
                              std::to_string(i));
    }
    d(i) = 1.0 / std::sqrt(S(i, i));
  }
  return d;
}

constexpr double kRcondFloor = 1e-14;

Eigen::LLT<Eigen::MatrixXd> checked_llt(const Eigen::MatrixXd& S, const char* label) {
  Eigen::LLT<Eigen::MatrixXd> llt(S);
  if (llt.info() != Eigen::Success || !(llt.rcond() > kRcondFloor)) {
    throw ConditioningError(std::string(label) + " is numerically singular");
  }
  return llt;
}

void scale_first_nonzero(Eigen::Ref<Eigen::VectorXd> v) {
  const double big = v.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::fabs(v(i)) > 1e-12 * big) {
      v /= v(i);
      return;
    }
  }
}

std::unique_ptr<DummySet> make_dummies(const Panel& panel, const VecmDeterministics& det) {
  if (!det.seasonal) return nullptr;
  return std::make_unique<DummySet>(seasonal_dummies(panel.index(), det.coding));
}

nlohmann::json matrix_to_json(const Eigen::MatrixXd& M) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < M.cols(); ++j) row.push_back(M(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& rows, Eigen::Index nrows,
                                 Eigen::Index ncols, const char* label) {
  if (!rows.is_array() || static_cast<Eigen::Index>(rows.size()) != nrows) {
    throw DataError(std::string("model document: '") + label + "' must have " +
                    std::to_string(nrows) + " rows");
  }
  Eigen::MatrixXd M(nrows, ncols);
  for (Eigen::Index i = 0; i < nrows; ++i) {
    const auto& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != ncols) {
      throw DataError(std::string("model document: '") + label + "' row " +
                      std::to_string(i) + " must have " + std::to_string(ncols) + " entries");
    }
    for (Eigen::Index j = 0; j < ncols; ++j) M(i, j) = row[static_cast<std::size_t>(j)].get<double>();
  }
  return M;
}

}  // namespace

int select_rank(const Eigen::VectorXd& trace_stats, const std::vector<double>& critical_values) {
  if (static_cast<std::size_t>(trace_stats.size()) != critical_values.size()) {
    throw NumericalError("select_rank: " + std::to_string(trace_stats.size()) +
                         " statistics vs " + std::to_string(critical_values.size()) +
                         " critical values");
  }
  for (Eigen::Index r = 0; r < trace_stats.size(); ++r) {
    if (trace_stats(r) <= critical_values[static_cast<std::size_t>(r)]) return static_cast<int>(r);
  }
  return static_cast<int>(trace_stats.size());
}

JohansenResult johansen_trace(const Panel& panel, int k, const VecmDeterministics& det,
                              TraceTable table) {
  if (k < 1) throw ConfigError("Johansen test needs k >= 1 differenced lags");
  const auto p = static_cast<Eigen::Index>(panel.nvars());
  const auto T = static_cast<Eigen::Index>(panel.nobs());
  const Eigen::Index t_eff = T - k - 1;
  if (t_eff <= p * (k + 1) + 5) {
    throw InsufficientSampleError("Johansen test with p=" + std::to_string(p) + ", k=" +
                                  std::to_string(k) + " needs T_eff > " +
                                  std::to_string(p * (k + 1) + 5) + ", got " +
                                  std::to_string(t_eff));
  }
  // Resolve the critical values first so a bad table choice fails before any work.
  auto cvs = trace_critical_values_5pct(table, static_cast<int>(p));

  const auto dummies = make_dummies(panel, det);
  const VecmDesign d = build_vecm_design(panel, k, Eigen::MatrixXd(), dummies.get());
  const Eigen::MatrixXd ylag = panel.values().middleRows(static_cast<Eigen::Index>(d.first_row) - 1, t_eff);

  const Eigen::MatrixXd R0 = residualize(d.responses, d.regressors);
  const Eigen::MatrixXd R1 = residualize(ylag, d.regressors);
  const double n = static_cast<double>(t_eff);

  JohansenResult out;
  out.names = panel.names();
  out.k = k;
  out.t_eff = static_cast<std::size_t>(t_eff);
  out.deterministics = det;
  out.table = table;
  out.S00 = R0.transpose() * R0 / n;
  out.S01 = R0.transpose() * R1 / n;
  out.S11 = R1.transpose() * R1 / n;

  // Equilibrate both moment matrices; the eigenvalues are unaffected and the
  // Cholesky factors stay well scaled when levels differ by orders of magnitude.
  const Eigen::VectorXd d0 = equilibrator(out.S00, "S00");
  const Eigen::VectorXd d1 = equilibrator(out.S11, "S11");
  const Eigen::MatrixXd S00s = d0.asDiagonal() * out.S00 * d0.asDiagonal();
  const Eigen::MatrixXd S01s = d0.asDiagonal() * out.S01 * d1.asDiagonal();
  const Eigen::MatrixXd S11s = d1.asDiagonal() * out.S11 * d1.asDiagonal();

  const auto llt00 = checked_llt(S00s, "S00");
  const auto llt11 = checked_llt(S11s, "S11");
  const Eigen::MatrixXd L = llt11.matrixL();

  // C = L^{-1} S10 S00^{-1} S01 L^{-T}
  const Eigen::MatrixXd M = S01s.transpose() * llt00.solve(S01s);
  Eigen::MatrixXd C = L.triangularView<Eigen::Lower>().solve(M);
  C = L.triangularView<Eigen::Lower>().solve(C.transpose()).eval();
  C = 0.5 * (C + C.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(C);
  if (es.info() != Eigen::Success) throw ConditioningError("eigen-decomposition failed");

  out.eigenvalues.resize(p);
  Eigen::MatrixXd U(p, p);
  for (Eigen::Index i = 0; i < p; ++i) {
    const double lam = es.eigenvalues()(p - 1 - i);
    out.eigenvalues(i) = std::clamp(lam, 0.0, std::nextafter(1.0, 0.0));
    U.col(i) = es.eigenvectors().col(p - 1 - i);
  }
  // v = D1 L^{-T} u
  out.raw_beta = d1.asDiagonal() * L.transpose().triangularView<Eigen::Upper>().solve(U);

  out.beta = out.raw_beta;
  for (Eigen::Index j = 0; j < p; ++j) scale_first_nonzero(out.beta.col(j));
  out.alpha = out.S01 * out.beta *
              (out.beta.transpose() * out.S11 * out.beta).ldlt().solve(Eigen::MatrixXd::Identity(p, p));

  out.trace_stats.resize(p);
  double tail = 0.0;
  for (Eigen::Index r = p - 1; r >= 0; --r) {
    tail += std::log1p(-out.eigenvalues(r));
    out.trace_stats(r) = -n * tail;
  }
  out.critical_values_5pct = std::move(cvs);
  for (Eigen::Index r = 0; r < p; ++r) {
    out.rejected.push_back(out.trace_stats(r) > out.critical_values_5pct[static_cast<std::size_t>(r)]);
  }
  out.selected_rank = select_rank(out.trace_stats, out.critical_values_5pct);
  return out;
}

Eigen::MatrixXd normalized_beta(const JohansenResult& j, int r) {
  const auto p = j.raw_beta.rows();
  if (r < 0 || r > p) {
    throw ConfigError("cointegrating rank must lie in 0.." + std::to_string(p) + ", got " +
                      std::to_string(r));
  }
  Eigen::MatrixXd B = j.raw_beta.leftCols(r);
  if (r == 0) return B;
  const Eigen::MatrixXd block = B.topRows(r);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(block);
  const auto& sv = svd.singularValues();
  if (sv(r - 1) > 1e-10 * sv(0)) {
    return B * block.partialPivLu().inverse();
  }
  for (Eigen::Index c = 0; c < r; ++c) scale_first_nonzero(B.col(c));
  return B;
}

double msbic(const Eigen::MatrixXd& residual_cov, double k_prime, std::size_t t_eff) {
  if (residual_cov.rows() != residual_cov.cols() || residual_cov.rows() == 0) {
    throw NumericalError("msbic needs a nonempty square covariance");
  }
  if (t_eff < 2) throw InsufficientSampleError("msbic needs T_eff >= 2");
  Eigen::LLT<Eigen::MatrixXd> llt(residual_cov);
  if (llt.info() != Eigen::Success) {
    throw ConditioningError("residual covariance is not positive definite");
  }
  const Eigen::MatrixXd L = llt.matrixL();
  double logdet = 0.0;
  for (Eigen::Index i = 0; i < L.rows(); ++i) {
    if (!(L(i, i) > 0.0)) throw ConditioningError("residual covariance is not positive definite");
    logdet += 2.0 * std::log(L(i, i));
  }
  const double T = static_cast<double>(t_eff);
  return logdet + k_prime / T * std::log(T);
}

LagSelection select_lag(const Panel& panel, int max_k, const VecmDeterministics& det) {
  if (max_k < 1) throw ConfigError("select_lag needs max_k >= 1");
  const std::size_t p = panel.nvars();
  if (panel.nobs() <= static_cast<std::size_t>(max_k) + 1) {
    throw InsufficientSampleError("panel of " + std::to_string(panel.nobs()) +
                                  " rows cannot support max_k=" + std::to_string(max_k));
  }
  LagSelection out;
  double best = std::numeric_limits<double>::infinity();
  const Quarter last = panel.index().back();
  for (int k = 1; k <= max_k; ++k) {
    // Drop max_k - k leading rows so every k sees the same usable rows.
    const Panel sub = panel.slice(panel.index()[static_cast<std::size_t>(max_k - k)], last);
    const auto dummies = make_dummies(sub, det);
    const Eigen::MatrixXd levels = error_correction_terms(sub, Eigen::MatrixXd::Identity(
                                                                    static_cast<Eigen::Index>(p),
                                                                    static_cast<Eigen::Index>(p)));
    const VecmDesign d = build_vecm_design(sub, k, levels, dummies.get());
    const Eigen::MatrixXd E = residualize(d.responses, d.regressors);
    const auto t_eff = static_cast<std::size_t>(E.rows());
    const Eigen::MatrixXd sigma = E.transpose() * E / static_cast<double>(t_eff);
    const double k_prime = static_cast<double>(p) * static_cast<double>(d.regressors.cols());
    const double ic = msbic(sigma, k_prime, t_eff);
    out.criteria.push_back(ic);
    out.t_eff = t_eff;
    if (ic < best) {
      best = ic;
      out.selected_k = k;
    }
  }
  return out;
}

Eigen::MatrixXd VecmModel::gamma(int i) const {
  const auto p = static_cast<Eigen::Index>(nvars());
  if (i < 1 || i > k) throw NumericalError("gamma index out of range: " + std::to_string(i));
  Eigen::MatrixXd G(p, p);
  for (Eigen::Index j = 0; j < p; ++j) {
    const std::string col = "d." + names[static_cast<std::size_t>(j)] + ".l" + std::to_string(i);
    for (Eigen::Index e = 0; e < p; ++e) {
      G(e, j) = equations[static_cast<std::size_t>(e)].coefficient(col);
    }
  }
  return G;
}

Eigen::MatrixXd VecmModel::deterministic_coefficients() const {
  const auto p = static_cast<Eigen::Index>(nvars());
  const Eigen::Index nd = deterministics.seasonal ? 3 : 0;
  Eigen::MatrixXd D(p, 1 + nd);
  for (Eigen::Index e = 0; e < p; ++e) {
    const auto& eq = equations[static_cast<std::size_t>(e)];
    D(e, 0) = eq.coefficient("const");
    for (Eigen::Index s = 0; s < nd; ++s) D(e, 1 + s) = eq.coefficient(DummySet::kNames[s]);
  }
  return D;
}

VecmModel estimate_vecm(const Panel& panel, int r, int k, const VecmDeterministics& det) {
  const auto p = static_cast<int>(panel.nvars());
  if (r < 0 || r > p) {
    throw ConfigError("cointegrating rank must lie in 0.." + std::to_string(p) + ", got " +
                      std::to_string(r));
  }
  const JohansenResult j = johansen_trace(panel, k, det);

  VecmModel m;
  m.names = panel.names();
  m.first = panel.index().front();
  m.last = panel.index().back();
  m.k = k;
  m.rank = r;
  m.deterministics = det;
  m.beta = normalized_beta(j, r);

  const auto dummies = make_dummies(panel, det);
  const Eigen::MatrixXd ec = r > 0 ? error_correction_terms(panel, m.beta) : Eigen::MatrixXd();
  const VecmDesign d = build_vecm_design(panel, k, ec, dummies.get());
  m.regressor_names = d.regressors.names;
  m.t_eff = static_cast<std::size_t>(d.responses.rows());

  Eigen::MatrixXd E(d.responses.rows(), p);
  m.alpha.resize(p, r);
  for (int e = 0; e < p; ++e) {
    m.equations.push_back(ols(d.responses.col(e), d.regressors));
    const auto& eq = m.equations.back();
    E.col(e) = eq.residuals;
    for (int c = 0; c < r; ++c) m.alpha(e, c) = eq.coefficient("ec" + std::to_string(c + 1));
  }
  m.residual_cov = E.transpose() * E / static_cast<double>(m.t_eff);
  m.residual_cov = 0.5 * (m.residual_cov + m.residual_cov.transpose()).eval();
  return m;
}

nlohmann::json to_json(const JohansenResult& j) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < j.trace_stats.size(); ++r) {
    rows.push_back({{"h0_rank_le", r},
                    {"eigenvalue", j.eigenvalues(r)},
                    {"trace", j.trace_stats(r)},
                    {"cv_5pct", j.critical_values_5pct[static_cast<std::size_t>(r)]},
                    {"result", j.rejected[static_cast<std::size_t>(r)] ? "Reject" : "Fail to reject"}});
  }
  return {{"variables", j.names},
          {"k", j.k},
          {"t_eff", j.t_eff},
          {"seasonal_dummies", j.deterministics.seasonal},
          {"cv_table", std::string(to_string(j.table))},
          {"tests", rows},
          {"selected_rank", j.selected_rank},
          {"beta", matrix_to_json(j.beta)},
          {"alpha", matrix_to_json(j.alpha)}};
}

nlohmann::json to_json(const VecmModel& m) {
  nlohmann::json eqs = nlohmann::json::array();
  for (std::size_t e = 0; e < m.equations.size(); ++e) {
    auto doc = to_json(m.equations[e]);
    doc["response"] = "d." + m.names[e];
    eqs.push_back(std::move(doc));
  }
  return {{"variables", m.names},
          {"first", m.first.str()},
          {"last", m.last.str()},
          {"k", m.k},
          {"rank", m.rank},
          {"seasonal_dummies", m.deterministics.seasonal},
          {"dummy_coding", m.deterministics.coding == DummyCoding::centered ? "centered" : "indicator"},
          {"t_eff", m.t_eff},
          {"beta", matrix_to_json(m.beta)},
          {"alpha", matrix_to_json(m.alpha)},
          {"residual_cov", matrix_to_json(m.residual_cov)},
          {"regressors", m.regressor_names},
          {"equations", eqs}};
}

VecmModel vecm_from_json(const nlohmann::json& doc) {
  try {
    VecmModel m;
    m.names = doc.at("variables").get<std::vector<std::string>>();
    m.first = parse_quarter(doc.at("first").get<std::string>());
    m.last = parse_quarter(doc.at("last").get<std::string>());
    m.k = doc.at("k").get<int>();
    m.rank = doc.at("rank").get<int>();
    m.deterministics.seasonal = doc.at("seasonal_dummies").get<bool>();
    m.deterministics.coding = doc.at("dummy_coding").get<std::string>() == "centered"
                                  ? DummyCoding::centered
                                  : DummyCoding::indicator;
    m.t_eff = doc.at("t_eff").get<std::size_t>();
    const auto p = static_cast<Eigen::Index>(m.names.size());
    m.beta = matrix_from_json(doc.at("beta"), p, m.rank, "beta");
    m.alpha = matrix_from_json(doc.at("alpha"), p, m.rank, "alpha");
    m.residual_cov = matrix_from_json(doc.at("residual_cov"), p, p, "residual_cov");
    m.regressor_names = doc.at("regressors").get<std::vector<std::string>>();
    const auto& eqs = doc.at("equations");
    if (static_cast<Eigen::Index>(eqs.size()) != p) {
      throw DataError("model document: expected " + std::to_string(p) + " equations");
    }
    for (const auto& e : eqs) m.equations.push_back(regression_from_json(e));
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("model document: ") + e.what());
  }
}

std::string render_johansen(const JohansenResult& j) {
  std::ostringstream os;
  char buf[160];
  std::snprintf(buf, sizeof buf, "Johansen trace test: k = %d, T_eff = %zu, %s, cv table = %s\n",
                j.k, j.t_eff, j.deterministics.seasonal ? "constant + seasonal dummies" : "constant",
                std::string(to_string(j.table)).c_str());
  os << buf;
  std::snprintf(buf, sizeof buf, "%-10s %12s %12s %10s   %s\n", "H0", "eigenvalue", "trace",
                "5% cv", "result");
  os << buf;
  for (Eigen::Index r = 0; r < j.trace_stats.size(); ++r) {
    std::snprintf(buf, sizeof buf, "r <= %-5ld %12.5f %12.3f %10.4g   %s\n", static_cast<long>(r),
                  j.eigenvalues(r), j.trace_stats(r), j.critical_values_5pct[static_cast<std::size_t>(r)],
                  j.rejected[static_cast<std::size_t>(r)] ? "Reject" : "Fail to reject");
    os << buf;
  }
  os << "Selected rank: " << j.selected_rank << '\n';
  return os.str();
}

std::string render_vecm(const VecmModel& m) {
  std::ostringstream os;
  os << "VECM: rank " << m.rank << ", k = " << m.k << ", sample " << m.first.str() << "-"
     << m.last.str() << ", T_eff = " << m.t_eff << "\n\n";
  for (std::size_t e = 0; e < m.equations.size(); ++e) {
    os << render_regression(m.equations[e], "Equation d." + m.names[e]) << '\n';
  }
  os << "Cointegrating vectors (columns ec1..ec" << m.rank << "):\n";
  char buf[64];
  for (Eigen::Index i = 0; i < m.beta.rows(); ++i) {
    std::snprintf(buf, sizeof buf, "%-12s", m.names[static_cast<std::size_t>(i)].c_str());
    os << buf;
    for (Eigen::Index c = 0; c < m.beta.cols(); ++c) {
      std::snprintf(buf, sizeof buf, " %14.6g", m.beta(i, c));
      os << buf;
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace vecmtk
