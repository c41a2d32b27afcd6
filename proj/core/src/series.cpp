#include "vecmtk/series.hpp"

#include <cmath>
#include <limits>
#include <set>

#include "vecmtk/errors.hpp"

namespace vecmtk {

std::vector<double> difference(std::span<const double> x, int order) {
  if (order < 1) throw NumericalError("difference order must be positive");
  if (static_cast<std::size_t>(order) >= x.size()) {
    throw InsufficientSampleError("difference of order " + std::to_string(order) +
                                  " needs more than " + std::to_string(order) +
                                  " observations, got " + std::to_string(x.size()));
  }
  std::vector<double> cur(x.begin(), x.end());
  for (int d = 0; d < order; ++d) {
    for (std::size_t t = 0; t + 1 < cur.size(); ++t) cur[t] = cur[t + 1] - cur[t];
    cur.pop_back();
  }
  return cur;
}

LaggedSeries lag(std::span<const std::optional<double>> x, int j) {
  if (j < 0) throw NumericalError("lag must be nonnegative");
  if (j > 0 && static_cast<std::size_t>(j) >= x.size()) {
    throw InsufficientSampleError("lag " + std::to_string(j) + " on a series of length " +
                                  std::to_string(x.size()));
  }
  LaggedSeries out(x.size());
  for (std::size_t t = static_cast<std::size_t>(j); t < x.size(); ++t) out[t] = x[t - j];
  return out;
}

LaggedSeries lag(std::span<const double> x, int j) {
  LaggedSeries full(x.begin(), x.end());
  return lag(std::span<const std::optional<double>>(full), j);
}

DummySet seasonal_dummies(std::span<const Quarter> index, DummyCoding coding) {
  if (index.empty()) throw DataError("seasonal dummies need a nonempty index");
  DummySet d;
  d.index.assign(index.begin(), index.end());
  d.coding = coding;
  d.values = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(index.size()), 3);
  const double shift = coding == DummyCoding::centered ? 0.25 : 0.0;
  for (std::size_t t = 0; t < index.size(); ++t) {
    for (int s = 0; s < 3; ++s) {
      d.values(static_cast<Eigen::Index>(t), s) =
          (index[t].quarter == s + 1 ? 1.0 : 0.0) - shift;
    }
  }
  return d;
}

Eigen::Index DesignMatrix::index_of(const std::string& name) const {
  for (std::size_t j = 0; j < names.size(); ++j) {
    if (names[j] == name) return static_cast<Eigen::Index>(j);
  }
  throw NumericalError("design has no column '" + name + "'");
}

void DesignMatrix::validate() const {
  if (static_cast<std::size_t>(values.cols()) != names.size()) {
    throw NumericalError("design has " + std::to_string(values.cols()) + " columns but " +
                         std::to_string(names.size()) + " names");
  }
  std::set<std::string> seen;
  for (const auto& n : names) {
    if (!seen.insert(n).second) throw NumericalError("duplicate design column '" + n + "'");
  }
  for (Eigen::Index j = 0; j < values.cols(); ++j) {
    if (!values.col(j).allFinite()) {
      throw NumericalError("design column '" + names[static_cast<std::size_t>(j)] +
                           "' has non-finite entries");
    }
  }
}

void DesignMatrix::write_csv(std::ostream& out) const {
  for (std::size_t j = 0; j < names.size(); ++j) out << (j ? "," : "") << names[j];
  out << '\n';
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
      out << (j ? "," : "") << format_exact(values(i, j));
    }
    out << '\n';
  }
}

Eigen::MatrixXd error_correction_terms(const Panel& panel, const Eigen::MatrixXd& beta) {
  const auto& y = panel.values();
  if (beta.rows() != y.cols()) {
    throw NumericalError("cointegrating vectors have " + std::to_string(beta.rows()) +
                         " rows for " + std::to_string(y.cols()) + " variables");
  }
  Eigen::MatrixXd ec(y.rows(), beta.cols());
  ec.row(0).setConstant(std::numeric_limits<double>::quiet_NaN());
  if (y.rows() > 1) ec.bottomRows(y.rows() - 1) = y.topRows(y.rows() - 1) * beta;
  return ec;
}

VecmDesign build_vecm_design(const Panel& panel, int k, const Eigen::MatrixXd& ec_terms,
                             const DummySet* dummies) {
  if (k < 1) throw NumericalError("VECM needs at least one differenced lag (k >= 1)");
  const auto T = static_cast<Eigen::Index>(panel.nobs());
  const auto p = static_cast<Eigen::Index>(panel.nvars());
  const Eigen::Index r = ec_terms.size() == 0 ? 0 : ec_terms.cols();
  if (r > 0 && ec_terms.rows() != T) {
    throw NumericalError("error-correction terms must have one row per panel row");
  }
  if (dummies && static_cast<Eigen::Index>(dummies->index.size()) != T) {
    throw NumericalError("seasonal dummies must align with the panel index");
  }
  const Eigen::Index nd = dummies ? 3 : 0;
  const Eigen::Index ncols = p * k + 1 + nd + r;
  const Eigen::Index t_eff = T - k - 1;
  if (t_eff < ncols + 1) {
    throw InsufficientSampleError(std::to_string(t_eff) + " usable rows for " +
                                  std::to_string(ncols) + " regressors (T=" +
                                  std::to_string(T) + ", k=" + std::to_string(k) + ")");
  }

  const auto& y = panel.values();
  // dy row s holds y_{s+1} - y_s, i.e. the difference dated s+1.
  Eigen::MatrixXd dy = y.bottomRows(T - 1) - y.topRows(T - 1);

  VecmDesign out;
  out.first_row = static_cast<std::size_t>(k + 1);
  out.responses = dy.bottomRows(t_eff);
  for (const auto& n : panel.names()) out.response_names.push_back("d." + n);

  auto& X = out.regressors;
  X.values.resize(t_eff, ncols);
  for (Eigen::Index i = 1; i <= k; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) {
      X.names.push_back("d." + panel.names()[static_cast<std::size_t>(j)] + ".l" +
                        std::to_string(i));
    }
  }
  X.names.push_back("const");
  for (Eigen::Index s = 0; s < nd; ++s) X.names.push_back(DummySet::kNames[s]);
  for (Eigen::Index j = 0; j < r; ++j) X.names.push_back("ec" + std::to_string(j + 1));

  for (Eigen::Index row = 0; row < t_eff; ++row) {
    const Eigen::Index t = k + 1 + row;  // panel row
    Eigen::Index c = 0;
    for (Eigen::Index i = 1; i <= k; ++i) {
      // difference dated t-i lives in dy row t-i-1
      X.values.block(row, c, 1, p) = dy.row(t - i - 1);
      c += p;
    }
    X.values(row, c++) = 1.0;
    for (Eigen::Index s = 0; s < nd; ++s) X.values(row, c++) = dummies->values(t, s);
    for (Eigen::Index j = 0; j < r; ++j) X.values(row, c++) = ec_terms(t, j);
    out.index.push_back(panel.index()[static_cast<std::size_t>(t)]);
  }
  X.validate();
  return out;
}

}  // namespace vecmtk
