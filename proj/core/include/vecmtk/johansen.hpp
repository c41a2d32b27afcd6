#pragma once

#include <Eigen/Dense>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "vecmtk/critical_values.hpp"
#include "vecmtk/panel.hpp"
#include "vecmtk/regress.hpp"
#include "vecmtk/series.hpp"

namespace vecmtk {

// Deterministic regressors shared by the rank test and the VECM: always an
// unrestricted constant, plus sd1..sd3 when `seasonal` is set.
struct VecmDeterministics {
  bool seasonal = true;
  DummyCoding coding = DummyCoding::indicator;
};

struct JohansenResult {
  std::vector<std::string> names;
  int k = 0;                 // differenced lags in the concentration step
  std::size_t t_eff = 0;     // rows used in the product moments
  VecmDeterministics deterministics;
  TraceTable table = TraceTable::standard;

  Eigen::VectorXd eigenvalues;  // descending, in [0, 1)
  Eigen::VectorXd trace_stats;  // H0: rank <= r, r = 0..p-1
  std::vector<double> critical_values_5pct;
  std::vector<bool> rejected;   // trace_stats[r] > cv[r]
  int selected_rank = 0;

  // Eigenvectors mapped back from the Cholesky-reduced problem, so that
  // raw_beta' S11 raw_beta = I. Columns follow `eigenvalues`.
  Eigen::MatrixXd raw_beta;
  // raw_beta with each column scaled so its first nonzero coordinate is 1.
  Eigen::MatrixXd beta;
  // S01 beta (beta' S11 beta)^{-1} for the normalized beta.
  Eigen::MatrixXd alpha;

  Eigen::MatrixXd S00, S01, S11;
};

// Smallest r with trace_stats[r] <= critical_values[r]; p if every null is
// rejected.
int select_rank(const Eigen::VectorXd& trace_stats, const std::vector<double>& critical_values);

// Reduced-rank regression of dy_t on y_{t-1} after concentrating out k lagged
// differences and the deterministic terms. The generalized eigenproblem
// |lambda S11 - S10 S00^{-1} S01| = 0 is solved through the Cholesky factor of
// S11. Requires T_eff > p(k+1) + 5.
JohansenResult johansen_trace(const Panel& panel, int k, const VecmDeterministics& det = {},
                              TraceTable table = TraceTable::standard);

// Cointegrating vectors for a chosen rank: the first r eigenvectors normalized
// on their leading r x r block (identity on top) when that block is well
// conditioned, otherwise scaled to a unit first nonzero coordinate.
Eigen::MatrixXd normalized_beta(const JohansenResult& j, int r);

// log|Sigma| + (k_prime / T_eff) log(T_eff). Throws ConditioningError when
// Sigma is not positive definite.
double msbic(const Eigen::MatrixXd& residual_cov, double k_prime, std::size_t t_eff);

struct LagSelection {
  int selected_k = 1;
  std::vector<double> criteria;  // criteria[k-1] for k = 1..max_k
  std::size_t t_eff = 0;         // common sample used for every k
};

// MSBIC over k = 1..max_k for the unrestricted system
//   dy_t on dy_{t-1..t-k}, deterministics, y_{t-1}
// fitted on the common sample that the largest k allows. k' counts every
// estimated coefficient in the system (p equations times regressors per
// equation). Ties go to the smaller k.
LagSelection select_lag(const Panel& panel, int max_k, const VecmDeterministics& det = {});

struct VecmModel {
  std::vector<std::string> names;  // level variables, panel order
  Quarter first, last;             // panel span the model was fitted on
  int k = 1;
  int rank = 0;
  VecmDeterministics deterministics;

  Eigen::MatrixXd beta;   // p x r
  Eigen::MatrixXd alpha;  // p x r, loadings on ec1..ecr from the OLS fits
  std::vector<std::string> regressor_names;
  std::vector<RegressionResult> equations;  // one per d.<name>
  Eigen::MatrixXd residual_cov;             // E'E / T_eff
  std::size_t t_eff = 0;

  std::size_t nvars() const { return names.size(); }
  // Short-run matrix Gamma_i (1-based): entry (e, j) is equation e's
  // coefficient on d.<name_j>.l<i>.
  Eigen::MatrixXd gamma(int i) const;
  // p x (1 + dummies): constant then sd1..sd3 per equation.
  Eigen::MatrixXd deterministic_coefficients() const;
  Eigen::MatrixXd pi() const { return alpha * beta.transpose(); }
};

// beta from johansen_trace, EC series beta' y_{t-1}, one OLS per equation on
// the shared design. 0 <= r <= p; r = 0 gives a VAR in differences.
VecmModel estimate_vecm(const Panel& panel, int r, int k, const VecmDeterministics& det = {});

nlohmann::json to_json(const JohansenResult& j);
nlohmann::json to_json(const VecmModel& m);
VecmModel vecm_from_json(const nlohmann::json& doc);

// Rank-test table: hypothesis, eigenvalue, trace, 5% cv, result.
std::string render_johansen(const JohansenResult& j);
// One regression table per equation, titled by its response.
std::string render_vecm(const VecmModel& m);

}  // namespace vecmtk
