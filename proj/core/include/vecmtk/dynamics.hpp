#pragma once

#include <Eigen/Dense>
#include <nlohmann/json.hpp>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "vecmtk/johansen.hpp"
#include "vecmtk/panel.hpp"
#include "vecmtk/series.hpp"

namespace vecmtk {

// y_t = sum_i A_i y_{t-i} + c + D d_t + e_t in levels.
struct LevelVarModel {
  std::vector<std::string> names;
  std::vector<Eigen::MatrixXd> A;  // A_1 .. A_order, each p x p
  Eigen::VectorXd constant;        // p
  Eigen::MatrixXd dummy_coefficients;  // p x 3, or p x 0 without seasonal dummies
  DummyCoding coding = DummyCoding::indicator;
  Eigen::MatrixXd residual_cov;    // p x p

  std::size_t nvars() const { return names.size(); }
  int order() const { return static_cast<int>(A.size()); }
  bool seasonal() const { return dummy_coefficients.cols() > 0; }
};

// A_1 = I + alpha beta' + Gamma_1, A_i = Gamma_i - Gamma_{i-1}, A_{k+1} = -Gamma_k.
LevelVarModel vecm_to_var(const VecmModel& m);

// Phi_0 = I, Phi_s = sum_{i=1..min(s, order)} Phi_{s-i} A_i, for s = 0..H.
std::vector<Eigen::MatrixXd> ma_coefficients(const LevelVarModel& m, int H);

struct ForecastResult {
  std::vector<std::string> names;
  std::vector<Quarter> index;       // forecast quarters
  Eigen::MatrixXd point;            // h x p levels
  std::optional<Eigen::MatrixXd> actual;  // h x p
  Eigen::VectorXd rmse;             // p, empty without actuals
  Eigen::VectorXd mape;             // p, percent

  int horizon() const { return static_cast<int>(point.rows()); }
};

// Iterates the level recursion h steps from the last `order` rows of
// `history`, feeding forecasts back in. `future` supplies the seasonal
// dummies for the h forecast quarters (ignored for a model without them).
ForecastResult forecast(const LevelVarModel& m, const Panel& history, int h,
                        const DummySet& future);
// Same, with future dummies generated from the calendar after history's last quarter.
ForecastResult forecast(const LevelVarModel& m, const Panel& history, int h);

// Attaches actuals (rows matched by quarter) and fills rmse / mape.
void evaluate(ForecastResult& f, const Panel& actuals);

double rmse(std::span<const double> actual, std::span<const double> predicted);
// (100/N) sum |y - yhat| / |y|. A zero actual throws DataError naming the
// quarter when `index` is given, else the position.
double mape(std::span<const double> actual, std::span<const double> predicted,
            std::span<const Quarter> index = {});

// Permutation of the model variables used for the triangular factorization.
// Empty means panel order.
using Ordering = std::vector<std::string>;

// Cholesky factor of the residual covariance taken in `ordering`, then mapped
// back to model order on both axes. Column j is the impact of the shock
// attached to variable j; P P' equals the residual covariance.
Eigen::MatrixXd impact_matrix(const LevelVarModel& m, const Ordering& ordering = {});

struct IrfResult {
  std::string impulse;
  std::vector<std::string> names;     // responding variables, model order
  Ordering ordering;
  bool cumulative = false;
  Eigen::MatrixXd responses;          // (H+1) x p
};

// Orthogonalized responses to a one-standard-deviation shock in `impulse`.
// Default units are differences, (Phi_s - Phi_{s-1}) P; cumulative = true
// gives level responses Phi_s P.
IrfResult irf(const LevelVarModel& m, const std::string& impulse, int H,
              const Ordering& ordering = {}, bool cumulative = false);

struct FevdMatrix {
  std::vector<std::string> names;  // targets and shocks, model order
  Ordering ordering;
  // tables[j](h-1, m): share of target j's h-step error variance due to the
  // shock of variable m, h = 1..H.
  std::vector<Eigen::MatrixXd> tables;

  int horizon() const { return tables.empty() ? 0 : static_cast<int>(tables[0].rows()); }
};

// Theta_s = Phi_s P; share = sum_{s<h} Theta_s[j,m]^2 / sum_{s<h} sum_m Theta_s[j,m]^2.
FevdMatrix fevd(const LevelVarModel& m, int H = 8, const Ordering& ordering = {});

void write_forecast_csv(const ForecastResult& f, std::ostream& out);
void write_irf_csv(const IrfResult& r, std::ostream& out);
void write_fevd_csv(const FevdMatrix& f, std::ostream& out);

nlohmann::json to_json(const LevelVarModel& m);
nlohmann::json to_json(const ForecastResult& f);
nlohmann::json to_json(const IrfResult& r);
nlohmann::json to_json(const FevdMatrix& f);

std::string render_forecast(const ForecastResult& f);
// One table per target variable, H rows each, titled with the "d." prefix.
std::string render_fevd(const FevdMatrix& f);

}  // namespace vecmtk
