#pragma once

#include <Eigen/Dense>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "vecmtk/panel.hpp"
#include "vecmtk/quarter.hpp"

namespace vecmtk {

// x_t - x_{t-1}, applied `order` times. Output is `order` elements shorter.
std::vector<double> difference(std::span<const double> x, int order = 1);

// Entry t holds x_{t-j}; the first j entries are unavailable.
using LaggedSeries = std::vector<std::optional<double>>;
LaggedSeries lag(std::span<const double> x, int j);
LaggedSeries lag(std::span<const std::optional<double>> x, int j);

enum class DummyCoding {
  indicator,  // 0/1 with Q4 as the omitted base
  centered,   // indicator minus 1/4, for sensitivity checks
};

// sd1..sd3 aligned to an index. Row t of `values` is (sd1, sd2, sd3).
struct DummySet {
  std::vector<Quarter> index;
  Eigen::MatrixXd values;  // rows = index.size(), 3 columns
  DummyCoding coding = DummyCoding::indicator;

  static constexpr const char* kNames[3] = {"sd1", "sd2", "sd3"};
};

DummySet seasonal_dummies(std::span<const Quarter> index,
                          DummyCoding coding = DummyCoding::indicator);

// Observation rows with uniquely named regressor columns.
struct DesignMatrix {
  Eigen::MatrixXd values;
  std::vector<std::string> names;

  Eigen::Index rows() const { return values.rows(); }
  Eigen::Index cols() const { return values.cols(); }
  Eigen::Index index_of(const std::string& name) const;

  void validate() const;
  void write_csv(std::ostream& out) const;
};

struct VecmDesign {
  Eigen::MatrixXd responses;                // T_eff x p, column j is d.<name_j>
  std::vector<std::string> response_names;  // "d.gdp", ...
  DesignMatrix regressors;
  std::vector<Quarter> index;  // quarter of each usable row
  std::size_t first_row = 0;   // panel row of the first usable observation
};

// Error-correction series for cointegrating vectors `beta` (p x r): row t
// holds beta' y_{t-1}. Row 0 is NaN because y_{-1} does not exist.
Eigen::MatrixXd error_correction_terms(const Panel& panel, const Eigen::MatrixXd& beta);

// The per-equation regression layout shared by every VECM equation:
//   d.<v>.l1 for each v, ..., d.<v>.lk for each v, const, sd1..sd3, ec1..ecr.
// Usable rows are t = k+1 .. T-1 so T_eff = T - k - 1. `ec_terms` follows
// error_correction_terms(); pass an empty matrix for r = 0.
VecmDesign build_vecm_design(const Panel& panel, int k, const Eigen::MatrixXd& ec_terms,
                             const DummySet* dummies);

}  // namespace vecmtk
