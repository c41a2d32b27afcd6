#include <doctest.h>

#include <algorithm>

#include "support/oracles.hpp"
#include "support/simulate.hpp"
#include "vecmtk/errors.hpp"
#include "vecmtk/johansen.hpp"

using namespace vecmtk;

namespace {

// Textbook Johansen eigenvalues: explicit loops for the data layout, the
// normal-equations oracle for every concentration regression, and a general
// (non-symmetric) eigen solve of S11^-1 S10 S00^-1 S01.
std::vector<double> oracle_eigenvalues(const Panel& panel, int k) {
  const auto& Y = panel.values();
  const int T = static_cast<int>(Y.rows()), p = static_cast<int>(Y.cols());
  std::vector<std::vector<double>> Z;
  std::vector<std::vector<double>> R0(static_cast<std::size_t>(p)), R1(static_cast<std::size_t>(p));
  std::vector<std::vector<double>> dy(static_cast<std::size_t>(p)), ylag(static_cast<std::size_t>(p));
  for (int t = k + 1; t < T; ++t) {
    std::vector<double> z;
    for (int i = 1; i <= k; ++i)
      for (int j = 0; j < p; ++j) z.push_back(Y(t - i, j) - Y(t - i - 1, j));
    z.push_back(1.0);
    Z.push_back(z);
    for (int j = 0; j < p; ++j) {
      dy[static_cast<std::size_t>(j)].push_back(Y(t, j) - Y(t - 1, j));
      ylag[static_cast<std::size_t>(j)].push_back(Y(t - 1, j));
    }
  }
  auto resid = [&](const std::vector<double>& y) {
    const auto b = testing::normal_equations_ols(Z, y);
    std::vector<double> e(y.size());
    for (std::size_t r = 0; r < y.size(); ++r) {
      double f = 0.0;
      for (std::size_t c = 0; c < b.size(); ++c) f += Z[r][c] * b[c];
      e[r] = y[r] - f;
    }
    return e;
  };
  const auto n = static_cast<Eigen::Index>(Z.size());
  Eigen::MatrixXd r0(n, p), r1(n, p);
  for (int j = 0; j < p; ++j) {
    const auto e0 = resid(dy[static_cast<std::size_t>(j)]);
    const auto e1 = resid(ylag[static_cast<std::size_t>(j)]);
    for (Eigen::Index r = 0; r < n; ++r) {
      r0(r, j) = e0[static_cast<std::size_t>(r)];
      r1(r, j) = e1[static_cast<std::size_t>(r)];
    }
  }
  const Eigen::MatrixXd S00 = r0.transpose() * r0 / static_cast<double>(n);
  const Eigen::MatrixXd S01 = r0.transpose() * r1 / static_cast<double>(n);
  const Eigen::MatrixXd S11 = r1.transpose() * r1 / static_cast<double>(n);
  const Eigen::MatrixXd M = S11.inverse() * S01.transpose() * S00.inverse() * S01;
  std::vector<double> ev;
  for (const auto& c : M.eigenvalues()) ev.push_back(c.real());
  std::sort(ev.rbegin(), ev.rend());
  return ev;
}

Panel trivariate(testing::Rng& rng, std::size_t T) {
  const auto x = testing::random_walk(rng, T, 0.2);
  const auto w = testing::random_walk(rng, T, -0.1);
  const auto u = testing::ar1(rng, T, 0.4);
  std::vector<double> y(T);
  for (std::size_t t = 0; t < T; ++t) y[t] = x[t] - 0.5 * w[t] + u[t];
  return testing::make_panel({y, x, w});
}

}  // namespace

TEST_CASE("select_rank walks the trace sequence") {
  const std::vector<double> cv = {28.1, 22.0, 15.7, 9.2};
  Eigen::VectorXd s(4);
  s << 64.2, 40.5, 19.7, 5.3;
  CHECK(select_rank(s, cv) == 3);
  s << 20.0, 40.5, 19.7, 5.3;
  CHECK(select_rank(s, cv) == 0);
  s << 64.2, 40.5, 19.7, 9.3;
  CHECK(select_rank(s, cv) == 4);
  s << 64.2, 22.0, 19.7, 9.3;  // equality is not a rejection
  CHECK(select_rank(s, cv) == 1);
}

TEST_CASE("msbic is log|Sigma| plus the Schwarz penalty") {
  Eigen::MatrixXd S(2, 2);
  S << 2.0, 0.5, 0.5, 1.0;
  const double want = std::log(1.75) + (10.0 / 100.0) * std::log(100.0);
  CHECK(msbic(S, 10.0, 100) == doctest::Approx(want).epsilon(1e-14));
  S(1, 1) = 0.1;  // indefinite
  CHECK_THROWS_AS(msbic(S, 10.0, 100), ConditioningError);
}

TEST_CASE("eigenvalues match the textbook oracle") {
  testing::Rng rng(41);
  for (int rep = 0; rep < 5; ++rep) {
    const Panel p = trivariate(rng, 150);
    for (int k : {1, 2}) {
      const auto j = johansen_trace(p, k, VecmDeterministics{false});
      const auto ev = oracle_eigenvalues(p, k);
      for (int i = 0; i < 3; ++i) {
        CHECK(j.eigenvalues(i) == doctest::Approx(ev[static_cast<std::size_t>(i)]).epsilon(1e-8));
      }
      CHECK(j.t_eff == 150u - static_cast<std::size_t>(k) - 1);
      // trace(r) = -T sum_{i>r} log(1 - lambda_i)
      double tail = 0.0;
      for (int r = 2; r >= 0; --r) {
        tail -= static_cast<double>(j.t_eff) * std::log(1.0 - ev[static_cast<std::size_t>(r)]);
        CHECK(j.trace_stats(r) == doctest::Approx(tail).epsilon(1e-8));
      }
    }
  }
}

TEST_CASE("raw eigenvectors are S11-orthonormal") {
  testing::Rng rng(42);
  const auto j = johansen_trace(trivariate(rng, 200), 2);
  const Eigen::MatrixXd G = j.raw_beta.transpose() * j.S11 * j.raw_beta;
  CHECK((G - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-9);
  for (Eigen::Index c = 0; c < 3; ++c) CHECK(j.beta(0, c) == doctest::Approx(1.0));
}

TEST_CASE("bivariate cointegrating vector is close to (1, -2)") {
  testing::Rng rng(43);
  const Panel p = testing::cointegrated_pair(rng, 400);
  const auto j = johansen_trace(p, 1, VecmDeterministics{false});
  CHECK(j.selected_rank == 1);
  const auto b = normalized_beta(j, 1);
  CHECK(b(0, 0) == doctest::Approx(1.0));
  CHECK(b(1, 0) == doctest::Approx(-2.0).epsilon(0.02));
}

TEST_CASE("OLS loadings equal the reduced-rank alpha for the chosen beta") {
  testing::Rng rng(44);
  const Panel p = trivariate(rng, 220);
  for (bool seasonal : {false, true}) {
    const VecmDeterministics det{seasonal};
    const auto j = johansen_trace(p, 2, det);
    for (int r = 1; r <= 2; ++r) {
      const auto m = estimate_vecm(p, r, 2, det);
      const Eigen::MatrixXd b = normalized_beta(j, r);
      const Eigen::MatrixXd a = j.S01 * b * (b.transpose() * j.S11 * b).inverse();
      CHECK((m.beta - b).cwiseAbs().maxCoeff() < 1e-12);
      CHECK((m.alpha - a).cwiseAbs().maxCoeff() < 1e-8 * (1.0 + a.cwiseAbs().maxCoeff()));
    }
  }
}

TEST_CASE("VECM layout, gamma extraction and residual covariance") {
  testing::Rng rng(45);
  const Panel p = trivariate(rng, 120);
  const auto m = estimate_vecm(p, 1, 2);
  CHECK(m.equations.size() == 3);
  CHECK(m.regressor_names.size() == 3 * 2 + 1 + 3 + 1);
  CHECK(m.t_eff == 117u);
  CHECK(m.gamma(2)(1, 0) == m.equations[1].coefficient("d.y1.l2"));
  CHECK(m.deterministic_coefficients().cols() == 4);
  CHECK(m.deterministic_coefficients()(2, 0) == m.equations[2].coefficient("const"));
  CHECK(m.alpha(0, 0) == m.equations[0].coefficient("ec1"));
  Eigen::MatrixXd E(117, 3);
  for (int e = 0; e < 3; ++e) E.col(e) = m.equations[static_cast<std::size_t>(e)].residuals;
  CHECK((m.residual_cov - E.transpose() * E / 117.0).cwiseAbs().maxCoeff() < 1e-10);
  CHECK_THROWS(m.gamma(3));
  CHECK_THROWS(estimate_vecm(p, 4, 2));
  CHECK_NOTHROW(estimate_vecm(p, 0, 2));
  CHECK_NOTHROW(estimate_vecm(p, 3, 2));
}

TEST_CASE("lag selection uses the common sample and returns one criterion per k") {
  testing::Rng rng(46);
  const Panel p = trivariate(rng, 200);
  const auto s = select_lag(p, 5, VecmDeterministics{false});
  CHECK(s.criteria.size() == 5);
  CHECK(s.t_eff == 200u - 5 - 1);
  const auto best = std::min_element(s.criteria.begin(), s.criteria.end()) - s.criteria.begin();
  CHECK(s.selected_k == best + 1);
  // The DGP has no lagged differences, so the penalty should win.
  CHECK(s.selected_k == 1);
}

TEST_CASE("collinear levels surface as a conditioning failure") {
  testing::Rng rng(47);
  const auto x = testing::random_walk(rng, 100);
  std::vector<double> y(x);
  for (auto& v : y) v *= 3.0;
  const Panel p = testing::make_panel({x, y});
  CHECK_THROWS_AS(johansen_trace(p, 1), NumericalError);
}

TEST_CASE("too short a sample is rejected up front") {
  testing::Rng rng(48);
  const Panel p = trivariate(rng, 15);  // T_eff 12 < p(k+1) + 5
  CHECK_THROWS_AS(johansen_trace(p, 2), InsufficientSampleError);
}

TEST_CASE("model JSON round trip preserves every coefficient") {
  testing::Rng rng(49);
  const auto m = estimate_vecm(trivariate(rng, 150), 1, 2);
  const auto back = vecm_from_json(to_json(m));
  CHECK(back.names == m.names);
  CHECK(back.k == m.k);
  CHECK(back.rank == m.rank);
  CHECK(back.first == m.first);
  CHECK(back.beta == m.beta);
  CHECK(back.alpha == m.alpha);
  CHECK(back.residual_cov == m.residual_cov);
  for (int i = 1; i <= 2; ++i) CHECK(back.gamma(i) == m.gamma(i));
  CHECK(back.deterministic_coefficients() == m.deterministic_coefficients());
}

TEST_CASE("rendered rank table") {
  testing::Rng rng(50);
  const auto j = johansen_trace(trivariate(rng, 150), 1);
  const auto text = render_johansen(j);
  CHECK(text.find("r <= 0") != std::string::npos);
  CHECK(text.find("Reject") != std::string::npos);
}
